// Copyright 2026 The hqfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "hqf/experiment.hpp"

namespace hqf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::parse, "config key '" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::parse, "config key '" + key + "': expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += parts[i];
    }
    return out;
}

// key, unit/description comment
const std::vector<std::pair<std::string, std::string>>& key_docs() {
    static const std::vector<std::pair<std::string, std::string>> docs = {
        {"k1", "qubit-field coupling rate [1/time]"},
        {"u", "OU decay rate [1/time]"},
        {"v", "OU noise gain [1/sqrt(time)]"},
        {"q0", "initial disturbance value [dimensionless]"},
        {"rho1", "initial qubit Bloch vector: bx by bz"},
        {"beta", "initial coherent amplitude: 'auto' (q0*alpha) or 're im'"},
        {"n_prime", "retained cavity Fock levels"},
        {"max_leakage", "largest tolerated coherent-state truncation leakage"},
        {"dt", "integration step [time]"},
        {"T", "horizon [time]"},
        {"projection_limit", "largest trace-norm change of one state projection"},
        {"N", "number of trajectories"},
        {"seed", "master RNG seed"},
        {"stride", "output every stride steps"},
        {"workers", "worker threads, 0 = all cores"},
        {"lambda", "QEKF Riccati inflation (>= 0)"},
        {"mu", "QEKF noise floor (> 0)"},
        {"s_matrix", "QEKF cross-correlation form: derived | paper"},
        {"bench_n_primes", "cavity truncations timed by bench"},
        {"bench_repeats", "minimum timed passes per truncation"},
        {"bench_min_seconds", "minimum accumulated time per truncation [s]"},
    };
    return docs;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [key, doc] : key_docs()) out.push_back(key);
        return out;
    }();
    return k;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "k1") k1 = to_double(key, value);
    else if (key == "u") u = to_double(key, value);
    else if (key == "v") v = to_double(key, value);
    else if (key == "q0") q0 = to_double(key, value);
    else if (key == "rho1") {
        const auto w = words(value);
        if (w.size() != 3) throw Error(ErrorKind::parse, "config key 'rho1': expected three Bloch components");
        rho1_bloch = {to_double(key, w[0]), to_double(key, w[1]), to_double(key, w[2])};
    } else if (key == "beta") {
        const auto w = words(value);
        if (w.size() == 1 && w[0] == "auto") beta.reset();
        else if (w.size() == 2) beta = Complex(to_double(key, w[0]), to_double(key, w[1]));
        else throw Error(ErrorKind::parse, "config key 'beta': expected 'auto' or 're im'");
    } else if (key == "n_prime") n_prime = to_uint(key, value);
    else if (key == "max_leakage") max_leakage = to_double(key, value);
    else if (key == "dt") dt = to_double(key, value);
    else if (key == "T") horizon = to_double(key, value);
    else if (key == "projection_limit") projection_limit = to_double(key, value);
    else if (key == "N") trajectories = to_uint(key, value);
    else if (key == "seed") seed = to_uint(key, value);
    else if (key == "stride") stride = to_uint(key, value);
    else if (key == "workers") workers = to_uint(key, value);
    else if (key == "lambda") lambda = to_double(key, value);
    else if (key == "mu") mu = to_double(key, value);
    else if (key == "s_matrix") {
        if (value == "derived") s_matrix = SMatrixForm::derived;
        else if (value == "paper") s_matrix = SMatrixForm::paper;
        else throw Error(ErrorKind::parse, "config key 's_matrix': expected 'derived' or 'paper'");
    } else if (key == "bench_n_primes") {
        std::vector<std::size_t> list;
        for (const auto& w : words(value)) list.push_back(to_uint(key, w));
        if (list.empty()) throw Error(ErrorKind::parse, "config key 'bench_n_primes': empty list");
        bench_n_primes = std::move(list);
    } else if (key == "bench_repeats") bench_repeats = to_uint(key, value);
    else if (key == "bench_min_seconds") bench_min_seconds = to_double(key, value);
    else throw Error(ErrorKind::parse, "unknown config key '" + key + "'");
}

std::string ExperimentConfig::get(const std::string& key) const {
    using csv::format;
    if (key == "k1") return format(k1);
    if (key == "u") return format(u);
    if (key == "v") return format(v);
    if (key == "q0") return format(q0);
    if (key == "rho1") return join({format(rho1_bloch(0)), format(rho1_bloch(1)), format(rho1_bloch(2))});
    if (key == "beta") return beta ? join({format(beta->real()), format(beta->imag())}) : "auto";
    if (key == "n_prime") return std::to_string(n_prime);
    if (key == "max_leakage") return format(max_leakage);
    if (key == "dt") return format(dt);
    if (key == "T") return format(horizon);
    if (key == "projection_limit") return format(projection_limit);
    if (key == "N") return std::to_string(trajectories);
    if (key == "seed") return std::to_string(seed);
    if (key == "stride") return std::to_string(stride);
    if (key == "workers") return std::to_string(workers);
    if (key == "lambda") return format(lambda);
    if (key == "mu") return format(mu);
    if (key == "s_matrix") return s_matrix == SMatrixForm::paper ? "paper" : "derived";
    if (key == "bench_n_primes") {
        std::vector<std::string> parts;
        for (auto n : bench_n_primes) parts.push_back(std::to_string(n));
        return join(parts);
    }
    if (key == "bench_repeats") return std::to_string(bench_repeats);
    if (key == "bench_min_seconds") return format(bench_min_seconds);
    throw Error(ErrorKind::parse, "unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::parse, "config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::parse, "config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open config " + path);
    return parse(in);
}

void ExperimentConfig::write(std::ostream& out) const {
    for (const auto& [key, doc] : key_docs()) {
        out << "# " << doc << "\n" << key << " = " << get(key) << "\n";
    }
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    write(out);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    for (const auto& key : ExperimentConfig::keys()) {
        if (a.get(key) != b.get(key)) return false;
    }
    return true;
}

void ExperimentConfig::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::invalid_argument, std::string(name) + " must be positive");
    };
    positive(k1, "k1");
    positive(u, "u");
    positive(dt, "dt");
    positive(horizon, "T");
    positive(mu, "mu");
    positive(max_leakage, "max_leakage");
    positive(projection_limit, "projection_limit");
    if (!std::isfinite(v) || v == 0.0) throw Error(ErrorKind::invalid_argument, "v must be finite and nonzero");
    if (!(dt < horizon)) throw Error(ErrorKind::invalid_argument, "dt must be smaller than T");
    if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be >= 0");
    if (trajectories < 1) throw Error(ErrorKind::invalid_argument, "N must be at least 1");
    if (n_prime < 2) throw Error(ErrorKind::invalid_argument, "n_prime must be at least 2");
    if (stride < 1) throw Error(ErrorKind::invalid_argument, "stride must be at least 1");
    if (rho1_bloch.norm() > 1.0 + 1e-12) throw Error(ErrorKind::invalid_argument, "rho1 Bloch vector longer than 1");
    for (auto n : bench_n_primes) {
        if (n < 2) throw Error(ErrorKind::invalid_argument, "bench_n_primes entries must be at least 2");
    }
}

Complex ExperimentConfig::coherent_amplitude() const {
    if (beta) return *beta;
    return Complex(q0 * analog().alpha(), 0.0);
}

DensityMatrix ExperimentConfig::qubit_initial() const {
    return qubit_state(rho1_bloch(0), rho1_bloch(1), rho1_bloch(2));
}

DensityMatrix ExperimentConfig::joint_initial(std::size_t levels) const {
    return tensor(qubit_initial(), coherent_state(coherent_amplitude(), FockTruncation(levels), max_leakage));
}

TruthSettings ExperimentConfig::truth_settings() const {
    TruthSettings s;
    s.dt = dt;
    s.horizon = horizon;
    s.projection.max_change = projection_limit;
    return s;
}

SmeRunConfig ExperimentConfig::sme_config(std::size_t levels) const {
    SmeSettings settings;
    settings.projection.max_change = projection_limit;
    return SmeRunConfig{qubit(), analog(levels), joint_initial(levels), stride, settings, {}};
}

QekfRunConfig ExperimentConfig::qekf_config(std::size_t levels) const {
    const CavityAnalog cav = analog(levels);
    QekfRunConfig cfg;
    cfg.params = QekfParams{k1, cav.k(), cav.alpha(), lambda, mu, s_matrix};
    const DensityMatrix rho0 = joint_initial(levels);
    cfg.initial.x = moments(rho0, cav);
    cfg.initial.P = symmetric_covariance(rho0, cav);
    cfg.stride = stride;
    return cfg;
}

}  // namespace hqf
