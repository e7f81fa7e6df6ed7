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

// hqf: command-line front end over the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hqf/hqf.h"

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    std::string seed, workers, n_prime, s_matrix;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "experiment config file (key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", c.seed, "master RNG seed");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    cmd->add_option("--n-prime", c.n_prime, "retained cavity Fock levels");
    cmd->add_option("--s-matrix", c.s_matrix, "QEKF cross-correlation form")
        ->check(CLI::IsMember({"paper", "derived"}));
}

int report(hqf_status s, const char* what) {
    std::fprintf(stderr, "hqf: %s failed (%s): %s\n", what, hqf_status_name(s), hqf_last_error());
    return 1;
}

/// Owns the config built from --config and the override flags.
class Session {
public:
    ~Session() { hqf_config_destroy(cfg_); }

    hqf_status open(const Common& c) {
        hqf_status s = c.config.empty() ? hqf_config_create(&cfg_) : hqf_config_load(c.config.c_str(), &cfg_);
        if (s != HQF_OK) return s;
        const std::pair<const char*, const std::string*> overrides[] = {
            {"seed", &c.seed}, {"workers", &c.workers}, {"n_prime", &c.n_prime}, {"s_matrix", &c.s_matrix}};
        for (const auto& [key, value] : overrides) {
            if (value->empty()) continue;
            if ((s = hqf_config_set(cfg_, key, value->c_str())) != HQF_OK) return s;
        }
        if ((s = hqf_config_validate(cfg_)) != HQF_OK) return s;
        std::error_code ec;
        std::filesystem::create_directories(out_dir_ = c.out, ec);
        return HQF_OK;
    }

    hqf_config* config() const { return cfg_; }
    std::string path(const std::string& name) const { return (std::filesystem::path(out_dir_) / name).string(); }

private:
    hqf_config* cfg_ = nullptr;
    std::string out_dir_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid quantum filtering: truth simulation, SME and QEKF filters, experiments"};
    app.set_version_flag("--version", std::string(hqf_version()));
    app.require_subcommand(1);

    Common sim_opts, filter_opts, exp_opts, bench_opts;

    auto* simulate = app.add_subcommand("simulate", "simulate truth trajectories and their homodyne records");
    add_common(simulate, sim_opts);
    std::string trajectories;
    simulate->add_option("-N,--trajectories", trajectories, "number of trajectories (overrides config N)");

    auto* filter = app.add_subcommand("filter", "run SME and/or QEKF over one measurement record");
    add_common(filter, filter_opts);
    std::string method = "both", record_path;
    std::uint64_t trajectory = 0;
    filter->add_option("--method", method, "filter to run")
        ->check(CLI::IsMember({"sme", "qekf", "both"}))
        ->capture_default_str();
    filter->add_option("--record", record_path, "truth CSV whose dY column is filtered (default: simulate one)")
        ->check(CLI::ExistingFile);
    filter->add_option("--trajectory", trajectory, "trajectory index simulated when --record is absent")
        ->capture_default_str();

    auto* experiment = app.add_subcommand("experiment", "ensemble, metrics, figure CSVs and timing sweep");
    add_common(experiment, exp_opts);
    bool no_bench = false;
    experiment->add_flag("--no-bench", no_bench, "skip the timing sweep");

    auto* bench = app.add_subcommand("bench", "time SME and QEKF against the cavity truncation");
    add_common(bench, bench_opts);
    std::vector<std::size_t> n_primes;
    bench->add_option("--n-primes", n_primes, "truncations to time (overrides config bench_n_primes)");

    auto* plot = app.add_subcommand("plot", "render figure CSVs in a directory as SVG");
    std::string plot_dir = "out";
    plot->add_option("--out,dir", plot_dir, "directory holding the figure CSVs")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        Session s;
        hqf_status st = s.open(sim_opts);
        if (st == HQF_OK && !trajectories.empty()) st = hqf_config_set(s.config(), "N", trajectories.c_str());
        if (st != HQF_OK) return report(st, "configuration");
        if ((st = hqf_simulate_ensemble(s.config(), sim_opts.out.c_str())) != HQF_OK) return report(st, "simulate");
        std::printf("wrote truth records to %s\n", sim_opts.out.c_str());
        return 0;
    }

    if (filter->parsed()) {
        Session s;
        hqf_status st = s.open(filter_opts);
        if (st != HQF_OK) return report(st, "configuration");
        hqf_record* rec = nullptr;
        st = record_path.empty() ? hqf_simulate(s.config(), trajectory, &rec)
                                 : hqf_record_load(record_path.c_str(), &rec);
        if (st != HQF_OK) return report(st, "record");
        if (record_path.empty() && (st = hqf_record_save(rec, s.path("truth.csv").c_str())) != HQF_OK) {
            hqf_record_destroy(rec);
            return report(st, "record export");
        }
        if (method != "qekf" && (st = hqf_filter_sme(s.config(), rec, s.path("sme.csv").c_str())) != HQF_OK) {
            hqf_record_destroy(rec);
            return report(st, "SME filter");
        }
        if (method != "sme" && (st = hqf_filter_qekf(s.config(), rec, s.path("qekf.csv").c_str())) != HQF_OK) {
            hqf_record_destroy(rec);
            return report(st, "QEKF filter");
        }
        hqf_record_destroy(rec);
        std::printf("wrote %s estimates to %s\n", method.c_str(), filter_opts.out.c_str());
        return 0;
    }

    if (experiment->parsed()) {
        Session s;
        hqf_status st = s.open(exp_opts);
        if (st != HQF_OK) return report(st, "configuration");
        hqf_metrics* m = nullptr;
        if ((st = hqf_experiment_run(s.config(), exp_opts.out.c_str(), !no_bench, &m)) != HQF_OK) {
            return report(st, "experiment");
        }
        double n = 0, sme = 0, qekf = 0;
        hqf_metrics_get(m, "trajectories", &n);
        hqf_metrics_get(m, "rmse_q_sme", &sme);
        hqf_metrics_get(m, "rmse_q_qekf", &qekf);
        hqf_metrics_destroy(m);
        std::printf("trajectories %.0f  rmse_q sme %.4g  qekf %.4g  -> %s\n", n, sme, qekf, exp_opts.out.c_str());
        return 0;
    }

    if (bench->parsed()) {
        Session s;
        hqf_status st = s.open(bench_opts);
        if (st == HQF_OK && !n_primes.empty()) {
            std::string list;
            for (auto n : n_primes) list += std::to_string(n) + " ";
            st = hqf_config_set(s.config(), "bench_n_primes", list.c_str());
        }
        if (st != HQF_OK) return report(st, "configuration");
        const std::string path = s.path("fig8_timing.csv");
        if ((st = hqf_bench(s.config(), path.c_str())) != HQF_OK) return report(st, "bench");
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (plot->parsed()) {
        size_t written = 0;
        if (hqf_status st = hqf_plot(plot_dir.c_str(), &written); st != HQF_OK) return report(st, "plot");
        std::printf("wrote %zu SVG files to %s\n", written, plot_dir.c_str());
        return 0;
    }
    return 0;
}
