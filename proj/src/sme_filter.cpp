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

#include "hqf/sme_filter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace hqf {

SmeFilter::SmeFilter(SLHModel model, const DensityMatrix& rho0, std::size_t measured_channel, SmeSettings settings)
    : model_(std::move(model)), measured_(measured_channel), settings_(settings), rho_(rho0.matrix()) {
    if (rho0.dim() != model_.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "SME initial state and model dimensions differ");
    }
    if (measured_ >= model_.channels()) {
        throw Error(ErrorKind::invalid_argument, "measured channel index out of range");
    }
    const auto n = Eigen::Index(model_.dim());
    const Complex i{0.0, 1.0};
    lm_ = model_.coupling(measured_).matrix();
    lm_dag_ = lm_.adjoint();
    nonherm_ = -i * model_.hamiltonian().matrix();
    for (std::size_t k = 0; k < model_.channels(); ++k) {
        const Matrix& l = model_.coupling(k).matrix();
        nonherm_ -= 0.5 * l.adjoint() * l;
        if (k != measured_) {
            others_.push_back(l);
            others_dag_.push_back(l.adjoint());
        }
    }
    work_.resize(n, n);
    tmp_.resize(n, n);
    lrho_.resize(n, n);
}

SmeFilter SmeFilter::for_hybrid(const QubitParams& qubit, const CavityAnalog& analog, const DensityMatrix& rho0,
                                SmeSettings settings) {
    qubit.validate();
    SmeFilter f(enlarged_model(qubit, analog), rho0, 0, settings);
    if (settings.form == SmeForm::printed) {
        // sqrt(k1) sigma_z measured; the cavity term keeps a rho a as printed.
        const Complex i{0.0, 1.0};
        f.lm_ = std::sqrt(qubit.k1) * on_qubit(pauli(Pauli::z), analog).matrix();
        f.lm_dag_ = f.lm_.adjoint();
        f.others_ = {std::sqrt(analog.k()) * on_cavity(analog.a()).matrix()};
        f.others_dag_ = {f.others_[0]};  // a, not a*
        const Matrix& l2 = f.others_[0];
        f.nonherm_ = -i * f.model_.hamiltonian().matrix() - 0.5 * f.lm_dag_ * f.lm_ - 0.5 * l2.adjoint() * l2;
    }
    return f;
}

double SmeFilter::predicted_rate() const {
    // Tr[(L + L*) rho] = 2 Re Tr[L rho]
    return 2.0 * (lm_.transpose().cwiseProduct(rho_)).sum().real();
}

void SmeFilter::step(double dy, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "SME step needs dt > 0");
    if (!std::isfinite(dy)) throw Error(ErrorKind::invalid_argument, "SME step needs a finite increment");
    if (settings_.form == SmeForm::printed) {
        step_printed(dy, dt);
    } else {
        step_corrected(dy, dt);
    }
    t_ += dt;
}

void SmeFilter::step_corrected(double dy, double dt) {
    // lrho = L rho; expect = Tr[(L + L*) rho]
    lrho_.noalias() = lm_ * rho_;
    const double expect = 2.0 * lrho_.trace().real();
    const double innovation = dy - expect * dt;

    // G rho + (G rho)* with G = -iH - (1/2) sum L*L covers the Hamiltonian
    // and anticommutator terms.
    tmp_.noalias() = nonherm_ * rho_;
    work_ = rho_;
    work_ += dt * (tmp_ + tmp_.adjoint());
    work_.noalias() += dt * (lrho_ * lm_dag_);
    for (std::size_t k = 0; k < others_.size(); ++k) {
        tmp_.noalias() = others_[k] * rho_;
        work_.noalias() += dt * (tmp_ * others_dag_[k]);
    }
    work_ += innovation * (lrho_ + lrho_.adjoint() - expect * rho_);
    last_.trace_error = std::abs(work_.trace().real() - rho_.trace().real());

    try {
        const ProjectionReport rep = project_density(work_, settings_.projection);
        last_.projection_change = rep.change;
        last_.clipped = rep.clipped;
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "SME step at t=" << t_ << ": " << e.what();
        throw Error(e.kind(), msg.str());
    }
    rho_.swap(work_);
}

void SmeFilter::step_printed(double dy, double dt) {
    lrho_.noalias() = lm_ * rho_;
    const double expect = 2.0 * lrho_.trace().real();
    const double innovation = dy - expect * dt;

    tmp_.noalias() = nonherm_ * rho_;
    work_ = rho_;
    work_ += dt * (tmp_ + tmp_.adjoint());
    work_.noalias() += dt * (lrho_ * lm_dag_);
    tmp_.noalias() = others_[0] * rho_;
    work_.noalias() += dt * (tmp_ * others_dag_[0]);
    work_ -= innovation * (lrho_ + lrho_.adjoint() - expect * rho_);
    last_.trace_error = std::abs(work_.trace().real() - rho_.trace().real());
    const ProjectionReport rep = project_density(work_, settings_.projection);
    last_.projection_change = rep.change;
    last_.clipped = rep.clipped;
    rho_.swap(work_);
}

Complex SmeFilter::expectation(const Operator& x) const {
    if (x.dim() != model_.dim()) throw Error(ErrorKind::dimension_mismatch, "expectation: operator dimension differs from state");
    return (rho_.transpose().cwiseProduct(x.matrix())).sum();
}

double SmeFilter::observable(const Operator& x) const {
    if (!is_hermitian(x, settings_.projection.tol.herm)) {
        throw Error(ErrorKind::invalid_argument, "observable must be Hermitian");
    }
    return expectation(x).real();
}

double estimate_q(const SmeFilter& filter, const CavityAnalog& analog) {
    return filter.observable(on_cavity(analog.disturbance()));
}

std::vector<std::size_t> sample_steps(std::size_t steps, std::size_t stride) {
    if (stride == 0) throw Error(ErrorKind::invalid_argument, "output stride must be positive");
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n <= steps; n += stride) out.push_back(n);
    if (out.back() != steps) out.push_back(steps);
    return out;
}

namespace {

/// Observables used by every SME sample, built once per run.
struct HybridObservables {
    Matrix sx, sy, sz, q;

    explicit HybridObservables(const CavityAnalog& analog)
        : sx(on_qubit(pauli(Pauli::x), analog).matrix()),
          sy(on_qubit(pauli(Pauli::y), analog).matrix()),
          sz(on_qubit(pauli(Pauli::z), analog).matrix()),
          q(on_cavity(analog.disturbance()).matrix()) {}
};

double real_trace_product(const Matrix& rho, const Matrix& x) { return (rho.transpose().cwiseProduct(x)).sum().real(); }

SmeSample sample_of(const SmeFilter& f, const HybridObservables& obs, double t) {
    const Matrix& rho = f.rho();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    return SmeSample{t,
                     real_trace_product(rho, obs.sx),
                     real_trace_product(rho, obs.sy),
                     real_trace_product(rho, obs.sz),
                     real_trace_product(rho, obs.q),
                     f.last_step().trace_error,
                     es.eigenvalues()(0)};
}

}  // namespace

SmeRun run_sme(const MeasurementRecord& record, const SmeRunConfig& config) {
    if (config.rho0.dim() != 2 * config.analog.truncation().levels()) {
        throw Error(ErrorKind::dimension_mismatch, "SME initial state must live on the qubit (x) cavity space");
    }
    SmeFilter filter = SmeFilter::for_hybrid(config.qubit, config.analog, config.rho0, config.settings);
    const HybridObservables obs(config.analog);
    const std::vector<std::size_t> when = sample_steps(record.steps(), config.stride);

    SmeRun out;
    out.samples.reserve(when.size());
    std::vector<std::size_t> snaps = config.snapshot_steps;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_sample = 0;
    std::size_t next_snap = 0;
    auto emit = [&](std::size_t n) {
        if (next_sample < when.size() && when[next_sample] == n) {
            out.samples.push_back(sample_of(filter, obs, double(n) * record.dt));
            ++next_sample;
        }
        while (next_snap < snaps.size() && snaps[next_snap] == n) {
            out.snapshots.push_back(filter.rho());
            ++next_snap;
        }
    };
    emit(0);
    for (std::size_t n = 0; n < record.steps(); ++n) {
        filter.step(record.increments[n], record.dt);
        emit(n + 1);
    }
    if (next_snap != snaps.size()) throw Error(ErrorKind::invalid_argument, "snapshot step beyond the record");
    return out;
}

void write_sme_csv(std::ostream& out, const std::vector<SmeSample>& samples) {
    out << "t,sx_hat,sy_hat,sz_hat,q_hat,trace_err,min_eig\n";
    for (const auto& s : samples) {
        csv::Row row(out);
        row << s.t << s.sx << s.sy << s.sz << s.q << s.trace_error << s.min_eig;
    }
}

void write_sme_csv(const std::string& path, const std::vector<SmeSample>& samples) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    write_sme_csv(out, samples);
}

}  // namespace hqf
