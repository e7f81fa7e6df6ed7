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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "hqf/sme_filter.hpp"

using namespace hqf;

namespace {

const double kV = 1.0 / (2.0 * std::sqrt(2.0));
const OUProcess kOU{0.25, kV, 0.25};

/// Partial trace over the cavity of a qubit (x) cavity matrix.
Matrix qubit_marginal(const Matrix& rho, Eigen::Index levels) {
    Matrix out = Matrix::Zero(2, 2);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            for (Eigen::Index k = 0; k < levels; ++k) out(i, j) += rho(i * levels + k, j * levels + k);
    return out;
}

/// Plain homodyne SME step for a single channel, projected by eigenvalue
/// clipping; written independently of the library filter.
Matrix reference_step(const Matrix& rho, const Matrix& L, const Matrix& H, double dy, double dt) {
    const Complex i(0.0, 1.0);
    const Matrix Ld = L.adjoint();
    const double e = (L * rho + rho * Ld).trace().real();
    Matrix next = rho + dt * (-i * (H * rho - rho * H) + L * rho * Ld - 0.5 * (Ld * L * rho + rho * Ld * L)) +
                  (dy - e * dt) * (L * rho + rho * Ld - e * rho);
    next = 0.5 * (next + next.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(next);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
    w /= w.sum();
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

MeasurementRecord reference_record(double horizon, std::uint64_t trajectory) {
    TruthSettings s;
    s.horizon = horizon;
    return simulate_truth({0.55}, kOU, qubit_state(1, 0, 0), s, 1, trajectory).record;
}

}  // namespace

TEST_CASE("trivial generator leaves the state unchanged") {
    const SLHModel m({Operator::zero(4)}, Operator::zero(4));
    const DensityMatrix rho0 = tensor(qubit_state(0.3, 0.2, -0.5), DensityMatrix::maximally_mixed(2));
    SmeFilter f(m, rho0);
    for (double dy : {0.3, -1.2, 0.0, 5.0}) f.step(dy, 1e-3);
    CHECK((f.rho() - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expectation examples") {
    const CavityAnalog c = analog_cavity(kOU, FockTruncation(8));
    const DensityMatrix plus = qubit_state(1, 0, 0);
    const SmeFilter f = SmeFilter::for_hybrid({0.55}, c, tensor(plus, coherent_state(0.25, c.truncation())));
    CHECK(std::abs(f.expectation(Operator::identity(16)) - 1.0) < 1e-9);
    CHECK(std::abs(f.observable(on_qubit(pauli(Pauli::z), c))) < 1e-12);

    const SmeFilter g = SmeFilter::for_hybrid(
        {0.55}, c, tensor(DensityMatrix::maximally_mixed(2), coherent_state(0.25, c.truncation())));
    CHECK(g.observable(on_cavity(c.q2())) == doctest::Approx(0.25).epsilon(1e-6));

    Matrix nonherm = Matrix::Zero(16, 16);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(g.observable(Operator(nonherm)), Error);
    CHECK_THROWS_AS(g.expectation(Operator::identity(4)), Error);
}

TEST_CASE("disturbance estimate examples") {
    const FockTruncation t(8);
    const CavityAnalog unit(0.5, 1.0, t), wide(0.5, 2.0, t);
    const DensityMatrix q = qubit_state(0, 0, 1);
    CHECK(std::abs(estimate_q(SmeFilter::for_hybrid({0.55}, unit, tensor(q, coherent_state(0.0, t))), unit)) < 1e-15);
    CHECK(estimate_q(SmeFilter::for_hybrid({0.55}, unit, tensor(q, coherent_state(0.4, t, 1e-5))), unit) ==
          doctest::Approx(0.4).epsilon(1e-5));
    CHECK(estimate_q(SmeFilter::for_hybrid({0.55}, wide, tensor(q, coherent_state(0.4, t, 1e-5))), wide) ==
          doctest::Approx(0.2).epsilon(1e-5));
}

TEST_CASE("zero innovation gives one unconditional master-equation step") {
    const CavityAnalog c = analog_cavity(kOU, FockTruncation(6));
    // full rank, so the projection has nothing to clip
    const Matrix pure = tensor(qubit_state(0.8, 0.1, 0.2), coherent_state(0.25, c.truncation())).matrix();
    const DensityMatrix rho0(0.9 * pure + 0.1 * Matrix::Identity(12, 12) / 12.0);
    SmeFilter f = SmeFilter::for_hybrid({0.55}, c, rho0);
    const double dt = 1e-3;
    const Matrix expect = rho0.matrix() + dt * f.model().generator(rho0.as_operator()).matrix();
    f.step(f.predicted_rate() * dt, dt);
    CHECK((f.rho() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("reduction: without cavity and interaction the enlarged SME is the qubit SME") {
    const std::size_t levels = 4;
    const double k1 = 0.55;
    const Operator L1 = Complex(std::sqrt(k1)) * pauli(Pauli::minus);
    const Operator Hq = Complex(0.3) * pauli(Pauli::z);
    const Operator Ic = Operator::identity(levels);
    const SLHModel joint({tensor(L1, Ic), Operator::zero(2 * levels)}, tensor(Hq, Ic));

    const DensityMatrix q0 = qubit_state(0.7, 0.0, 0.1);
    SmeFilter f(joint, tensor(q0, coherent_state(0.25, FockTruncation(levels), 1e-3)));
    Matrix ref = q0.matrix();

    const MeasurementRecord rec = reference_record(5.0, 2);
    double worst = 0.0;
    for (double dy : rec.increments) {
        f.step(dy, rec.dt);
        ref = reference_step(ref, L1.matrix(), Hq.matrix(), dy, rec.dt);
        worst = std::max(worst, trace_distance(qubit_marginal(f.rho(), Eigen::Index(levels)), ref));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("state invariants hold after every SME step on the reference model") {
    const CavityAnalog c = analog_cavity(kOU, FockTruncation(8));
    const DensityMatrix rho0 = tensor(qubit_state(1, 0, 0), coherent_state(0.25, c.truncation()));
    SmeFilter f = SmeFilter::for_hybrid({0.55}, c, rho0);
    const MeasurementRecord rec = reference_record(3.0, 0);
    const double drift_bound = 10.0 * std::numeric_limits<double>::epsilon() * 16.0;
    std::size_t bad_trace = 0, bad_drift = 0, bad_herm = 0, bad_psd = 0;
    for (double dy : rec.increments) {
        f.step(dy, rec.dt);
        const Matrix& r = f.rho();
        if (std::abs(r.trace().real() - 1.0) > 1e-9) ++bad_trace;
        if (f.last_step().trace_error > drift_bound) ++bad_drift;
        if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-9) ++bad_herm;
        Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -1e-8) ++bad_psd;
    }
    CHECK(bad_trace == 0);
    CHECK(bad_drift == 0);
    CHECK(bad_herm == 0);
    CHECK(bad_psd == 0);
}

TEST_CASE("printed filter form differs from the corrected one") {
    const CavityAnalog c = analog_cavity(kOU, FockTruncation(6));
    const DensityMatrix rho0 = tensor(qubit_state(1, 0, 0), coherent_state(0.25, c.truncation()));
    SmeSettings printed;
    printed.form = SmeForm::printed;
    printed.projection.max_change = 1.0;
    SmeFilter a = SmeFilter::for_hybrid({0.55}, c, rho0);
    SmeFilter b = SmeFilter::for_hybrid({0.55}, c, rho0, printed);
    const MeasurementRecord rec = reference_record(2.0, 0);
    for (double dy : rec.increments) {
        a.step(dy, rec.dt);
        b.step(dy, rec.dt);
    }
    const Operator sz = on_qubit(pauli(Pauli::z), c);
    // sigma_z measurement leaves <sz> without its decay toward -1
    CHECK(a.observable(sz) < -0.5);
    CHECK(std::abs(a.observable(sz) - b.observable(sz)) > 0.1);
}

TEST_CASE("run_sme sampling grid and CSV") {
    const CavityAnalog c = analog_cavity(kOU, FockTruncation(6));
    SmeRunConfig cfg{{0.55}, c, tensor(qubit_state(1, 0, 0), coherent_state(0.25, c.truncation())), 7, {}, {0, 5}};
    const MeasurementRecord rec = reference_record(0.1, 0);
    const SmeRun run = run_sme(rec, cfg);
    const auto when = sample_steps(rec.steps(), 7);
    REQUIRE(run.samples.size() == when.size());
    CHECK(when.back() == rec.steps());
    for (std::size_t k = 0; k < when.size(); ++k) CHECK(run.samples[k].t == double(when[k]) * rec.dt);
    CHECK(run.snapshots.size() == 2);
    CHECK((run.snapshots[0] - cfg.rho0.matrix()).norm() == 0.0);

    std::ostringstream out;
    write_sme_csv(out, run.samples);
    CHECK(out.str().rfind("t,sx_hat,sy_hat,sz_hat,q_hat,trace_err,min_eig\n", 0) == 0);

    cfg.rho0 = DensityMatrix::maximally_mixed(4);
    CHECK_THROWS_AS(run_sme(rec, cfg), Error);
    CHECK(sample_steps(10, 5) == std::vector<std::size_t>{0, 5, 10});
    CHECK(sample_steps(11, 5) == std::vector<std::size_t>{0, 5, 10, 11});
}
