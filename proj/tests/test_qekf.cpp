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
#include <random>
#include <sstream>

#include "hqf/qekf_filter.hpp"

using namespace hqf;

namespace {

const QekfParams kRef{0.55, 0.5, 1.0, 0.0, 0.01, SMatrixForm::derived};

Vec5 vec(double a, double b, double c, double d, double e) {
    Vec5 v;
    v << a, b, c, d, e;
    return v;
}

}  // namespace

TEST_CASE("drift examples") {
    const Vec5 f0 = drift_f(Vec5::Zero(), kRef);
    CHECK(f0 == vec(0, 0, -0.55, 0, 0));

    const QekfParams p{0.55, 0.5, 2.0, 0.0, 0.01};
    const Vec5 f1 = drift_f(vec(0, 0, -1, 0, 0), p);
    CHECK(f1 == vec(0, 0, 0, 0, 1.0 / (2.0 * 2.0)));

    for (double alpha : {1.0, 0.7, 3.0}) {
        const QekfParams q{0.55, 0.5, alpha, 0.0, 0.01};
        const Vec5 fixed = vec(0, 0, -1, 0, 1.0 / (alpha * q.k2));
        CHECK(drift_f(fixed, q).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("Jacobian matches central finite differences") {
    std::mt19937 g(21);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const QekfParams p{0.2 + std::abs(ud(g)), 0.1 + std::abs(ud(g)), 0.5 + std::abs(ud(g)), 0.0, 0.01};
        const Vec5 x = vec(ud(g), ud(g), ud(g), ud(g), ud(g));
        const Mat5 F = jacobian_F(x, p);
        Mat5 fd;
        const double h = 1e-6;
        for (int j = 0; j < 5; ++j) {
            Vec5 xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            fd.col(j) = (drift_f(xp, p) - drift_f(xm, p)) / (2.0 * h);
        }
        const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
        CHECK((F - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
        CHECK(F(2, 2) == -p.k1);
    }
    const Mat5 F0 = jacobian_F(Vec5::Zero(), kRef);
    CHECK(F0.topLeftCorner<2, 2>() == -0.5 * 0.55 * Eigen::Matrix2d::Identity());
    CHECK(F0.block<2, 3>(0, 2).isZero());
    CHECK(F0.block<3, 2>(2, 0).isZero());
}

TEST_CASE("covariance terms") {
    const CovarianceTerms at_up = covariance_terms(vec(0, 0, 1, 0, 0), kRef);
    CHECK(at_up.r == 1.0);
    CHECK((at_up.s - vec(std::sqrt(0.55), 0, 0, 0, 0)).norm() < 1e-15);

    QekfParams printed = kRef;
    printed.s_form = SMatrixForm::paper;
    CHECK(covariance_terms(vec(0, 0, 1, 0, 0), printed).s(0) == doctest::Approx(0.55));

    std::mt19937 g(1);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec5 x = vec(ud(g), ud(g), ud(g), ud(g), ud(g));
        const CovarianceTerms t = covariance_terms(x, kRef);
        CHECK(t.s(1) == 0.0);
        CHECK(t.s(3) == 0.0);
        CHECK(t.s(4) == 0.0);
        const Mat5 expect = 0.01 * Mat5::Identity() + t.s * t.s.transpose();
        CHECK((t.q_robust - expect).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("cross-correlation agrees with the symmetrized Ito products of the model") {
    // For dX = ... + [L*, X] dB + [X, L] dB*, dY = (L + L*) dt + dB + dB*:
    // (dX dY + dY dX)/2 per dt = ([L*, X] + [X, L])/2 in expectation.
    const CavityAnalog c = analog_cavity({0.25, 1.0 / (2.0 * std::sqrt(2.0)), 0.25}, FockTruncation(10));
    const Operator L = on_qubit(Complex(std::sqrt(0.55)) * pauli(Pauli::minus), c);
    const Operator obs[5] = {on_qubit(pauli(Pauli::x), c), on_qubit(pauli(Pauli::y), c), on_qubit(pauli(Pauli::z), c),
                             on_cavity(c.q2()), on_cavity(c.p2())};
    std::mt19937 g(8);
    std::uniform_real_distribution<double> ud(-0.55, 0.55);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = tensor(qubit_state(ud(g), ud(g), ud(g)), coherent_state(Complex(ud(g), ud(g)), c.truncation(), 1e-8));
        const Vec5 x = moments(rho, c);
        Vec5 s;
        for (int i = 0; i < 5; ++i) {
            const Operator sym = Complex(0.5) * (commutator(L.adjoint(), obs[i]) + commutator(obs[i], L));
            s(i) = rho.expectation(sym).real();
        }
        CHECK((covariance_terms(x, kRef).s - s).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gain limits") {
    QekfState st;
    st.x = vec(0, 0.3, 0, 0.2, -0.1);  // sx = sz = 0, so S = 0
    const QekfState next = qekf_step(st, 0.37, 1e-3, kRef);
    CHECK(next.gain.isZero());
    CHECK((next.x - (st.x + drift_f(st.x, kRef) * 1e-3)).cwiseAbs().maxCoeff() < 1e-16);

    st.x = vec(0.4, 0.1, -0.3, 0.2, 0.0);
    const QekfState k = qekf_step(st, 0.01, 1e-3, kRef);
    CHECK((k.gain - covariance_terms(st.x, kRef).s).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("Riccati step and input checks") {
    QekfState st;
    st.x = vec(0.5, 0.2, -0.1, 0.1, 0.05);
    st.P = 0.3 * Mat5::Identity();
    const double dt = 1e-3, dy = 0.02;
    const QekfParams p = kRef;
    const Mat5 F = jacobian_F(st.x, p);
    Eigen::Matrix<double, 1, 5> H = Eigen::Matrix<double, 1, 5>::Zero();
    H(0) = std::sqrt(p.k1);
    const Vec5 S = covariance_terms(st.x, p).s;
    const Vec5 K = st.P * H.transpose() + S;
    const Mat5 Pn = st.P + (F * st.P + st.P * F.transpose() + p.mu * Mat5::Identity() + S * S.transpose() - K * K.transpose()) * dt;
    const Vec5 xn = st.x + drift_f(st.x, p) * dt + K * (dy - std::sqrt(p.k1) * st.x(0) * dt);
    const QekfState next = qekf_step(st, dy, dt, p);
    CHECK((next.P - Pn).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((next.x - xn).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(next.P == next.P.transpose());

    QekfState asym = st;
    asym.P(0, 1) += 1e-6;
    CHECK_THROWS_AS(qekf_step(asym, dy, dt, p), Error);
    CHECK_THROWS_AS(qekf_step(st, dy, 0.0, p), Error);
    QekfParams bad = p;
    bad.mu = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.lambda = -0.1;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("reference run keeps P symmetric and positive semidefinite") {
    TruthSettings s;
    s.horizon = 20.0;
    const OUProcess ou{0.25, 1.0 / (2.0 * std::sqrt(2.0)), 0.25};
    const CavityAnalog c = analog_cavity(ou, FockTruncation(8));
    const DensityMatrix joint = tensor(qubit_state(1, 0, 0), coherent_state(0.25, c.truncation()));
    for (std::uint64_t traj = 0; traj < 3; ++traj) {
        const auto rec = simulate_truth({0.55}, ou, qubit_state(1, 0, 0), s, 1, traj).record;
        QekfState st{moments(joint, c), symmetric_covariance(joint, c)};
        double worst_eig = 0.0;
        bool symmetric = true;
        for (double dy : rec.increments) {
            st = qekf_step(st, dy, rec.dt, kRef);
            symmetric = symmetric && (st.P == st.P.transpose());
            Eigen::SelfAdjointEigenSolver<Mat5> es(st.P, Eigen::EigenvaluesOnly);
            worst_eig = std::min(worst_eig, es.eigenvalues()(0));
        }
        CHECK(symmetric);
        CHECK(worst_eig >= -1e-8);
    }
}

TEST_CASE("innovations are centred against a linearized truth") {
    // Truth propagated by the drift itself; record dY = h(x) dt + dW.
    const QekfParams p = kRef;
    const double dt = 1e-3;
    const std::size_t steps = 20000;
    Vec5 truth = vec(1, 0, 0, 0.25, 0);
    QekfState st{truth, 0.1 * Mat5::Identity()};
    std::mt19937_64 g(12);
    std::normal_distribution<double> nd(0.0, std::sqrt(dt));
    std::vector<double> innov;
    for (std::size_t n = 0; n < steps; ++n) {
        const double dy = std::sqrt(p.k1) * truth(0) * dt + nd(g);
        innov.push_back(dy - measurement_h(st.x, p) * dt);
        st = qekf_step(st, dy, dt, p);
        truth += drift_f(truth, p) * dt;
    }
    double m = 0.0;
    for (double v : innov) m += v;
    m /= double(steps);
    double var = 0.0;
    for (double v : innov) var += (v - m) * (v - m);
    const double sd = std::sqrt(var / double(steps - 1));
    CHECK(std::abs(m) <= 4.0 * sd / std::sqrt(double(steps)));
}

TEST_CASE("initial moments and covariance of the reference state") {
    const CavityAnalog c = analog_cavity({0.25, 1.0 / (2.0 * std::sqrt(2.0)), 0.25}, FockTruncation(8));
    const DensityMatrix joint = tensor(qubit_state(1, 0, 0), coherent_state(0.25, c.truncation()));
    const Vec5 m = moments(joint, c);
    CHECK((m - vec(1, 0, 0, 0.25, 0)).cwiseAbs().maxCoeff() < 1e-6);
    const Mat5 P = symmetric_covariance(joint, c);
    // |+> gives var(sx) = 0, var(sy) = var(sz) = 1; coherent: var(q2) = var(p2) = 1/4
    Vec5 diag = vec(0, 1, 1, 0.25, 0.25);
    CHECK((P.diagonal() - diag).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((P - Mat5(P.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("run_qekf output") {
    TruthSettings s;
    s.horizon = 0.05;
    const auto rec = simulate_truth({0.55}, {0.25, 0.35, 0.25}, qubit_state(1, 0, 0), s, 1, 0).record;
    QekfRunConfig cfg;
    cfg.params = kRef;
    cfg.initial.x = vec(1, 0, 0, 0.25, 0);
    cfg.stride = 10;
    const auto samples = run_qekf(rec, cfg);
    CHECK(samples.size() == 6);
    CHECK(samples.back().t == doctest::Approx(0.05));
    std::ostringstream out;
    write_qekf_csv(out, samples);
    CHECK(out.str().rfind("t,sx_hat,sy_hat,sz_hat,q2_hat,p2_hat,P_trace,K_1,K_2,K_3,K_4,K_5\n", 0) == 0);
}
