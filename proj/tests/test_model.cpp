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

#include "hqf/hybrid_model.hpp"
#include "hqf/qekf_filter.hpp"

using namespace hqf;

namespace {

Matrix random_density(std::size_t n, std::mt19937& g) {
    std::normal_distribution<double> nd;
    Matrix a(n, n);
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = Complex(nd(g), nd(g));
    Matrix rho = a * a.adjoint();
    return rho / rho.trace();
}

/// Kronecker product written out element by element.
Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

const double kRefV = 1.0 / (2.0 * std::sqrt(2.0));

}  // namespace

TEST_CASE("analog mapping examples") {
    const CavityAnalog ref = analog_cavity({0.25, kRefV, 0.25}, FockTruncation(8));
    CHECK(ref.k() == 0.5);
    CHECK(ref.alpha() == 1.0);
    const CavityAnalog other = analog_cavity({0.5, 0.5, 0.0}, FockTruncation(4));
    CHECK(other.k() == 1.0);
    CHECK(other.alpha() == 1.0);
    CHECK_THROWS_AS(analog_cavity({0.25, 0.0, 0.25}, FockTruncation(8)), Error);
}

TEST_CASE("analog mapping round trip") {
    std::mt19937 g(5);
    std::uniform_real_distribution<double> ud(0.05, 3.0);
    for (int i = 0; i < 20; ++i) {
        const OUProcess ou{ud(g), ud(g), 0.1};
        const CavityAnalog c = analog_cavity(ou, FockTruncation(3));
        const OUProcess back = c.recover_ou(ou.q0);
        CHECK(back.u == doctest::Approx(ou.u).epsilon(1e-15));
        CHECK(back.v == doctest::Approx(ou.v).epsilon(1e-14));
        // forward relations evaluated independently
        CHECK(c.k() == doctest::Approx(2.0 * ou.u).epsilon(1e-15));
        CHECK(c.alpha() == doctest::Approx(std::sqrt(2.0 * ou.u) / (2.0 * ou.v)).epsilon(1e-15));
    }
}

TEST_CASE("cavity quadratures") {
    const CavityAnalog c(0.5, 2.0, FockTruncation(6));
    const Matrix a = annihilation(FockTruncation(6)).matrix();
    CHECK((c.q2().matrix() - 0.5 * (a + a.adjoint())).norm() < 1e-15);
    CHECK((c.p2().matrix() - (a - a.adjoint()) / Complex(0, 2)).norm() < 1e-15);
    CHECK((c.disturbance().matrix() - 0.25 * (a + a.adjoint())).norm() < 1e-15);
}

TEST_CASE("qubit and cavity SLH models") {
    const DrivenSLH q = build_qubit(0.55, pauli(Pauli::z));
    REQUIRE(q.base.channels() == 1);
    Matrix expect(2, 2);
    expect << 0, 0, std::sqrt(0.55), 0;
    CHECK((q.base.coupling(0).matrix() - expect).norm() < 1e-15);
    CHECK(q.base.scattering().matrix() == Matrix::Identity(1, 1));

    const DrivenSLH q1 = build_qubit(1.0, pauli(Pauli::z));
    CHECK(q1.at(0.0).hamiltonian().matrix().norm() == 0.0);
    CHECK((q1.at(0.3).hamiltonian().matrix() - 0.3 * pauli(Pauli::z).matrix()).norm() < 1e-15);

    const SLHModel cav = build_cavity(CavityAnalog(0.5, 1.0, FockTruncation(8)));
    CHECK((cav.coupling(0).matrix() - std::sqrt(0.5) * annihilation(FockTruncation(8)).matrix()).norm() < 1e-15);
    Matrix two(2, 2);
    two << 0, 1, 0, 0;
    CHECK(build_cavity(CavityAnalog(1.0, 1.0, FockTruncation(2))).coupling(0).matrix() == two);

    CHECK_THROWS_AS(SLHModel({Operator::identity(3)}, Operator::zero(2)), Error);
    Matrix nonherm(2, 2);
    nonherm << 0, 1, 0, 0;
    CHECK_THROWS_AS(SLHModel({}, Operator(nonherm)), Error);
}

TEST_CASE("concatenation reproduces the reference system") {
    const std::size_t n = 8;
    const CavityAnalog c = analog_cavity({0.25, kRefV, 0.25}, FockTruncation(n));
    const SLHModel joint = enlarged_model(QubitParams{0.55}, c);
    REQUIRE(joint.channels() == 2);
    REQUIRE(joint.dim() == 2 * n);

    Matrix sm(2, 2);
    sm << 0, 0, 1, 0;
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    const Matrix a = annihilation(FockTruncation(n)).matrix();
    const Matrix I2 = Matrix::Identity(2, 2), In = Matrix::Identity(n, n);
    CHECK((joint.coupling(0).matrix() - std::sqrt(0.55) * kron(sm, In)).norm() < 1e-14);
    CHECK((joint.coupling(1).matrix() - std::sqrt(0.5) * kron(I2, a)).norm() < 1e-14);
    CHECK((joint.hamiltonian().matrix() - 0.5 * kron(sz, a + a.adjoint())).norm() < 1e-14);
}

TEST_CASE("concatenation without interaction decouples") {
    const CavityAnalog c(1.0, 1.0, FockTruncation(3));
    const SLHModel first = build_qubit(0.7, pauli(Pauli::z)).at(0.2);
    const SLHModel second = build_cavity(c);
    const SLHModel joint = concatenate(first, second, Operator::zero(6));
    CHECK(joint.channels() == first.channels() + second.channels());
    CHECK((joint.hamiltonian().matrix() - kron(first.hamiltonian().matrix(), Matrix::Identity(3, 3))).norm() < 1e-15);

    // product states stay product: the generator splits into two local parts
    std::mt19937 g(2);
    const Matrix r1 = random_density(2, g), r2 = random_density(3, g);
    const Matrix joint_gen = joint.generator(Operator(kron(r1, r2))).matrix();
    const Matrix local = kron(first.generator(Operator(r1)).matrix(), r2) + kron(r1, second.generator(Operator(r2)).matrix());
    CHECK((joint_gen - local).norm() < 1e-13);
}

TEST_CASE("joint Lindbladian preserves trace") {
    const CavityAnalog c = analog_cavity({0.25, kRefV, 0.25}, FockTruncation(6));
    const SLHModel joint = enlarged_model(QubitParams{0.55}, c);
    std::mt19937 g(9);
    for (int i = 0; i < 10; ++i) {
        const Operator rho(random_density(12, g));
        Complex total = 0.0;
        for (const auto& L : joint.couplings()) total += lindblad_state(L, joint.hamiltonian(), rho).trace();
        // H counted once per channel above; the generator counts it once
        CHECK(std::abs(total) < 1e-13);
        CHECK(std::abs(joint.generator(rho).trace()) < 1e-13);
    }
}

TEST_CASE("unmeasured cavity quadrature decays like the OU mean") {
    // One small Euler step of the master equation against d<q>/dt = -(k/2)<q>.
    const OUProcess ou{0.25, kRefV, 0.25};
    const CavityAnalog c = analog_cavity(ou, FockTruncation(10));
    const SLHModel cav = build_cavity(c);
    const DensityMatrix rho = coherent_state(ou.q0 * c.alpha(), c.truncation());
    const double q = rho.expectation(c.disturbance()).real();
    const Operator drift = cav.generator(rho.as_operator());
    const double dq_dt = (drift * c.disturbance()).trace().real();
    CHECK(q == doctest::Approx(ou.q0).epsilon(1e-9));
    CHECK(dq_dt == doctest::Approx(-ou.u * q).epsilon(1e-9));
}

TEST_CASE("Heisenberg drifts of the enlarged model match the QEKF drift in product states") {
    const std::size_t n = 12;
    const CavityAnalog c(0.5, 1.3, FockTruncation(n));
    const SLHModel joint = enlarged_model(QubitParams{0.55}, c);
    const QekfParams p{0.55, c.k(), c.alpha(), 0.0, 0.01, SMatrixForm::derived};

    const Operator obs[5] = {on_qubit(pauli(Pauli::x), c), on_qubit(pauli(Pauli::y), c), on_qubit(pauli(Pauli::z), c),
                             on_cavity(c.q2()), on_cavity(c.p2())};
    std::mt19937 g(4);
    std::uniform_real_distribution<double> ud(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix qubit = qubit_state(ud(g), ud(g), ud(g));
        const DensityMatrix cav = coherent_state(Complex(ud(g), ud(g)), c.truncation(), 1e-9);
        const DensityMatrix rho = tensor(qubit, cav);
        Vec5 x, heis;
        for (int i = 0; i < 5; ++i) {
            x(i) = rho.expectation(obs[i]).real();
            Operator gen = Operator::zero(2 * n);
            for (std::size_t k = 0; k < joint.channels(); ++k) {
                gen = gen + lindblad(joint.coupling(k), k == 0 ? joint.hamiltonian() : Operator::zero(2 * n), obs[i]);
            }
            heis(i) = rho.expectation(gen).real();
        }
        const Vec5 f = drift_f(x, p);
        CHECK((f - heis).cwiseAbs().maxCoeff() < 1e-8);
    }
}
