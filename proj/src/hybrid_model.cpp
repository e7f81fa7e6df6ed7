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

#include "hqf/hybrid_model.hpp"

#include <cmath>

namespace hqf {

void OUProcess::validate() const {
    if (!(u > 0.0) || !std::isfinite(u)) throw Error(ErrorKind::invalid_argument, "OU decay rate u must be positive");
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "OU noise gain v must be finite");
    if (!std::isfinite(q0)) throw Error(ErrorKind::invalid_argument, "OU initial value must be finite");
}

SLHModel::SLHModel(std::vector<Operator> couplings, Operator hamiltonian, const Tolerances& tol)
    : couplings_(std::move(couplings)), hamiltonian_(std::move(hamiltonian)) {
    if (hamiltonian_.dim() == 0) throw Error(ErrorKind::dimension_mismatch, "SLH model needs a non-empty space");
    for (const auto& l : couplings_) {
        if (l.dim() != hamiltonian_.dim()) {
            throw Error(ErrorKind::dimension_mismatch, "SLH coupling and Hamiltonian dimensions differ");
        }
    }
    if (!is_hermitian(hamiltonian_, tol.herm)) {
        throw Error(ErrorKind::invalid_argument, "SLH Hamiltonian is not Hermitian");
    }
}

Operator SLHModel::generator(const Operator& rho) const {
    const Operator none = Operator::zero(dim());
    Operator out = lindblad_state(none, hamiltonian_, rho);
    for (const auto& l : couplings_) out = out + lindblad_state(l, none, rho);
    return out;
}

SLHModel DrivenSLH::at(double q) const {
    return SLHModel(base.couplings(), base.hamiltonian() + Complex(q, 0.0) * drive);
}

void QubitParams::validate() const {
    if (!(k1 > 0.0) || !std::isfinite(k1)) throw Error(ErrorKind::invalid_argument, "qubit coupling k1 must be positive");
}

CavityAnalog::CavityAnalog(double k, double alpha, FockTruncation trunc) : k_(k), alpha_(alpha), trunc_(trunc) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::invalid_argument, "cavity coupling k must be positive");
    if (!std::isfinite(alpha) || alpha == 0.0) throw Error(ErrorKind::invalid_argument, "cavity scaling alpha must be finite and nonzero");
}

Operator CavityAnalog::q2() const {
    const Operator op = a();
    return Complex(0.5, 0.0) * (op + op.adjoint());
}

Operator CavityAnalog::p2() const {
    const Operator op = a();
    return Complex(0.0, -0.5) * (op - op.adjoint());
}

Operator CavityAnalog::disturbance() const { return Complex(1.0 / alpha_, 0.0) * q2(); }

OUProcess CavityAnalog::recover_ou(double q0) const {
    const double u = k_ / 2.0;
    return OUProcess{u, std::sqrt(2.0 * u) / (2.0 * alpha_), q0};
}

CavityAnalog analog_cavity(const OUProcess& ou, FockTruncation trunc) {
    ou.validate();
    if (ou.v == 0.0) {
        throw Error(ErrorKind::invalid_argument, "OU process with v = 0 has no cavity analog (alpha would be infinite)");
    }
    // sqrt(2u)/(2v) written as sqrt(u / (2 v^2)): same value, but it rounds to
    // exactly 1 for the usual double 1/(2 sqrt 2) with u = 1/4.
    return CavityAnalog(2.0 * ou.u, std::copysign(std::sqrt(ou.u / (2.0 * ou.v * ou.v)), ou.v), trunc);
}

DrivenSLH build_qubit(double k1, const Operator& disturbance_op) {
    QubitParams{k1}.validate();
    if (disturbance_op.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "qubit disturbance operator must be 2x2");
    SLHModel base({Complex(std::sqrt(k1), 0.0) * pauli(Pauli::minus)}, Operator::zero(2));
    return DrivenSLH{std::move(base), disturbance_op};
}

SLHModel build_cavity(const CavityAnalog& analog) {
    return SLHModel({Complex(std::sqrt(analog.k()), 0.0) * analog.a()}, Operator::zero(analog.truncation().levels()));
}

SLHModel concatenate(const SLHModel& first, const SLHModel& second, const Operator& interaction) {
    const Operator id1 = Operator::identity(first.dim());
    const Operator id2 = Operator::identity(second.dim());
    if (interaction.dim() != first.dim() * second.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "interaction Hamiltonian does not act on the joint space");
    }
    std::vector<Operator> couplings;
    couplings.reserve(first.channels() + second.channels());
    for (const auto& l : first.couplings()) couplings.push_back(tensor(l, id2));
    for (const auto& l : second.couplings()) couplings.push_back(tensor(id1, l));
    Operator h = tensor(first.hamiltonian(), id2) + tensor(id1, second.hamiltonian()) + interaction;
    return SLHModel(std::move(couplings), std::move(h));
}

Operator analog_interaction(const Operator& drive, const CavityAnalog& analog) {
    return tensor(drive, analog.disturbance());
}

SLHModel enlarged_model(const QubitParams& qubit, const CavityAnalog& analog) {
    const DrivenSLH g1 = build_qubit(qubit.k1, pauli(Pauli::z));
    return concatenate(g1.base, build_cavity(analog), analog_interaction(g1.drive, analog));
}

Operator on_qubit(const Operator& op, const CavityAnalog& analog) {
    return tensor(op, Operator::identity(analog.truncation().levels()));
}

Operator on_cavity(const Operator& op) { return tensor(Operator::identity(2), op); }

}  // namespace hqf
