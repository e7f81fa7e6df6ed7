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

#pragma once

#include <vector>

#include "hqf/operators.hpp"

namespace hqf {

/// Classical Ornstein-Uhlenbeck disturbance dq = -u q dt - v dw.
struct OUProcess {
    double u;   // decay rate
    double v;   // noise gain
    double q0;  // initial value

    void validate() const;
};

/// Open quantum system (S, L, H). The scattering matrix is always the
/// identity here, so only the channel couplings and the Hamiltonian are kept.
class SLHModel {
public:
    SLHModel(std::vector<Operator> couplings, Operator hamiltonian, const Tolerances& tol = {});

    std::size_t dim() const { return hamiltonian_.dim(); }
    std::size_t channels() const { return couplings_.size(); }
    const std::vector<Operator>& couplings() const { return couplings_; }
    const Operator& coupling(std::size_t k) const { return couplings_.at(k); }
    const Operator& hamiltonian() const { return hamiltonian_; }
    Operator scattering() const { return Operator::identity(channels()); }

    /// Sum over channels of the state-picture generator.
    Operator generator(const Operator& rho) const;

private:
    std::vector<Operator> couplings_;
    Operator hamiltonian_;
};

/// SLH model whose Hamiltonian is base + q * drive for a classical scalar q.
struct DrivenSLH {
    SLHModel base;
    Operator drive;

    SLHModel at(double q) const;
};

struct QubitParams {
    double k1;  // qubit-field coupling rate

    void validate() const;
};

/// Optical cavity standing in for an OU process; its quadrature
/// (a + a*)/(2 alpha) has the same mean dynamics when k = 2u.
class CavityAnalog {
public:
    CavityAnalog(double k, double alpha, FockTruncation trunc);

    double k() const { return k_; }
    double alpha() const { return alpha_; }
    FockTruncation truncation() const { return trunc_; }

    Operator a() const { return annihilation(trunc_); }
    /// (a + a*)/2
    Operator q2() const;
    /// (a - a*)/(2i)
    Operator p2() const;
    /// Analog of the classical disturbance, q2 / alpha.
    Operator disturbance() const;

    /// OU parameters this cavity reproduces: u = k/2, v = sqrt(2u)/(2 alpha).
    OUProcess recover_ou(double q0 = 0.0) const;

private:
    double k_;
    double alpha_;
    FockTruncation trunc_;
};

/// k = 2u, alpha = sqrt(2u)/(2v). Throws for v = 0.
CavityAnalog analog_cavity(const OUProcess& ou, FockTruncation trunc);

/// (I, sqrt(k1) sigma_minus, q * drive) with q left free.
DrivenSLH build_qubit(double k1, const Operator& disturbance_op);

/// (I, sqrt(k) a, 0) on the truncated Fock space.
SLHModel build_cavity(const CavityAnalog& analog);

/// Concatenation product on the joint space first (x) second: channels are
/// stacked as [L1 (x) I, I (x) L2] and H = H1 (x) I + I (x) H2 + interaction.
SLHModel concatenate(const SLHModel& first, const SLHModel& second, const Operator& interaction);

/// drive (x) (a + a*)/(2 alpha): the classical q in the qubit Hamiltonian
/// replaced by the cavity quadrature.
Operator analog_interaction(const Operator& drive, const CavityAnalog& analog);

/// Qubit coupled to the cavity analog of its disturbance, qubit channel first.
SLHModel enlarged_model(const QubitParams& qubit, const CavityAnalog& analog);

/// Lift a qubit operator to the joint space (op (x) I).
Operator on_qubit(const Operator& op, const CavityAnalog& analog);
/// Lift a cavity operator to the joint space (I (x) op).
Operator on_cavity(const Operator& op);

}  // namespace hqf
