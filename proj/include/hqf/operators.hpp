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

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "hqf/error.hpp"

namespace hqf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Numerical tolerances for the operator and state predicates.
struct Tolerances {
    double herm = 1e-9;   // max |A - A^dagger|
    double trace = 1e-9;  // |Tr rho - 1|
    double psd = 1e-8;    // lowest eigenvalue may reach -psd
};

/// Dense square complex operator on a finite Hilbert space.
class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix m);

    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(Eigen::Index(r), Eigen::Index(c)); }

    Operator adjoint() const { return Operator(m_.adjoint()); }
    Complex trace() const { return m_.trace(); }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);
    friend Operator operator*(const Operator& a, Complex s) { return s * a; }

private:
    Matrix m_;
};

bool is_hermitian(const Operator& a, double tol = Tolerances{}.herm);
double max_abs_diff(const Operator& a, const Operator& b);

enum class Pauli { x, y, z, plus, minus };

/// Pauli matrices and the qubit ladder operators. `plus` raises to the
/// first basis state, `minus` lowers to the second.
Operator pauli(Pauli which);

/// Number of retained Fock levels of a truncated cavity mode.
class FockTruncation {
public:
    explicit FockTruncation(std::size_t levels);
    std::size_t levels() const { return levels_; }

private:
    std::size_t levels_;
};

/// Annihilation operator on the truncated Fock space. The canonical
/// commutator only holds away from the last retained level.
Operator annihilation(FockTruncation trunc);

/// Kronecker product; the first factor is the slow (outer) index.
Operator tensor(const Operator& a, const Operator& b);

Operator commutator(const Operator& a, const Operator& b);

/// Heisenberg-picture generator i[H,X] + L* X L - (L* L X + X L* L)/2.
Operator lindblad(const Operator& coupling, const Operator& hamiltonian, const Operator& x);

/// Schroedinger-picture generator -i[H,rho] + L rho L* - (L* L rho + rho L* L)/2.
Operator lindblad_state(const Operator& coupling, const Operator& hamiltonian, const Operator& rho);

/// Density matrix with hermiticity, unit trace and positivity checked at
/// construction.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, const Tolerances& tol = {});

    /// Pure state |psi><psi| from an unnormalized vector.
    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Operator as_operator() const { return Operator(m_); }

    Complex expectation(const Operator& x) const;
    double min_eigenvalue() const;

private:
    Matrix m_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Trace distance (1/2)||a - b||_1.
double trace_distance(const Matrix& a, const Matrix& b);

/// 1 - sum_{n < levels} e^{-|beta|^2} |beta|^{2n} / n!.
double coherent_leakage(Complex beta, FockTruncation trunc);

/// Smallest truncation whose leakage is within `max_leakage`.
std::size_t minimal_levels(Complex beta, double max_leakage);

/// |beta><beta| from the truncated number-state expansion, renormalized.
/// Throws when the truncation leakage exceeds `max_leakage`.
DensityMatrix coherent_state(Complex beta, FockTruncation trunc, double max_leakage = 1e-6);

/// Bloch-vector qubit state (I + bx sx + by sy + bz sz)/2.
DensityMatrix qubit_state(double bx, double by, double bz);

}  // namespace hqf
