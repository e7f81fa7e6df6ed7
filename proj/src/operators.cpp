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

#include "hqf/operators.hpp"

#include <cmath>
#include <sstream>

namespace hqf {

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* where) {
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << where << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw Error(ErrorKind::dimension_mismatch, msg.str());
    }
}

}  // namespace

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw Error(ErrorKind::dimension_mismatch, "operator matrix must be square");
    }
}

Operator Operator::identity(std::size_t dim) {
    return Operator(Matrix::Identity(Eigen::Index(dim), Eigen::Index(dim)));
}

Operator Operator::zero(std::size_t dim) {
    return Operator(Matrix::Zero(Eigen::Index(dim), Eigen::Index(dim)));
}

Operator operator+(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator+");
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator-");
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator*");
    return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }

bool is_hermitian(const Operator& a, double tol) {
    return (a.matrix() - a.matrix().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double max_abs_diff(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "max_abs_diff");
    if (a.dim() == 0) return 0.0;
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

Operator pauli(Pauli which) {
    const Complex i{0.0, 1.0};
    Matrix m(2, 2);
    switch (which) {
        case Pauli::x: m << 0.0, 1.0, 1.0, 0.0; break;
        case Pauli::y: m << 0.0, -i, i, 0.0; break;
        case Pauli::z: m << 1.0, 0.0, 0.0, -1.0; break;
        case Pauli::plus: m << 0.0, 1.0, 0.0, 0.0; break;
        case Pauli::minus: m << 0.0, 0.0, 1.0, 0.0; break;
    }
    return Operator(std::move(m));
}

FockTruncation::FockTruncation(std::size_t levels) : levels_(levels) {
    if (levels < 2) {
        throw Error(ErrorKind::invalid_argument, "Fock truncation needs at least 2 levels");
    }
}

Operator annihilation(FockTruncation trunc) {
    const auto n = Eigen::Index(trunc.levels());
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index m = 0; m + 1 < n; ++m) {
        a(m, m + 1) = std::sqrt(double(m + 1));
    }
    return Operator(std::move(a));
}

Operator tensor(const Operator& a, const Operator& b) {
    const Eigen::Index na = a.matrix().rows();
    const Eigen::Index nb = b.matrix().rows();
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
        }
    }
    return Operator(std::move(out));
}

Operator commutator(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "commutator");
    return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

Operator lindblad(const Operator& coupling, const Operator& hamiltonian, const Operator& x) {
    require_same_dim(coupling, x, "lindblad");
    require_same_dim(hamiltonian, x, "lindblad");
    const Complex i{0.0, 1.0};
    const Matrix& l = coupling.matrix();
    const Matrix& h = hamiltonian.matrix();
    const Matrix& xm = x.matrix();
    const Matrix ldl = l.adjoint() * l;
    Matrix out = i * (h * xm - xm * h);
    out += l.adjoint() * xm * l;
    out -= 0.5 * (ldl * xm + xm * ldl);
    return Operator(std::move(out));
}

Operator lindblad_state(const Operator& coupling, const Operator& hamiltonian, const Operator& rho) {
    require_same_dim(coupling, rho, "lindblad_state");
    require_same_dim(hamiltonian, rho, "lindblad_state");
    const Complex i{0.0, 1.0};
    const Matrix& l = coupling.matrix();
    const Matrix& h = hamiltonian.matrix();
    const Matrix& r = rho.matrix();
    const Matrix ldl = l.adjoint() * l;
    Matrix out = -i * (h * r - r * h);
    out += l * r * l.adjoint();
    out -= 0.5 * (ldl * r + r * ldl);
    return Operator(std::move(out));
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw Error(ErrorKind::dimension_mismatch, "density matrix must be square and non-empty");
    }
    const double herm_err = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > tol.herm) {
        throw Error(ErrorKind::invalid_argument,
                    "density matrix is not Hermitian (deviation " + std::to_string(herm_err) + ")");
    }
    const double trace_err = std::abs(m_.trace() - Complex(1.0, 0.0));
    if (trace_err > tol.trace) {
        throw Error(ErrorKind::invalid_argument,
                    "density matrix trace differs from 1 by " + std::to_string(trace_err));
    }
    const double lowest = min_eigenvalue();
    if (lowest < -tol.psd) {
        throw Error(ErrorKind::invalid_argument,
                    "density matrix has negative eigenvalue " + std::to_string(lowest));
    }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::invalid_argument, "pure state vector has zero norm");
    const Eigen::VectorXcd v = psi / norm;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto n = Eigen::Index(dim);
    return DensityMatrix(Matrix::Identity(n, n) / double(dim));
}

Complex DensityMatrix::expectation(const Operator& x) const {
    if (x.dim() != dim()) {
        throw Error(ErrorKind::dimension_mismatch, "expectation: operator and state dimensions differ");
    }
    // Tr[rho X] without forming the product
    return (m_.transpose().cwiseProduct(x.matrix())).sum();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(tensor(a.as_operator(), b.as_operator()).matrix());
}

double trace_distance(const Matrix& a, const Matrix& b) {
    const Matrix d = a - b;
    const Matrix herm = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double coherent_leakage(Complex beta, FockTruncation trunc) {
    const double b2 = std::norm(beta);
    double term = 1.0;  // b2^n / n!
    double sum = 0.0;
    for (std::size_t n = 0; n < trunc.levels(); ++n) {
        sum += term;
        term *= b2 / double(n + 1);
    }
    return std::max(0.0, 1.0 - std::exp(-b2) * sum);
}

std::size_t minimal_levels(Complex beta, double max_leakage) {
    std::size_t levels = 2;
    while (coherent_leakage(beta, FockTruncation(levels)) > max_leakage) {
        ++levels;
        if (levels > 100000) throw Error(ErrorKind::invalid_argument, "coherent amplitude too large");
    }
    return levels;
}

DensityMatrix coherent_state(Complex beta, FockTruncation trunc, double max_leakage) {
    const double leak = coherent_leakage(beta, trunc);
    if (leak > max_leakage) {
        std::ostringstream msg;
        msg << "coherent state with |beta|=" << std::abs(beta) << " leaks " << leak << " beyond "
            << trunc.levels() << " Fock levels (limit " << max_leakage << "); use at least "
            << minimal_levels(beta, max_leakage) << " levels";
        throw Error(ErrorKind::invalid_argument, msg.str());
    }
    const auto n = Eigen::Index(trunc.levels());
    Eigen::VectorXcd psi(n);
    Complex amp = std::exp(-0.5 * std::norm(beta));
    for (Eigen::Index k = 0; k < n; ++k) {
        psi(k) = amp;
        amp *= beta / std::sqrt(double(k + 1));
    }
    return DensityMatrix::pure(psi);
}

DensityMatrix qubit_state(double bx, double by, double bz) {
    const Matrix m = 0.5 * (Operator::identity(2).matrix() + bx * pauli(Pauli::x).matrix() +
                            by * pauli(Pauli::y).matrix() + bz * pauli(Pauli::z).matrix());
    return DensityMatrix(m);
}

}  // namespace hqf
