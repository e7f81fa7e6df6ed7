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

#include "hqf/qekf_filter.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace hqf {

namespace {
enum : int { SX = 0, SY = 1, SZ = 2, Q2 = 3, P2 = 4 };
}

void QekfParams::validate() const {
    if (!(k1 > 0.0) || !std::isfinite(k1)) throw Error(ErrorKind::invalid_argument, "QEKF k1 must be positive");
    if (!(k2 > 0.0) || !std::isfinite(k2)) throw Error(ErrorKind::invalid_argument, "QEKF k2 must be positive");
    if (!std::isfinite(alpha) || alpha == 0.0) throw Error(ErrorKind::invalid_argument, "QEKF alpha must be finite and nonzero");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::invalid_argument, "QEKF lambda must be >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::invalid_argument, "QEKF mu must be > 0");
}

Vec5 drift_f(const Vec5& x, const QekfParams& p) {
    Vec5 f;
    f(SX) = -(2.0 * x(Q2) / p.alpha) * x(SY) - 0.5 * p.k1 * x(SX);
    f(SY) = (2.0 * x(Q2) / p.alpha) * x(SX) - 0.5 * p.k1 * x(SY);
    f(SZ) = -p.k1 * (1.0 + x(SZ));
    f(Q2) = -0.5 * p.k2 * x(Q2);
    f(P2) = -x(SZ) / (2.0 * p.alpha) - 0.5 * p.k2 * x(P2);
    return f;
}

Mat5 jacobian_F(const Vec5& x, const QekfParams& p) {
    Mat5 F = Mat5::Zero();
    F(SX, SX) = -0.5 * p.k1;
    F(SX, SY) = -2.0 * x(Q2) / p.alpha;
    F(SX, Q2) = -2.0 * x(SY) / p.alpha;
    F(SY, SX) = 2.0 * x(Q2) / p.alpha;
    F(SY, SY) = -0.5 * p.k1;
    F(SY, Q2) = 2.0 * x(SX) / p.alpha;
    F(SZ, SZ) = -p.k1;
    F(Q2, Q2) = -0.5 * p.k2;
    F(P2, SZ) = -1.0 / (2.0 * p.alpha);
    F(P2, P2) = -0.5 * p.k2;
    return F;
}

double measurement_h(const Vec5& x, const QekfParams& p) { return std::sqrt(p.k1) * x(SX); }

Eigen::Matrix<double, 1, 5> measurement_H(const QekfParams& p) {
    Eigen::Matrix<double, 1, 5> h = Eigen::Matrix<double, 1, 5>::Zero();
    h(0, SX) = std::sqrt(p.k1);
    return h;
}

CovarianceTerms covariance_terms(const Vec5& x, const QekfParams& p) {
    CovarianceTerms out;
    const double k1 = p.k1;
    out.q_raw = Mat5::Zero();
    out.q_raw(SX, SX) = k1;  // k1 sz^2
    out.q_raw(SY, SY) = k1;
    out.q_raw(SX, SZ) = out.q_raw(SZ, SX) = k1 * x(SX);
    out.q_raw(SY, SZ) = out.q_raw(SZ, SY) = k1 * x(SY);
    out.q_raw(SZ, SZ) = 0.5 * k1 * (2.0 + 2.0 * x(SZ));  // sx^2 + sy^2 = 2
    out.q_raw(Q2, Q2) = -p.k2 / 4.0;
    out.q_raw(P2, P2) = -p.k2 / 4.0;

    out.r = 1.0;
    out.s = Vec5::Zero();
    out.s(SX) = (p.s_form == SMatrixForm::paper ? k1 : std::sqrt(k1)) * x(SZ);
    out.s(SZ) = -std::sqrt(k1) * x(SX);

    const Mat5 ssT = out.s * out.s.transpose() / out.r;
    out.q_robust = p.mu * Mat5::Identity() + ssT;
    Eigen::SelfAdjointEigenSolver<Mat5> es(out.q_raw - ssT, Eigen::EigenvaluesOnly);
    out.raw_condition_min_eig = es.eigenvalues()(0);
    return out;
}

QekfState qekf_step(const QekfState& state, double dy, double dt, const QekfParams& p, const QekfTolerances& tol) {
    if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "QEKF step needs dt > 0");
    const Vec5& x = state.x;
    const Mat5& P = state.P;
    const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol.symmetry) {
        std::ostringstream msg;
        msg << "QEKF covariance not symmetric (" << asym << ") at t=" << state.t;
        throw Error(ErrorKind::numerical, msg.str());
    }
    const Mat5 F = jacobian_F(x, p);
    const Eigen::Matrix<double, 1, 5> H = measurement_H(p);
    const CovarianceTerms terms = covariance_terms(x, p);

    const Vec5 K = (P * H.transpose() + terms.s) / terms.r;
    Mat5 dP = F * P + P * F.transpose() + terms.q_robust + p.lambda * P * P - K * terms.r * K.transpose();

    QekfState next;
    next.P = P + dP * dt;
    next.P = 0.5 * (next.P + next.P.transpose()).eval();
    next.x = x + drift_f(x, p) * dt + K * (dy - measurement_h(x, p) * dt);
    next.t = state.t + dt;
    next.gain = K;

    if (!next.P.allFinite() || !next.x.allFinite()) {
        std::ostringstream msg;
        msg << "QEKF diverged at t=" << state.t;
        throw Error(ErrorKind::numerical, msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat5> es(next.P, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol.psd) {
        std::ostringstream msg;
        msg << "QEKF covariance not positive semidefinite (lowest eigenvalue " << es.eigenvalues()(0)
            << ") at t=" << next.t;
        throw Error(ErrorKind::numerical, msg.str());
    }
    return next;
}

namespace {

std::array<Matrix, 5> joint_observables(const CavityAnalog& analog) {
    return {on_qubit(pauli(Pauli::x), analog).matrix(), on_qubit(pauli(Pauli::y), analog).matrix(),
            on_qubit(pauli(Pauli::z), analog).matrix(), on_cavity(analog.q2()).matrix(),
            on_cavity(analog.p2()).matrix()};
}

}  // namespace

Vec5 moments(const DensityMatrix& joint, const CavityAnalog& analog) {
    if (joint.dim() != 2 * analog.truncation().levels()) {
        throw Error(ErrorKind::dimension_mismatch, "joint state does not match the cavity truncation");
    }
    const auto obs = joint_observables(analog);
    Vec5 m;
    for (int i = 0; i < 5; ++i) m(i) = (joint.matrix() * obs[i]).trace().real();
    return m;
}

Mat5 symmetric_covariance(const DensityMatrix& joint, const CavityAnalog& analog) {
    const Vec5 m = moments(joint, analog);
    const auto obs = joint_observables(analog);
    Mat5 c;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const Matrix anti = 0.5 * (obs[i] * obs[j] + obs[j] * obs[i]);
            c(i, j) = (joint.matrix() * anti).trace().real() - m(i) * m(j);
        }
    }
    return 0.5 * (c + c.transpose());
}

std::vector<QekfSample> run_qekf(const MeasurementRecord& record, const QekfRunConfig& config) {
    config.params.validate();
    if (config.stride == 0) throw Error(ErrorKind::invalid_argument, "output stride must be positive");
    std::vector<QekfSample> out;
    out.reserve(record.steps() / config.stride + 2);
    QekfState state = config.initial;
    state.t = 0.0;
    auto emit = [&](std::size_t n) {
        out.push_back(QekfSample{double(n) * record.dt, state.x, state.P.trace(), state.gain});
    };
    emit(0);
    for (std::size_t n = 0; n < record.steps(); ++n) {
        state = qekf_step(state, record.increments[n], record.dt, config.params, config.tol);
        if ((n + 1) % config.stride == 0 || n + 1 == record.steps()) emit(n + 1);
    }
    return out;
}

void write_qekf_csv(std::ostream& out, const std::vector<QekfSample>& samples) {
    out << "t,sx_hat,sy_hat,sz_hat,q2_hat,p2_hat,P_trace,K_1,K_2,K_3,K_4,K_5\n";
    for (const auto& s : samples) {
        csv::Row row(out);
        row << s.t;
        for (int i = 0; i < 5; ++i) row << s.x(i);
        row << s.p_trace;
        for (int i = 0; i < 5; ++i) row << s.gain(i);
    }
}

void write_qekf_csv(const std::string& path, const std::vector<QekfSample>& samples) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    write_qekf_csv(out, samples);
}

}  // namespace hqf
