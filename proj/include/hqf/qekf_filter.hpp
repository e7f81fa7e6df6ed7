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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hqf/hybrid_model.hpp"
#include "hqf/truth_sim.hpp"

namespace hqf {

/// Estimate vector ordering: (sigma_x, sigma_y, sigma_z, q2, p2).
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

enum class SMatrixForm {
    derived,  // sqrt(k1) sigma_z in the first entry, from the increment products
    paper,    // k1 sigma_z in the first entry, as usually printed
};

struct QekfParams {
    double k1 = 0.55;
    double k2 = 0.5;
    double alpha = 1.0;
    double lambda = 0.0;  // Riccati inflation, >= 0
    double mu = 0.01;     // noise floor added to Q, > 0
    SMatrixForm s_form = SMatrixForm::derived;

    void validate() const;
};

/// Drift of (sx, sy, sz, q2, p2) for the qubit-cavity system.
Vec5 drift_f(const Vec5& x, const QekfParams& p);

/// d drift_f / dx.
Mat5 jacobian_F(const Vec5& x, const QekfParams& p);

/// Measurement function h(x) = sqrt(k1) sx and its (constant) derivative.
double measurement_h(const Vec5& x, const QekfParams& p);
Eigen::Matrix<double, 1, 5> measurement_H(const QekfParams& p);

struct CovarianceTerms {
    /// State-dependent covariance as usually printed, with operator products
    /// evaluated exactly (sz^2 = I, sx^2 + sy^2 = 2 I). Diagnostic only.
    Mat5 q_raw;
    double r = 1.0;
    /// Cross-correlation in the configured form.
    Vec5 s;
    /// mu I + S R^-1 S^T, the covariance actually used by the filter.
    Mat5 q_robust;
    /// Lowest eigenvalue of q_raw - S R^-1 S^T; the positivity condition on
    /// the raw covariance asks for this to be >= 0.
    double raw_condition_min_eig = 0.0;
};

CovarianceTerms covariance_terms(const Vec5& x, const QekfParams& p);

struct QekfState {
    Vec5 x = Vec5::Zero();
    Mat5 P = Mat5::Zero();
    double t = 0.0;
    Vec5 gain = Vec5::Zero();  // gain used by the most recent step
};

struct QekfTolerances {
    double symmetry = 1e-10;
    double psd = 1e-8;
};

/// One Euler step of the estimate and the Riccati equation. The gain is
/// K = P H^T + S (R = 1). Throws ErrorKind::numerical if P stops being
/// symmetric positive semidefinite within tolerance.
QekfState qekf_step(const QekfState& state, double dy, double dt, const QekfParams& p,
                    const QekfTolerances& tol = {});

/// Mean of (sx, sy, sz, q2, p2) in a joint qubit (x) cavity state.
Vec5 moments(const DensityMatrix& joint, const CavityAnalog& analog);
/// Symmetrized covariance Re Tr[rho {X_i, X_j}/2] - <X_i><X_j>.
Mat5 symmetric_covariance(const DensityMatrix& joint, const CavityAnalog& analog);

struct QekfSample {
    double t;
    Vec5 x;
    double p_trace;
    Vec5 gain;
};

struct QekfRunConfig {
    QekfParams params;
    QekfState initial;
    std::size_t stride = 10;
    QekfTolerances tol{};
};

std::vector<QekfSample> run_qekf(const MeasurementRecord& record, const QekfRunConfig& config);

/// CSV with header t,sx_hat,sy_hat,sz_hat,q2_hat,p2_hat,P_trace,K_1..K_5.
void write_qekf_csv(std::ostream& out, const std::vector<QekfSample>& samples);
void write_qekf_csv(const std::string& path, const std::vector<QekfSample>& samples);

}  // namespace hqf
