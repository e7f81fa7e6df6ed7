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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hqf/hybrid_model.hpp"
#include "hqf/projection.hpp"
#include "hqf/rng.hpp"

namespace hqf {

/// Homodyne record: increments[n] is dY over [n dt, (n+1) dt].
struct MeasurementRecord {
    double dt = 0.0;
    std::vector<double> increments;
    std::uint64_t seed = 0;
    std::uint64_t trajectory = 0;

    std::size_t steps() const { return increments.size(); }
    double horizon() const { return dt * double(increments.size()); }
};

/// Ground truth for one trajectory. q_path and rho_path hold the states at
/// t = 0, dt, ..., T, one entry more than the record has increments.
struct TruthTrajectory {
    std::vector<double> q_path;
    std::vector<Eigen::Matrix2cd> rho_path;
    MeasurementRecord record;

    /// Bloch components (sx, sy, sz) of rho_path[n].
    Eigen::Vector3d bloch(std::size_t n) const;
};

struct TruthSettings {
    double dt = 1e-3;
    double horizon = 20.0;
    ProjectionSettings projection{};

    std::size_t steps() const;
    void validate() const;
};

/// Euler-Maruyama path q_{n+1} = q_n - u q_n dt - v sqrt(dt) xi_n; returns
/// round(T/dt) + 1 samples starting at ou.q0.
std::vector<double> sample_ou(const OUProcess& ou, double dt, double horizon, Engine& rng);

/// Conditional qubit evolution under homodyne detection of sqrt(k1) sigma_minus
/// with H = q(t) sigma_z, q sampled in lockstep from `disturbance_rng`.
TruthTrajectory simulate_truth(const QubitParams& qubit, const OUProcess& ou, const DensityMatrix& rho0,
                               const TruthSettings& settings, Engine& measurement_rng, Engine& disturbance_rng);

/// Same, with both noise streams derived from (seed, trajectory).
TruthTrajectory simulate_truth(const QubitParams& qubit, const OUProcess& ou, const DensityMatrix& rho0,
                               const TruthSettings& settings, std::uint64_t seed, std::uint64_t trajectory);

/// CSV with header step,t,dY,q_true,sx_true,sy_true,sz_true; one row per increment.
void write_truth_csv(std::ostream& out, const TruthTrajectory& truth);
void write_truth_csv(const std::string& path, const TruthTrajectory& truth);

/// Reads the dY column of a truth CSV; dt is recovered from the t column.
MeasurementRecord read_record_csv(std::istream& in);
MeasurementRecord read_record_csv(const std::string& path);

}  // namespace hqf
