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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hqf/qekf_filter.hpp"
#include "hqf/sme_filter.hpp"
#include "hqf/truth_sim.hpp"

namespace hqf {

inline constexpr const char* kVersion = "1.0.0";

/// Everything needed to reproduce a run. Serialized as flat `key = value`
/// text; see ExperimentConfig::keys() for the accepted keys.
struct ExperimentConfig {
    // model
    double k1 = 0.55;
    double u = 0.25;
    double v = 0.35355339059327373;  // 1/(2 sqrt 2)
    double q0 = 0.25;
    Eigen::Vector3d rho1_bloch{1.0, 0.0, 0.0};
    std::optional<Complex> beta{};  // unset: q0 * alpha
    std::size_t n_prime = 8;
    double max_leakage = 1e-6;
    // integration grid
    double dt = 1e-3;
    double horizon = 20.0;
    double projection_limit = 5e-2;
    // ensemble
    std::size_t trajectories = 20;
    std::uint64_t seed = 1;
    std::size_t stride = 10;
    std::size_t workers = 0;  // 0: hardware concurrency
    // QEKF
    double lambda = 0.0;
    double mu = 0.01;
    SMatrixForm s_matrix = SMatrixForm::derived;
    // benchmark
    std::vector<std::size_t> bench_n_primes{2, 3, 4, 5, 6};
    std::size_t bench_repeats = 3;
    double bench_min_seconds = 0.25;

    void validate() const;

    /// Set one key from its textual value. Throws ErrorKind::parse.
    void set(const std::string& key, const std::string& value);
    /// Textual value of one key, formatted so that set() restores it exactly.
    std::string get(const std::string& key) const;
    static const std::vector<std::string>& keys();

    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig load(const std::string& path);
    void write(std::ostream& out) const;
    void save(const std::string& path) const;

    // Derived model pieces.
    QubitParams qubit() const { return QubitParams{k1}; }
    OUProcess ou() const { return OUProcess{u, v, q0}; }
    CavityAnalog analog() const { return analog_cavity(ou(), FockTruncation(n_prime)); }
    CavityAnalog analog(std::size_t levels) const { return analog_cavity(ou(), FockTruncation(levels)); }
    Complex coherent_amplitude() const;
    DensityMatrix qubit_initial() const;
    DensityMatrix joint_initial(std::size_t levels) const;
    TruthSettings truth_settings() const;
    SmeRunConfig sme_config(std::size_t levels) const;
    QekfRunConfig qekf_config(std::size_t levels) const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Everything one trajectory contributes, sampled on the output grid.
struct TrajectoryResult {
    std::size_t index = 0;
    std::vector<double> truth_sx, truth_sy, truth_sz, truth_q;
    std::vector<double> sme_sx, sme_sy, sme_sz, sme_q;
    std::vector<double> qekf_sx, qekf_sy, qekf_sz, qekf_q;
    std::vector<Matrix> sme_snapshots;
    double sme_seconds = 0.0;
    double qekf_seconds = 0.0;
};

struct EnsembleOptions {
    std::vector<std::size_t> snapshot_steps{};
    bool run_sme = true;
    bool run_qekf = true;
};

struct TrajectoryFailure {
    std::size_t index;
    std::string message;
};

struct EnsembleResult {
    std::vector<double> t;
    std::vector<TrajectoryResult> trajectories;  // successful ones, by index
    std::vector<TrajectoryFailure> failures;
};

/// Simulate the truth and run both filters for every trajectory. Work is
/// spread over config.workers threads; results are ordered by index, so the
/// output does not depend on scheduling.
EnsembleResult run_ensemble(const ExperimentConfig& config, const EnsembleOptions& options = {});

TrajectoryResult run_trajectory(const ExperimentConfig& config, std::size_t index, const EnsembleOptions& options,
                                const std::vector<std::size_t>& sample_at);

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> se;  // sample std / sqrt(N); zero when N = 1
};

SeriesStats ensemble_stats(const std::vector<const std::vector<double>*>& series);

struct Metrics {
    std::vector<double> t;
    std::size_t trajectories = 0;
    SeriesStats truth_sx, truth_sy, truth_sz, truth_q;
    SeriesStats sme_sx, sme_sy, sme_sz, sme_q;
    SeriesStats qekf_sx, qekf_sy, qekf_sz, qekf_q;
    /// RMSE over the output grid between the ensemble-mean estimate of q and
    /// the ensemble mean of the sampled disturbance.
    double rmse_q_sme = 0.0;
    double rmse_q_qekf = 0.0;
    double sme_seconds_mean = 0.0;
    double qekf_seconds_mean = 0.0;
};

Metrics compute_metrics(const EnsembleResult& ensemble);

double rmse(const std::vector<double>& a, const std::vector<double>& b);

struct TimingRow {
    std::size_t n_prime;
    double sme_seconds;
    double qekf_seconds;
};

/// Mean wall-clock of one full SME pass and one full QEKF pass per cavity
/// truncation, all on the record of trajectory 0. One untimed warm-up pass
/// precedes the timed passes.
std::vector<TimingRow> bench_dimension(const ExperimentConfig& config, const std::vector<std::size_t>& n_primes);

/// Write fig4_sigma_x, fig5_sigma_y, fig6_sigma_z, fig7_q, metrics.csv and
/// timing.csv into `dir`.
void write_figure_csvs(const std::string& dir, const Metrics& metrics);
void write_timing_csv(const std::string& path, const std::vector<TimingRow>& rows);
void write_manifest(const std::string& path, const ExperimentConfig& config, const std::string& note = {});

/// Full pipeline: ensemble, metrics, figure CSVs, timing sweep, manifest.
/// On trajectory failures the completed trajectories are still aggregated
/// and written before an Error naming the first failing trajectory is thrown.
Metrics run_experiment(const ExperimentConfig& config, const std::string& out_dir, bool with_bench = true);

/// Render every figure CSV found in `dir` into an SVG next to it. Returns the
/// written paths. Throws ErrorKind::parse when an expected column is missing.
std::vector<std::string> emit_plots(const std::string& dir);

/// Line plot of one figure CSV; exposed for tests.
std::string render_figure_svg(const std::string& csv_text, const std::string& title);

}  // namespace hqf
