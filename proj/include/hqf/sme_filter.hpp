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
#include <optional>
#include <string>
#include <vector>

#include "hqf/hybrid_model.hpp"
#include "hqf/projection.hpp"
#include "hqf/truth_sim.hpp"

namespace hqf {

/// Which drift/innovation the filter integrates.
enum class SmeForm {
    /// General homodyne SME specialized to the model: all channels
    /// dissipate, the measured channel drives the innovation.
    corrected,
    /// The enlarged-system SME exactly as it is usually printed for this
    /// model: sqrt(k1) sigma_z as the measured coupling, a rho a in the cavity
    /// dissipator and a negative innovation sign. Kept for comparison only.
    printed,
};

struct SmeSettings {
    ProjectionSettings projection{};
    SmeForm form = SmeForm::corrected;
};

struct SmeStepDiagnostics {
    double trace_error = 0.0;  // drift + innovation trace change before projection
    double projection_change = 0.0;
    bool clipped = false;
};

/// Stochastic master equation filter for a multi-channel SLH model where a
/// single channel is homodyne-detected.
class SmeFilter {
public:
    SmeFilter(SLHModel model, const DensityMatrix& rho0, std::size_t measured_channel = 0, SmeSettings settings = {});

    /// Filter for the qubit coupled to the cavity analog of its disturbance.
    static SmeFilter for_hybrid(const QubitParams& qubit, const CavityAnalog& analog, const DensityMatrix& rho0,
                                SmeSettings settings = {});

    /// Advance by one record increment dY over dt.
    void step(double dy, double dt);

    const Matrix& rho() const { return rho_; }
    DensityMatrix state() const { return DensityMatrix(rho_, settings_.projection.tol); }
    const SLHModel& model() const { return model_; }
    std::size_t measured_channel() const { return measured_; }
    double time() const { return t_; }
    const SmeStepDiagnostics& last_step() const { return last_; }

    /// Tr[rho X].
    Complex expectation(const Operator& x) const;
    /// Real part of Tr[rho X]; throws if X is not Hermitian within tolerance.
    double observable(const Operator& x) const;

    /// Predicted measurement rate Tr[(L + L*) rho] of the measured channel.
    double predicted_rate() const;

private:
    void step_corrected(double dy, double dt);
    void step_printed(double dy, double dt);

    SLHModel model_;
    std::size_t measured_;
    SmeSettings settings_;
    Matrix rho_;
    double t_ = 0.0;
    SmeStepDiagnostics last_;

    // Precomputed pieces of the generator.
    Matrix lm_;        // measured coupling
    Matrix lm_dag_;
    Matrix nonherm_;   // -iH - (1/2) sum_k L_k* L_k
    std::vector<Matrix> others_;      // unmeasured couplings
    std::vector<Matrix> others_dag_;
    Matrix work_, tmp_, lrho_;
};

/// Tr[rho (I (x) (a + a*)/(2 alpha))].
double estimate_q(const SmeFilter& filter, const CavityAnalog& analog);

struct SmeSample {
    double t;
    double sx, sy, sz, q;
    double trace_error;
    double min_eig;
};

struct SmeRunConfig {
    QubitParams qubit;
    CavityAnalog analog;
    DensityMatrix rho0;  // joint initial state, qubit (x) cavity
    std::size_t stride = 10;
    SmeSettings settings{};
    /// Steps at which the full density matrix is copied out.
    std::vector<std::size_t> snapshot_steps{};
};

struct SmeRun {
    std::vector<SmeSample> samples;
    std::vector<Matrix> snapshots;
};

/// Fold the filter over the record, sampling every `stride` steps and at the end.
SmeRun run_sme(const MeasurementRecord& record, const SmeRunConfig& config);

/// CSV with header t,sx_hat,sy_hat,sz_hat,q_hat,trace_err,min_eig.
void write_sme_csv(std::ostream& out, const std::vector<SmeSample>& samples);
void write_sme_csv(const std::string& path, const std::vector<SmeSample>& samples);

/// Steps 0, stride, 2 stride, ... and the final step.
std::vector<std::size_t> sample_steps(std::size_t steps, std::size_t stride);

}  // namespace hqf
