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

#include "hqf/operators.hpp"

namespace hqf {

struct ProjectionSettings {
    Tolerances tol{};
    /// Largest trace-norm change a single projection may make before the
    /// integrator is considered to have failed.
    double max_change = 5e-2;
};

struct ProjectionReport {
    double trace_error = 0.0;  // |Tr rho - 1| before projection
    double change = 0.0;       // trace-norm distance moved by the projection
    bool clipped = false;      // eigenvalues were clipped
};

/// Map an Euler iterate back onto the density matrices: Hermitize, clip
/// eigenvalues below zero, renormalize the trace. When the lowest
/// eigenvalue is already above -tol.psd only the Hermitian part and the
/// trace are corrected. Throws ErrorKind::numerical when the change exceeds
/// settings.max_change.
ProjectionReport project_density(Matrix& rho, const ProjectionSettings& settings);

}  // namespace hqf
