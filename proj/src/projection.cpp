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

#include "hqf/projection.hpp"

#include <cmath>
#include <sstream>

namespace hqf {

ProjectionReport project_density(Matrix& rho, const ProjectionSettings& settings) {
    ProjectionReport report;
    const double herm_change = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    report.trace_error = std::abs(tr - 1.0);
    if (!std::isfinite(tr) || !rho.allFinite()) {
        throw Error(ErrorKind::numerical, "state became non-finite");
    }

    const auto n = rho.rows();
    Eigen::LLT<Matrix> llt(rho + settings.tol.psd * Matrix::Identity(n, n));
    if (llt.info() == Eigen::Success) {
        rho /= tr;
        report.change = herm_change + report.trace_error;
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
        Eigen::VectorXd lam = es.eigenvalues();
        const Eigen::VectorXd kept = lam.cwiseMax(0.0);
        const double total = kept.sum();
        if (!(total > 0.0)) throw Error(ErrorKind::numerical, "state has no positive spectrum left");
        report.change = herm_change + (kept / total - lam).cwiseAbs().sum();
        report.clipped = true;
        rho = es.eigenvectors() * (kept / total).asDiagonal() * es.eigenvectors().adjoint();
    }
    if (report.change > settings.max_change) {
        std::ostringstream msg;
        msg << "projection moved the state by " << report.change << " (limit " << settings.max_change << ")";
        throw Error(ErrorKind::numerical, msg.str());
    }
    return report;
}

}  // namespace hqf
