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

#include "hqf/truth_sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace hqf {

Eigen::Vector3d TruthTrajectory::bloch(std::size_t n) const {
    const Eigen::Matrix2cd& r = rho_path.at(n);
    // sx = 2 Re rho01, sy = -2 Im rho01, sz = rho00 - rho11
    return {2.0 * r(0, 1).real(), -2.0 * r(0, 1).imag(), (r(0, 0) - r(1, 1)).real()};
}

std::size_t TruthSettings::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

void TruthSettings::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
    if (!(horizon >= dt) || !std::isfinite(horizon)) throw Error(ErrorKind::invalid_argument, "horizon T must be at least dt");
}

std::vector<double> sample_ou(const OUProcess& ou, double dt, double horizon, Engine& rng) {
    ou.validate();
    TruthSettings{dt, horizon}.validate();
    const std::size_t steps = TruthSettings{dt, horizon}.steps();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sdt = std::sqrt(dt);
    std::vector<double> q(steps + 1);
    q[0] = ou.q0;
    for (std::size_t n = 0; n < steps; ++n) {
        q[n + 1] = q[n] - ou.u * q[n] * dt - ou.v * sdt * normal(rng);
    }
    return q;
}

TruthTrajectory simulate_truth(const QubitParams& qubit, const OUProcess& ou, const DensityMatrix& rho0,
                               const TruthSettings& settings, Engine& measurement_rng, Engine& disturbance_rng) {
    if (!(qubit.k1 >= 0.0) || !std::isfinite(qubit.k1)) {
        throw Error(ErrorKind::invalid_argument, "qubit coupling k1 must be non-negative");
    }
    ou.validate();
    settings.validate();
    if (rho0.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "truth simulation evolves a 2-level state");

    const std::size_t steps = settings.steps();
    const double dt = settings.dt;
    const double sdt = std::sqrt(dt);
    const Complex i{0.0, 1.0};
    // One distribution per engine: normal_distribution caches the second
    // draw of each pair, so sharing it would leak one stream into the other.
    std::normal_distribution<double> meas_normal(0.0, 1.0), dist_normal(0.0, 1.0);

    const Eigen::Matrix2cd l = std::sqrt(qubit.k1) * pauli(Pauli::minus).matrix();
    const Eigen::Matrix2cd ld = l.adjoint();
    const Eigen::Matrix2cd ldl = ld * l;
    const Eigen::Matrix2cd sz = pauli(Pauli::z).matrix();

    TruthTrajectory out;
    out.q_path.reserve(steps + 1);
    out.rho_path.reserve(steps + 1);
    out.record.dt = dt;
    out.record.increments.reserve(steps);

    Eigen::Matrix2cd rho = rho0.matrix();
    double q = ou.q0;
    Matrix work(2, 2);
    out.q_path.push_back(q);
    out.rho_path.push_back(rho);

    for (std::size_t n = 0; n < steps; ++n) {
        const Eigen::Matrix2cd h = q * sz;
        const Eigen::Matrix2cd lrho = l * rho;
        const double expect = 2.0 * lrho.trace().real();  // Tr[(L + L*) rho]
        const double dw = sdt * meas_normal(measurement_rng);
        out.record.increments.push_back(expect * dt + dw);

        const Eigen::Matrix2cd hr = h * rho;
        const Eigen::Matrix2cd drift =
            -i * (hr - hr.adjoint()) + lrho * ld - 0.5 * (ldl * rho + rho * ldl);
        const Eigen::Matrix2cd innovation = lrho + lrho.adjoint() - expect * rho;
        work = rho + drift * dt + innovation * dw;
        try {
            project_density(work, settings.projection);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "truth simulation step " << n << ": " << e.what();
            throw Error(e.kind(), msg.str());
        }
        rho = work;

        q = q - ou.u * q * dt - ou.v * sdt * dist_normal(disturbance_rng);
        out.q_path.push_back(q);
        out.rho_path.push_back(rho);
    }
    return out;
}

TruthTrajectory simulate_truth(const QubitParams& qubit, const OUProcess& ou, const DensityMatrix& rho0,
                               const TruthSettings& settings, std::uint64_t seed, std::uint64_t trajectory) {
    Engine meas = make_engine(seed, trajectory, Stream::measurement);
    Engine dist = make_engine(seed, trajectory, Stream::disturbance);
    TruthTrajectory out = simulate_truth(qubit, ou, rho0, settings, meas, dist);
    out.record.seed = seed;
    out.record.trajectory = trajectory;
    return out;
}

void write_truth_csv(std::ostream& out, const TruthTrajectory& truth) {
    out << "step,t,dY,q_true,sx_true,sy_true,sz_true\n";
    const double dt = truth.record.dt;
    for (std::size_t n = 0; n < truth.record.steps(); ++n) {
        const Eigen::Vector3d b = truth.bloch(n);
        csv::Row row(out);
        row << n << double(n) * dt << truth.record.increments[n] << truth.q_path[n] << b(0) << b(1) << b(2);
    }
}

void write_truth_csv(const std::string& path, const TruthTrajectory& truth) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
    write_truth_csv(out, truth);
}

MeasurementRecord read_record_csv(std::istream& in) {
    const csv::Table table = csv::read(in);
    const std::size_t t_col = table.column("t");
    const std::size_t dy_col = table.column("dY");
    if (table.rows.empty()) throw Error(ErrorKind::parse, "record CSV has no rows");
    MeasurementRecord rec;
    rec.increments.reserve(table.rows.size());
    for (const auto& row : table.rows) rec.increments.push_back(row.at(dy_col));
    if (table.rows.size() >= 2) {
        rec.dt = table.rows[1][t_col] - table.rows[0][t_col];
    }
    if (!(rec.dt > 0.0)) throw Error(ErrorKind::parse, "record CSV needs at least two rows with increasing t");
    for (double v : rec.increments) {
        if (!std::isfinite(v)) throw Error(ErrorKind::parse, "record CSV contains a non-finite increment");
    }
    return rec;
}

MeasurementRecord read_record_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    return read_record_csv(in);
}

}  // namespace hqf
