// Copyright 2026 The qmpemba Authors
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

#include "qmpemba/observables.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "csv_format.hpp"
#include "qmpemba/model.hpp"

namespace qmpemba {

namespace {

constexpr double crossing_resolution = 1e-3;

int tie_sign(double d) {
    if (d > distance_tie_tolerance) return 1;
    if (d < -distance_tie_tolerance) return -1;
    return 0;
}

void check_mode(const Spectrum& spectrum, Index j) {
    if (j < 0 || j >= spectrum.size()) {
        throw InvalidArgument("mode index " + std::to_string(j) + " out of range [0, " +
                              std::to_string(spectrum.size()) + ")");
    }
}

} // namespace

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
        throw InvalidArgument("trace distance needs two square matrices of equal size");
    }
    if (hermiticity_defect(rho) > 1e-8 || hermiticity_defect(sigma) > 1e-8) {
        throw InvalidArgument("trace distance inputs must be Hermitian to 1e-8");
    }
    const Matrix diff = hermitize(rho - sigma);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

cplx mode_amplitude(const Spectrum& spectrum, Index j, const Matrix& rho) {
    check_mode(spectrum, j);
    if (rho.rows() != spectrum.dim() || rho.cols() != spectrum.dim()) {
        throw InvalidArgument("density matrix dimension does not match the spectrum");
    }
    return (spectrum.left_adjoint().row(j) * vectorize(rho))(0);
}

ModeAmplitudeSeries mode_amplitude_series(const Spectrum& spectrum, Index j, const Trajectory& trajectory) {
    ModeAmplitudeSeries series;
    series.mode = j;
    series.times = trajectory.times();
    series.values.reserve(trajectory.size());
    for (const auto& rho : trajectory.states()) series.values.push_back(mode_amplitude(spectrum, j, rho));
    return series;
}

std::vector<double> distance_series(const Trajectory& trajectory, const Matrix& rho_ss) {
    std::vector<double> d;
    d.reserve(trajectory.size());
    for (const auto& rho : trajectory.states()) d.push_back(trace_distance(rho, rho_ss));
    return d;
}

SlowModeTransfer perturbative_delta_mu(const Spectrum& base, const Liouvillian& quenched, const Matrix& rho_t1,
                                       double tau, Index mode) {
    check_mode(base, mode);
    if (quenched.dim() != base.dim()) {
        throw InvalidArgument("quenched Liouvillian acts on dimension " + std::to_string(quenched.dim()) +
                              " but the base spectrum on " + std::to_string(base.dim()));
    }
    if (rho_t1.rows() != base.dim() || rho_t1.cols() != base.dim()) {
        throw InvalidArgument("rho(t1) dimension does not match the spectrum");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("quench duration tau must be >= 0");

    const Matrix delta = quenched.matrix() - base.generator().matrix();
    const Eigen::RowVectorXcd projected = base.left_adjoint().row(mode) * delta;
    SlowModeTransfer out;
    out.delta_mu = tau * (projected * vectorize(rho_t1))(0);
    out.transfer_elements = (projected * base.right_vectors()).transpose();
    return out;
}

Index dominant_slow_mode(const Spectrum& spectrum, const Matrix& rho0, double negligible) {
    if (!(negligible > 0.0)) throw InvalidArgument("negligible-weight threshold must be > 0");
    const Vector alpha = spectrum.coefficients(rho0);
    const auto& lambda = spectrum.eigenvalues();
    for (Index j = 1; j < spectrum.size(); ++j) {
        const double weight = std::abs(alpha(j)) * spectrum.right_vectors().col(j).norm();
        if (weight <= negligible) continue;
        const cplx partner = std::conj(lambda[static_cast<std::size_t>(j)]);
        if (std::abs(partner.imag()) > 1e-9) {
            for (Index k = 1; k < j; ++k) {
                if (std::abs(lambda[static_cast<std::size_t>(k)] - partner) < 1e-8) return k;
            }
        }
        return j;
    }
    throw NumericalError("no nontrivial weight: every mode beyond the steady state is below the negligible threshold");
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::none: return "none";
    case Verdict::qme: return "QME";
    case Verdict::anti_qme: return "anti-QME";
    }
    return "none";
}

const char* to_string(PairKind kind) {
    return kind == PairKind::cross_state ? "cross_state" : "quench_vs_baseline";
}

const char* to_string(FinalOrder order) {
    switch (order) {
    case FinalOrder::a_closer: return "a_closer";
    case FinalOrder::b_closer: return "b_closer";
    case FinalOrder::tie: return "tie";
    }
    return "tie";
}

MpembaReport detect_mpemba(const Trajectory& a, const Trajectory& b, const Matrix& rho_ss, PairKind kind) {
    if (a.times() != b.times()) throw InvalidArgument("Mpemba comparison needs identical sample grids");
    if (a.size() == 0) throw InvalidArgument("Mpemba comparison of empty trajectories");

    const auto da = distance_series(a, rho_ss);
    const auto db = distance_series(b, rho_ss);
    const auto& t = a.times();

    auto gap_at = [&](double time) {
        return trace_distance(a.state_at(time), rho_ss) - trace_distance(b.state_at(time), rho_ss);
    };

    MpembaReport report;
    report.initial_a = da.front();
    report.initial_b = db.front();
    report.final_a = da.back();
    report.final_b = db.back();

    int initial_sign = 0;
    int last_sign = 0;
    std::size_t last_index = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const int s = tie_sign(da[i] - db[i]);
        if (s == 0) continue;
        if (initial_sign == 0) initial_sign = s;
        if (last_sign != 0 && s != last_sign) {
            double lo = t[last_index];
            double hi = t[i];
            while (hi - lo > crossing_resolution) {
                const double mid = 0.5 * (lo + hi);
                if (tie_sign(gap_at(mid)) == last_sign) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            report.crossing_times.push_back(0.5 * (lo + hi));
        }
        last_sign = s;
        last_index = i;
    }

    const int final_sign = tie_sign(report.final_a - report.final_b);
    report.final_order = final_sign < 0 ? FinalOrder::a_closer : final_sign > 0 ? FinalOrder::b_closer : FinalOrder::tie;

    if (kind == PairKind::cross_state) {
        if (initial_sign > 0 && final_sign < 0 && !report.crossing_times.empty()) report.verdict = Verdict::qme;
    } else if (final_sign > 0) {
        report.verdict = Verdict::anti_qme;
    }
    return report;
}

std::vector<double> dark_momenta(int sites, int phase, int range) {
    const LatticeSpec lattice{sites, 1.0, Boundary::periodic};
    const BasisSpec basis = BasisSpec::for_lattice(lattice, SectorKind::single_particle);
    const auto ops = build_bond(lattice, basis, 1.0, phase, range);

    std::vector<double> dark;
    const int n_min = static_cast<int>(std::floor(-sites / 2.0)) + 1;
    const int n_max = sites / 2;
    for (int n = n_min; n <= n_max; ++n) {
        const double k = 2.0 * std::numbers::pi * n / sites;
        if (std::abs(static_cast<double>(phase) * std::polar(1.0, k * range) - 1.0) >= 1e-12) continue;
        const Vector v = plane_wave(basis, k);
        for (const auto& o : ops) {
            if ((o * v).norm() >= 1e-12) {
                throw NumericalError("momentum " + std::to_string(k) + " passes the phase test but is not annihilated");
            }
        }
        dark.push_back(k);
    }
    return dark;
}

void write_observables_csv(std::ostream& out, const Trajectory& trajectory, const Matrix& rho_ss,
                           const Matrix& number_op, const Spectrum& spectrum, const std::vector<int>& modes) {
    for (int j : modes) check_mode(spectrum, j);
    out << "t,trace_distance,trace,particle_number";
    for (int j : modes) out << ",mu_abs_" << j;
    out << '\n';
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const Matrix& rho = trajectory.states()[i];
        out << detail::format_number(trajectory.times()[i]) << ',' << detail::format_number(trace_distance(rho, rho_ss))
            << ',' << detail::format_number(rho.trace().real()) << ','
            << detail::format_number((number_op * rho).trace().real());
        for (int j : modes) out << ',' << detail::format_number(std::abs(mode_amplitude(spectrum, j, rho)));
        out << '\n';
    }
}

} // namespace qmpemba
