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

// Relaxation diagnostics: distance to the steady state, Liouvillian mode
// amplitudes, the first-order slow-mode transfer of a short quench, Mpemba
// crossing detection and the periodic-chain dark momenta of bond dissipation.

#ifndef QMPEMBA_OBSERVABLES_HPP
#define QMPEMBA_OBSERVABLES_HPP

#include <iosfwd>
#include <vector>

#include "qmpemba/evolve.hpp"

namespace qmpemba {

/// 1/2 Tr|rho - sigma|. Both inputs must be Hermitian to 1e-8.
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// mu_j = Tr[l_j^+ rho].
cplx mode_amplitude(const Spectrum& spectrum, Index j, const Matrix& rho);

struct ModeAmplitudeSeries {
    Index mode = 0;
    std::vector<double> times;
    std::vector<cplx> values;
};

/// mu_j(t) along a trajectory, always against `spectrum` (normally the L0 one).
ModeAmplitudeSeries mode_amplitude_series(const Spectrum& spectrum, Index j, const Trajectory& trajectory);

/// D(t) = trace_distance(rho(t), rho_ss) on the trajectory samples.
std::vector<double> distance_series(const Trajectory& trajectory, const Matrix& rho_ss);

struct SlowModeTransfer {
    /// tau Tr[l_j^+ (L1 - L0)[rho(t1)]].
    cplx delta_mu;
    /// Tr[l_j^+ (L1 - L0)[r_k]] for every mode k of L0.
    Vector transfer_elements;
};

/// First-order change of mode `mode` of L0 caused by switching to L1 for a
/// short time tau, starting from rho_t1. Equal to
/// tau sum_k e^{lambda_k t1} alpha_k Tr[l_mode^+ (L1 - L0)[r_k]] by linearity.
SlowModeTransfer perturbative_delta_mu(const Spectrum& base, const Liouvillian& quenched, const Matrix& rho_t1,
                                       double tau, Index mode = 1);

/// Smallest j >= 1 whose weight |alpha_j| ||r_j||_F exceeds `negligible`.
/// If j is the second member of a complex-conjugate pair, the pair's first
/// index is returned. Throws NumericalError when rho0 has no weight outside
/// the steady state.
Index dominant_slow_mode(const Spectrum& spectrum, const Matrix& rho0, double negligible = 1e-10);

enum class Verdict { none, qme, anti_qme };
const char* to_string(Verdict verdict);

/// How two trajectories are compared.
///   cross_state: different initial states; QME when A starts farther and ends closer.
///   quench_vs_baseline: A is B with a quench applied; anti-QME when the quench
///   leaves A strictly farther from equilibrium at T.
enum class PairKind { cross_state, quench_vs_baseline };
const char* to_string(PairKind kind);

enum class FinalOrder { a_closer, b_closer, tie };
const char* to_string(FinalOrder order);

struct MpembaReport {
    std::vector<double> crossing_times;
    FinalOrder final_order = FinalOrder::tie;
    Verdict verdict = Verdict::none;
    double initial_a = 0.0;
    double initial_b = 0.0;
    double final_a = 0.0;
    double final_b = 0.0;
};

/// Distances closer than this are treated as equal when ordering curves.
inline constexpr double distance_tie_tolerance = 1e-12;

/// Compares D_A(t) and D_B(t) on the shared grid. Sign changes of D_A - D_B
/// are refined by bisection on the propagators to 1e-3 in time. When the
/// curves start equal, the initial ordering is read at the first sample
/// where they separate by more than distance_tie_tolerance.
MpembaReport detect_mpemba(const Trajectory& a, const Trajectory& b, const Matrix& rho_ss,
                           PairKind kind = PairKind::cross_state);

/// Momenta k = 2 pi n / L, n in (-L/2, L/2], whose plane waves every periodic
/// bond operator with (phase, range) annihilates. Each returned k is checked
/// numerically against the operators.
std::vector<double> dark_momenta(int sites, int phase, int range);

/// Observable CSV: `t,trace_distance,trace,particle_number,mu_abs_<j>...`.
void write_observables_csv(std::ostream& out, const Trajectory& trajectory, const Matrix& rho_ss,
                           const Matrix& number_op, const Spectrum& spectrum, const std::vector<int>& modes);

} // namespace qmpemba

#endif
