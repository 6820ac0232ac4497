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


// Experiment orchestration: builds the generators a config describes,
// propagates every initial state with and without the quench, compares the
// resulting relaxation curves and writes the run artifacts.

#ifndef QMPEMBA_RUNNER_HPP
#define QMPEMBA_RUNNER_HPP

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "qmpemba/config.hpp"
#include "qmpemba/observables.hpp"

namespace qmpemba {

struct ExperimentModel {
    BasisSpec basis;
    Matrix number_op;
    std::shared_ptr<const Spectrum> base;
    /// Null when the quench is disabled.
    std::shared_ptr<const Spectrum> quenched;
    Matrix rho_ss;
};

/// `reuse_base` skips the L0 eigensolve when the caller already has it.
ExperimentModel build_model(const ExperimentConfig& cfg, std::shared_ptr<const Spectrum> reuse_base = nullptr);

struct TrajectoryRun {
    std::string name; ///< "<label>_baseline" or "<label>_quench"
    std::string state;
    bool quenched = false;
    Trajectory trajectory;
};

struct PairReport {
    std::string a;
    std::string b;
    PairKind kind = PairKind::cross_state;
    MpembaReport report;
};

struct Simulation {
    std::vector<TrajectoryRun> runs;
    std::vector<PairReport> reports;
};

/// Every ordered pair of trajectories from different initial states, plus one
/// quench-vs-baseline pair per state when the quench is enabled.
/// When the quench is enabled the baseline uses the same segment boundaries,
/// so both trajectories share one sample grid.
Simulation simulate(const ExperimentConfig& cfg, const ExperimentModel& model, unsigned threads = 0);

struct RunManifest {
    std::string version;
    std::filesystem::path output_dir;
    /// Relative to output_dir, in write order.
    std::vector<std::string> files;
    std::vector<cplx> leading_eigenvalues;
    std::vector<PairReport> reports;
};

/// Writes spectrum_L0.csv, spectrum_L1.csv (quench enabled), one
/// traj_<name>.csv per trajectory, reports.csv and manifest.json into
/// cfg.output_dir. Files already written are removed if a later step fails.
RunManifest run_experiment(const ExperimentConfig& cfg);

/// Writes spectrum_L0.csv and, if the quench is enabled, spectrum_L1.csv.
std::vector<std::filesystem::path> write_spectra(const ExperimentConfig& cfg, const std::filesystem::path& dir);

enum class SweepParameter { rate, phase, range, t1, t2 };

struct SweepAxis {
    SweepParameter parameter = SweepParameter::rate;
    std::string name;
    std::vector<double> values;

    /// "Gamma=0.1,0.2". Names: Gamma, a, range (or q, p), t1, t2.
    static SweepAxis parse(std::string_view text);
};

inline constexpr std::size_t max_sweep_cells = 10000;

struct SweepRow {
    std::vector<double> coordinates;
    std::string state;
    std::string verdict; ///< "none", "QME", "anti-QME" or "error"
    double final_delta_d = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t failed_cells = 0;
};

/// Runs every cell of the grid spanned by `axes` (last axis fastest) with the
/// quench forced on. Per state the verdict is QME if its quenched trajectory
/// overtakes the baseline of another state, else anti-QME if the quench
/// slows it down, else none. final_delta_d is D_quench(T) - D_baseline(T).
/// A failing cell gives "error" rows and the sweep continues.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes, unsigned threads = 0);

/// sweep.csv: one column per axis, then state, verdict, final_delta_D.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepAxis>& axes, const SweepResult& result);

} // namespace qmpemba

#endif
