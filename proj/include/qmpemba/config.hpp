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

// Experiment configuration: a JSON document with sections `lattice`,
// `channels`, `quench` and `run`. Unknown keys are rejected. The schema is
// documented in docs/config.md.

#ifndef QMPEMBA_CONFIG_HPP
#define QMPEMBA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmpemba/model.hpp"

namespace qmpemba {

struct InitialState {
    std::string label;
    /// (site, weight) pairs; empty when the state comes from `matrix_file`.
    std::vector<std::pair<int, double>> mixture;
    std::string matrix_file;
    /// Loaded contents of matrix_file.
    Matrix explicit_matrix;

    Matrix density(const BasisSpec& basis) const;
};

struct QuenchConfig {
    bool enabled = false;
    double rate = 0.0;
    int phase = 1;
    int range = 1;
    double t1 = 0.0;
    double t2 = 0.0;

    Bond bond() const { return {rate, phase, range}; }
};

struct ExperimentConfig {
    LatticeSpec lattice;
    std::vector<DissipationChannel> base_channels;
    QuenchConfig quench;
    std::vector<InitialState> initial_states;
    double horizon = 1.0;
    double dt = 0.1;
    std::vector<int> modes_to_track{1, 2};
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    BasisSpec basis() const { return BasisSpec::for_lattice(lattice, sector_for(base_channels)); }

    /// Throws ConfigError naming the offending section and field.
    void validate() const;
};

/// 1.0 for horizons of 100 time units or more, 0.1 below.
double default_dt(double horizon);

/// `base_dir` resolves relative matrix_file paths.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with every default spelled out; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& cfg);

/// Built-in experiments: "fig2", "fig3-qme", "fig3-anti".
ExperimentConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

} // namespace qmpemba

#endif
