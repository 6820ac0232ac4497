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


// Built-in experiment presets.

#include "qmpemba/config.hpp"

namespace qmpemba {

namespace {

InitialState pure(const char* label, int site) { return {label, {{site, 1.0}}, {}, {}}; }

ExperimentConfig fig2() {
    ExperimentConfig cfg;
    cfg.lattice = {20, 1.0, Boundary::open};
    cfg.base_channels = {Dephasing{0.01}};
    cfg.quench = {true, 0.01, 1, 1, 45.0, 65.0};
    cfg.initial_states = {pure("rho1", 9), {"rho2", {{11, 1.0 / 3.0}, {12, 1.0 / 3.0}, {13, 1.0 / 3.0}}, {}, {}}};
    cfg.horizon = 300.0;
    cfg.dt = 1.0;
    cfg.output_dir = "out/fig2";
    return cfg;
}

ExperimentConfig fig3(int phase, const char* out) {
    ExperimentConfig cfg;
    cfg.lattice = {10, 1.0, Boundary::open};
    cfg.base_channels = {BoundaryLoss{0.2, 0.2}};
    cfg.quench = {true, 0.4, phase, 2, 0.5, 3.0};
    cfg.initial_states = {pure("rho1", 5), pure("rho2", 9)};
    cfg.horizon = 20.0;
    cfg.dt = 0.1;
    cfg.output_dir = out;
    return cfg;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2", "fig3-qme", "fig3-anti"};
    return names;
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig cfg;
    if (name == "fig2") {
        cfg = fig2();
    } else if (name == "fig3-qme") {
        cfg = fig3(-1, "out/fig3-qme");
    } else if (name == "fig3-anti") {
        cfg = fig3(1, "out/fig3-anti");
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig2, fig3-qme or fig3-anti)");
    }
    cfg.validate();
    return cfg;
}

} // namespace qmpemba
