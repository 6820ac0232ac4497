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


// qmpemba command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmpemba/qmpemba.h"

namespace {

int exit_code(qmpemba_status s) {
    switch (s) {
    case QMPEMBA_OK: return 0;
    case QMPEMBA_ERR_CONFIG:
    case QMPEMBA_ERR_INVALID: return 2;
    case QMPEMBA_ERR_PARTIAL: return 4;
    case QMPEMBA_ERR_NUMERICAL:
    case QMPEMBA_ERR_IO: return 3;
    }
    return 3;
}

int report(qmpemba_status s) {
    if (s != QMPEMBA_OK) std::fprintf(stderr, "qmpemba: %s\n", qmpemba_last_error());
    return exit_code(s);
}

struct ConfigHandle {
    qmpemba_config* ptr = nullptr;
    ~ConfigHandle() { qmpemba_config_free(ptr); }
};

qmpemba_status apply_overrides(qmpemba_config* cfg, const std::string& out, double dt) {
    if (!out.empty()) {
        if (auto s = qmpemba_config_set_output_dir(cfg, out.c_str())) return s;
    }
    if (dt > 0.0) return qmpemba_config_set_dt(cfg, dt);
    return QMPEMBA_OK;
}

void print_outputs(const qmpemba_config* cfg) {
    const char* dir = nullptr;
    if (qmpemba_config_output_dir(cfg, &dir) == QMPEMBA_OK) std::printf("wrote %s\n", dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Mpemba effect under bond-dissipation quenches"};
    app.set_version_flag("--version", std::string(qmpemba_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double dt = 0.0;

    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (overrides run.output_dir)");
    run->add_option("--dt", dt, "Sample spacing (overrides run.dt)")->check(CLI::PositiveNumber);

    std::string preset_name;
    bool emit_config = false;
    auto* pre = app.add_subcommand("preset", "Run a built-in experiment");
    pre->add_option("name", preset_name, "fig2, fig3-qme or fig3-anti")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3-qme", "fig3-anti"}));
    pre->add_option("--out", out_dir, "Output directory");
    pre->add_flag("--emit-config", emit_config, "Print the preset as a config document instead of running it");

    std::vector<std::string> axes;
    auto* sweep = app.add_subcommand("sweep", "Sweep quench parameters over a grid");
    sweep->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", axes, "name=v1,v2,... with name in Gamma, a, range (q, p), t1, t2")->required();
    sweep->add_option("--out", out_dir, "Output directory");

    auto* spectrum = app.add_subcommand("spectrum", "Write the Liouvillian eigenvalue CSVs");
    spectrum->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    spectrum->add_option("--out", out_dir, "Output directory");

    auto* validate = app.add_subcommand("validate", "Parse and validate a config file");
    validate->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ConfigHandle cfg;
    if (*pre) {
        if (auto s = qmpemba_config_preset(preset_name.c_str(), &cfg.ptr)) return report(s);
        if (auto s = apply_overrides(cfg.ptr, out_dir, 0.0)) return report(s);
        if (emit_config) {
            const char* text = nullptr;
            if (auto s = qmpemba_config_to_json(cfg.ptr, &text)) return report(s);
            std::fputs(text, stdout);
            return 0;
        }
        if (auto s = qmpemba_run(cfg.ptr)) return report(s);
        print_outputs(cfg.ptr);
        return 0;
    }

    if (auto s = qmpemba_config_load(config_path.c_str(), &cfg.ptr)) return report(s);
    if (*validate) {
        std::printf("%s: ok\n", config_path.c_str());
        return 0;
    }
    if (auto s = apply_overrides(cfg.ptr, out_dir, dt)) return report(s);

    if (*run) {
        if (auto s = qmpemba_run(cfg.ptr)) return report(s);
    } else if (*sweep) {
        std::vector<const char*> raw;
        for (const auto& a : axes) raw.push_back(a.c_str());
        size_t failed = 0;
        const auto s = qmpemba_sweep(cfg.ptr, raw.data(), raw.size(), &failed);
        if (s != QMPEMBA_OK) return report(s);
    } else if (*spectrum) {
        if (auto s = qmpemba_write_spectra(cfg.ptr)) return report(s);
    }
    print_outputs(cfg.ptr);
    return 0;
}
