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


#include "qmpemba/qmpemba.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "qmpemba/runner.hpp"

struct qmpemba_config {
    qmpemba::ExperimentConfig cfg;
    std::string json;
};

struct qmpemba_spectrum {
    std::shared_ptr<const qmpemba::Spectrum> spectrum;
};

namespace {

thread_local std::string last_error;

qmpemba_status fail(qmpemba_status code, const std::string& what) {
    last_error = what;
    return code;
}

template <typename Fn>
qmpemba_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const qmpemba::ConfigError& e) {
        return fail(QMPEMBA_ERR_CONFIG, e.what());
    } catch (const qmpemba::NumericalError& e) {
        return fail(QMPEMBA_ERR_NUMERICAL, e.what());
    } catch (const qmpemba::InvalidArgument& e) {
        return fail(QMPEMBA_ERR_INVALID, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(QMPEMBA_ERR_IO, e.what());
    } catch (const qmpemba::Error& e) {
        return fail(QMPEMBA_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QMPEMBA_ERR_NUMERICAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QMPEMBA_ERR_INVALID, e.what());
    }
}

qmpemba_status need(const void* p, const char* what) {
    return p ? QMPEMBA_OK : fail(QMPEMBA_ERR_INVALID, std::string(what) + " must not be NULL");
}

qmpemba_status emit(qmpemba::ExperimentConfig cfg, qmpemba_config** out) {
    auto* h = new qmpemba_config{std::move(cfg), {}};
    *out = h;
    return QMPEMBA_OK;
}

} // namespace

extern "C" {

const char* qmpemba_version(void) { return QMPEMBA_VERSION_STRING; }

const char* qmpemba_last_error(void) { return last_error.c_str(); }

qmpemba_status qmpemba_config_parse(const char* json_text, qmpemba_config** out) {
    if (auto s = need(json_text, "json_text")) return s;
    if (auto s = need(out, "out")) return s;
    return guarded([&] { return emit(qmpemba::parse_config(json_text), out); });
}

qmpemba_status qmpemba_config_load(const char* path, qmpemba_config** out) {
    if (auto s = need(path, "path")) return s;
    if (auto s = need(out, "out")) return s;
    return guarded([&] { return emit(qmpemba::load_config(path), out); });
}

qmpemba_status qmpemba_config_preset(const char* name, qmpemba_config** out) {
    if (auto s = need(name, "name")) return s;
    if (auto s = need(out, "out")) return s;
    return guarded([&] { return emit(qmpemba::preset(name), out); });
}

qmpemba_status qmpemba_config_set_output_dir(qmpemba_config* cfg, const char* dir) {
    if (auto s = need(cfg, "cfg")) return s;
    if (auto s = need(dir, "dir")) return s;
    if (*dir == '\0') return fail(QMPEMBA_ERR_INVALID, "output directory must not be empty");
    cfg->cfg.output_dir = dir;
    return QMPEMBA_OK;
}

qmpemba_status qmpemba_config_set_dt(qmpemba_config* cfg, double dt) {
    if (auto s = need(cfg, "cfg")) return s;
    return guarded([&] {
        qmpemba::ExperimentConfig c = cfg->cfg;
        c.dt = dt;
        c.validate();
        cfg->cfg = std::move(c);
        return QMPEMBA_OK;
    });
}

qmpemba_status qmpemba_config_to_json(qmpemba_config* cfg, const char** json_text) {
    if (auto s = need(cfg, "cfg")) return s;
    if (auto s = need(json_text, "json_text")) return s;
    return guarded([&] {
        cfg->json = qmpemba::dump_config(cfg->cfg);
        *json_text = cfg->json.c_str();
        return QMPEMBA_OK;
    });
}

qmpemba_status qmpemba_config_output_dir(const qmpemba_config* cfg, const char** dir) {
    if (auto s = need(cfg, "cfg")) return s;
    if (auto s = need(dir, "dir")) return s;
    *dir = cfg->cfg.output_dir.c_str();
    return QMPEMBA_OK;
}

void qmpemba_config_free(qmpemba_config* cfg) { delete cfg; }

qmpemba_status qmpemba_run(const qmpemba_config* cfg) {
    if (auto s = need(cfg, "cfg")) return s;
    return guarded([&] {
        qmpemba::run_experiment(cfg->cfg);
        return QMPEMBA_OK;
    });
}

qmpemba_status qmpemba_sweep(const qmpemba_config* cfg, const char* const* axes, size_t n_axes, size_t* failed_cells) {
    if (auto s = need(cfg, "cfg")) return s;
    if (n_axes > 0) {
        if (auto s = need(axes, "axes")) return s;
    }
    return guarded([&] {
        std::vector<qmpemba::SweepAxis> parsed;
        for (size_t i = 0; i < n_axes; ++i) {
            if (!axes[i]) return fail(QMPEMBA_ERR_INVALID, "axis string must not be NULL");
            parsed.push_back(qmpemba::SweepAxis::parse(axes[i]));
        }
        const auto result = qmpemba::run_sweep(cfg->cfg, parsed);
        qmpemba::write_sweep_csv(std::filesystem::path(cfg->cfg.output_dir) / "sweep.csv", parsed, result);
        if (failed_cells) *failed_cells = result.failed_cells;
        if (result.failed_cells > 0) {
            std::string first;
            for (const auto& row : result.rows) {
                if (!row.error.empty()) {
                    first = row.error;
                    break;
                }
            }
            return fail(QMPEMBA_ERR_PARTIAL,
                        std::to_string(result.failed_cells) + " sweep cell(s) failed; first: " + first);
        }
        return QMPEMBA_OK;
    });
}

qmpemba_status qmpemba_spectrum_compute(const qmpemba_config* cfg, int quenched, qmpemba_spectrum** out) {
    if (auto s = need(cfg, "cfg")) return s;
    if (auto s = need(out, "out")) return s;
    return guarded([&] {
        if (quenched && !cfg->cfg.quench.enabled) return fail(QMPEMBA_ERR_INVALID, "config has the quench disabled");
        const auto model = qmpemba::build_model(cfg->cfg);
        *out = new qmpemba_spectrum{quenched ? model.quenched : model.base};
        return QMPEMBA_OK;
    });
}

size_t qmpemba_spectrum_size(const qmpemba_spectrum* spec) {
    return spec ? static_cast<size_t>(spec->spectrum->size()) : 0;
}

qmpemba_status qmpemba_spectrum_eigenvalue(const qmpemba_spectrum* spec, size_t index, double* re, double* im) {
    if (auto s = need(spec, "spec")) return s;
    if (index >= static_cast<size_t>(spec->spectrum->size())) {
        return fail(QMPEMBA_ERR_INVALID, "eigenvalue index " + std::to_string(index) + " out of range");
    }
    const auto l = spec->spectrum->eigenvalue(static_cast<qmpemba::Index>(index));
    if (re) *re = l.real();
    if (im) *im = l.imag();
    return QMPEMBA_OK;
}

qmpemba_status qmpemba_spectrum_write_csv(const qmpemba_spectrum* spec, const char* path) {
    if (auto s = need(spec, "spec")) return s;
    if (auto s = need(path, "path")) return s;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) return fail(QMPEMBA_ERR_IO, std::string("cannot write '") + path + "'");
        qmpemba::write_spectrum_csv(out, *spec->spectrum);
        out.close();
        if (!out) return fail(QMPEMBA_ERR_IO, std::string("failed writing '") + path + "'");
        return QMPEMBA_OK;
    });
}

void qmpemba_spectrum_free(qmpemba_spectrum* spec) { delete spec; }

qmpemba_status qmpemba_write_spectra(const qmpemba_config* cfg) {
    if (auto s = need(cfg, "cfg")) return s;
    return guarded([&] {
        qmpemba::write_spectra(cfg->cfg, cfg->cfg.output_dir);
        return QMPEMBA_OK;
    });
}

} // extern "C"
