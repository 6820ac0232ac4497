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


#include "qmpemba/runner.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csv_format.hpp"
#include "parallel.hpp"

namespace qmpemba {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::shared_ptr<const Spectrum> spectrum_of(const Matrix& h, const std::vector<Matrix>& jumps, GeneratorTag tag) {
    auto lv = std::make_shared<const Liouvillian>(Liouvillian::assemble(h, jumps, tag));
    try {
        return Spectrum::compute(std::move(lv));
    } catch (const DefectiveSpectrumError&) {
        throw;
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(to_string(tag)) + " spectrum: " + e.what());
    }
}

std::vector<double> sample_grid(const ExperimentConfig& cfg) {
    if (!cfg.quench.enabled) return uniform_grid(cfg.horizon, cfg.dt);
    const double pins[] = {cfg.quench.t1, cfg.quench.t2};
    return uniform_grid(cfg.horizon, cfg.dt, pins);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string join_times(const std::vector<double>& times) {
    std::string s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i) s += ';';
        s += detail::format_number(times[i]);
    }
    return s;
}

void write_reports_csv(const fs::path& path, const std::vector<PairReport>& reports) {
    auto out = open_output(path);
    out << "trajectory_a,trajectory_b,kind,verdict,n_crossings,crossing_times,d_a_final,d_b_final\n";
    for (const auto& r : reports) {
        out << r.a << ',' << r.b << ',' << to_string(r.kind) << ',' << to_string(r.report.verdict) << ','
            << r.report.crossing_times.size() << ',' << join_times(r.report.crossing_times) << ','
            << detail::format_number(r.report.final_a) << ',' << detail::format_number(r.report.final_b) << '\n';
    }
    close_output(out, path);
}

/// Removes every file registered so far unless release() was called.
class OutputGuard {
public:
    void add(fs::path p) { paths_.push_back(std::move(p)); }
    void release() { paths_.clear(); }
    ~OutputGuard() {
        std::error_code ec;
        for (const auto& p : paths_) fs::remove(p, ec);
    }

private:
    std::vector<fs::path> paths_;
};

double parse_number(std::string_view text, const std::string& axis) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    if (first < last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(v)) {
        throw ConfigError("sweep axis " + axis + ": '" + std::string(text) + "' is not a number");
    }
    return v;
}

int integral(double v, const char* what) {
    if (v != std::round(v)) throw ConfigError(std::string("sweep: ") + what + " must be an integer");
    return static_cast<int>(v);
}

void apply(ExperimentConfig& cfg, SweepParameter p, double v) {
    switch (p) {
    case SweepParameter::rate: cfg.quench.rate = v; break;
    case SweepParameter::phase: cfg.quench.phase = integral(v, "a"); break;
    case SweepParameter::range: cfg.quench.range = integral(v, "range"); break;
    case SweepParameter::t1: cfg.quench.t1 = v; break;
    case SweepParameter::t2: cfg.quench.t2 = v; break;
    }
}

} // namespace

ExperimentModel build_model(const ExperimentConfig& cfg, std::shared_ptr<const Spectrum> reuse_base) {
    cfg.validate();
    ExperimentModel m;
    m.basis = cfg.basis();
    m.number_op = number_operator(m.basis);
    const Matrix h = build_hamiltonian(cfg.lattice, m.basis);
    std::vector<Matrix> jumps;
    for (const auto& ch : cfg.base_channels) append_channel(cfg.lattice, m.basis, ch, jumps);

    if (reuse_base) {
        if (reuse_base->dim() != m.basis.dim()) throw InvalidArgument("reused L0 spectrum has the wrong dimension");
        m.base = std::move(reuse_base);
    } else {
        m.base = spectrum_of(h, jumps, GeneratorTag::unquenched);
    }
    if (cfg.quench.enabled) {
        append_channel(cfg.lattice, m.basis, cfg.quench.bond(), jumps);
        m.quenched = spectrum_of(h, jumps, GeneratorTag::quenched);
    }
    m.rho_ss = steady_state(*m.base).rho;
    return m;
}

Simulation simulate(const ExperimentConfig& cfg, const ExperimentModel& model, unsigned threads) {
    const auto grid = sample_grid(cfg);
    const auto& q = cfg.quench;
    std::shared_ptr<const QuenchProtocol> baseline;
    std::shared_ptr<const QuenchProtocol> quenched;
    if (q.enabled) {
        if (!model.quenched) throw InvalidArgument("quench enabled but the model has no quenched spectrum");
        baseline = std::make_shared<const QuenchProtocol>(QuenchProtocol::window(model.base, model.base, q.t1, q.t2, cfg.horizon));
        quenched = std::make_shared<const QuenchProtocol>(
            QuenchProtocol::window(model.base, model.quenched, q.t1, q.t2, cfg.horizon));
    } else {
        baseline = std::make_shared<const QuenchProtocol>(QuenchProtocol::constant(model.base, cfg.horizon));
    }

    Simulation sim;
    for (const auto& st : cfg.initial_states) {
        sim.runs.push_back({st.label + "_baseline", st.label, false, {}});
        if (q.enabled) sim.runs.push_back({st.label + "_quench", st.label, true, {}});
    }
    detail::parallel_for(sim.runs.size(), threads, [&](std::size_t i) {
        auto& run = sim.runs[i];
        const auto* st = &cfg.initial_states.front();
        for (const auto& s : cfg.initial_states) {
            if (s.label == run.state) st = &s;
        }
        try {
            run.trajectory = propagate(st->density(model.basis), run.quenched ? quenched : baseline, grid);
        } catch (const NumericalError& e) {
            throw NumericalError("trajectory " + run.name + ": " + e.what());
        }
    });

    for (const auto& a : sim.runs) {
        for (const auto& b : sim.runs) {
            if (a.state == b.state) continue;
            sim.reports.push_back({a.name, b.name, PairKind::cross_state,
                                   detect_mpemba(a.trajectory, b.trajectory, model.rho_ss, PairKind::cross_state)});
        }
    }
    if (q.enabled) {
        for (std::size_t i = 0; i + 1 < sim.runs.size(); i += 2) {
            const auto& base = sim.runs[i];
            const auto& quench = sim.runs[i + 1];
            sim.reports.push_back({quench.name, base.name, PairKind::quench_vs_baseline,
                                   detect_mpemba(quench.trajectory, base.trajectory, model.rho_ss,
                                                 PairKind::quench_vs_baseline)});
        }
    }
    return sim;
}

std::vector<fs::path> write_spectra(const ExperimentConfig& cfg, const fs::path& dir) {
    const ExperimentModel model = build_model(cfg);
    fs::create_directories(dir);
    std::vector<fs::path> written;
    auto emit = [&](const Spectrum& s, const char* name) {
        const fs::path p = dir / name;
        auto out = open_output(p);
        write_spectrum_csv(out, s);
        close_output(out, p);
        written.push_back(p);
    };
    emit(*model.base, "spectrum_L0.csv");
    if (model.quenched) emit(*model.quenched, "spectrum_L1.csv");
    return written;
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
    const ExperimentModel model = build_model(cfg);
    const Simulation sim = simulate(cfg, model);

    RunManifest manifest;
    manifest.version = QMPEMBA_VERSION_STRING;
    manifest.output_dir = cfg.output_dir;
    manifest.reports = sim.reports;
    for (Index j = 0; j < std::min<Index>(6, model.base->size()); ++j) {
        manifest.leading_eigenvalues.push_back(model.base->eigenvalue(j));
    }

    fs::create_directories(manifest.output_dir);
    OutputGuard guard;
    auto emit = [&](const std::string& name, auto&& body) {
        const fs::path p = manifest.output_dir / name;
        guard.add(p);
        auto out = open_output(p);
        body(out);
        close_output(out, p);
        manifest.files.push_back(name);
    };

    emit("spectrum_L0.csv", [&](std::ostream& out) { write_spectrum_csv(out, *model.base); });
    if (model.quenched) {
        emit("spectrum_L1.csv", [&](std::ostream& out) { write_spectrum_csv(out, *model.quenched); });
    }
    for (const auto& run : sim.runs) {
        emit("traj_" + run.name + ".csv", [&](std::ostream& out) {
            write_observables_csv(out, run.trajectory, model.rho_ss, model.number_op, *model.base, cfg.modes_to_track);
        });
    }
    guard.add(manifest.output_dir / "reports.csv");
    write_reports_csv(manifest.output_dir / "reports.csv", sim.reports);
    manifest.files.push_back("reports.csv");

    ordered_json doc;
    doc["version"] = manifest.version;
    doc["config"] = ordered_json::parse(dump_config(cfg));
    doc["spectrum"] = ordered_json::array();
    for (std::size_t j = 0; j < manifest.leading_eigenvalues.size(); ++j) {
        const cplx l = manifest.leading_eigenvalues[j];
        doc["spectrum"].push_back({{"index", j}, {"re", l.real()}, {"im", l.imag()}});
    }
    doc["outputs"] = ordered_json::object();
    doc["outputs"]["spectra"] = ordered_json::array();
    doc["outputs"]["trajectories"] = ordered_json::object();
    for (const auto& f : manifest.files) {
        if (f.rfind("spectrum_", 0) == 0) doc["outputs"]["spectra"].push_back(f);
    }
    for (const auto& run : sim.runs) doc["outputs"]["trajectories"][run.name] = "traj_" + run.name + ".csv";
    doc["outputs"]["reports"] = "reports.csv";
    doc["verdicts"] = ordered_json::array();
    for (const auto& r : sim.reports) {
        doc["verdicts"].push_back({{"trajectory_a", r.a},
                                   {"trajectory_b", r.b},
                                   {"kind", to_string(r.kind)},
                                   {"verdict", to_string(r.report.verdict)},
                                   {"crossing_times", r.report.crossing_times}});
    }
    emit("manifest.json", [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    guard.release();
    return manifest;
}

SweepAxis SweepAxis::parse(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("sweep axis '" + std::string(text) + "' must look like name=v1,v2");
    SweepAxis axis;
    axis.name = std::string(text.substr(0, eq));
    static const std::map<std::string, SweepParameter> names{
        {"Gamma", SweepParameter::rate}, {"a", SweepParameter::phase}, {"range", SweepParameter::range},
        {"q", SweepParameter::range},    {"p", SweepParameter::range}, {"t1", SweepParameter::t1},
        {"t2", SweepParameter::t2}};
    const auto it = names.find(axis.name);
    if (it == names.end()) {
        throw ConfigError("unknown sweep axis '" + axis.name + "' (expected Gamma, a, range, q, p, t1 or t2)");
    }
    axis.parameter = it->second;
    std::string_view rest = text.substr(eq + 1);
    while (true) {
        const auto comma = rest.find(',');
        axis.values.push_back(parse_number(rest.substr(0, comma), axis.name));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return axis;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<SweepAxis>& axes, unsigned threads) {
    if (axes.empty()) throw ConfigError("sweep needs at least one axis");
    std::size_t cells = 1;
    for (std::size_t k = 0; k < axes.size(); ++k) {
        for (std::size_t m = 0; m < k; ++m) {
            if (axes[m].parameter == axes[k].parameter) throw ConfigError("sweep axis '" + axes[k].name + "' given twice");
        }
        if (axes[k].values.empty()) throw ConfigError("sweep axis '" + axes[k].name + "' has no values");
        cells *= axes[k].values.size();
        if (cells > max_sweep_cells) throw ConfigError("sweep grid exceeds 10000 cells");
    }

    ExperimentConfig base_cfg = cfg;
    base_cfg.quench.enabled = false;
    const auto base_spectrum = build_model(base_cfg).base;
    const std::size_t n_states = cfg.initial_states.size();

    SweepResult result;
    result.rows.resize(cells * n_states);
    std::vector<char> failed(cells, 0);
    detail::parallel_for(cells, threads, [&](std::size_t cell) {
        std::vector<double> coords(axes.size());
        ExperimentConfig c = cfg;
        c.quench.enabled = true;
        std::size_t rem = cell;
        for (std::size_t k = axes.size(); k-- > 0;) {
            coords[k] = axes[k].values[rem % axes[k].values.size()];
            rem /= axes[k].values.size();
        }
        for (std::size_t s = 0; s < n_states; ++s) {
            auto& row = result.rows[cell * n_states + s];
            row.coordinates = coords;
            row.state = cfg.initial_states[s].label;
        }
        try {
            for (std::size_t k = 0; k < axes.size(); ++k) apply(c, axes[k].parameter, coords[k]);
            const Simulation sim = simulate(c, build_model(c, base_spectrum), 1);
            for (std::size_t s = 0; s < n_states; ++s) {
                auto& row = result.rows[cell * n_states + s];
                const std::string quench = row.state + "_quench";
                Verdict v = Verdict::none;
                for (const auto& r : sim.reports) {
                    if (r.kind == PairKind::cross_state && r.a == quench && r.b.ends_with("_baseline") &&
                        r.report.verdict == Verdict::qme) {
                        v = Verdict::qme;
                    }
                }
                for (const auto& r : sim.reports) {
                    if (r.kind != PairKind::quench_vs_baseline || r.a != quench) continue;
                    if (v == Verdict::none) v = r.report.verdict;
                    row.final_delta_d = r.report.final_a - r.report.final_b;
                }
                row.verdict = to_string(v);
            }
        } catch (const std::exception& e) {
            failed[cell] = 1;
            for (std::size_t s = 0; s < n_states; ++s) {
                auto& row = result.rows[cell * n_states + s];
                row.verdict = "error";
                row.final_delta_d = 0.0;
                row.error = e.what();
            }
        }
    });
    for (char f : failed) result.failed_cells += f;
    return result;
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepAxis>& axes, const SweepResult& result) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto out = open_output(path);
    for (const auto& a : axes) out << a.name << ',';
    out << "state,verdict,final_delta_D\n";
    for (const auto& row : result.rows) {
        for (double c : row.coordinates) out << detail::format_number(c) << ',';
        out << row.state << ',' << row.verdict << ',';
        if (row.verdict != "error") out << detail::format_number(row.final_delta_d);
        out << '\n';
    }
    close_output(out, path);
}

} // namespace qmpemba
