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

#include "qmpemba/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace qmpemba {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail(where, "unknown key '" + key + "'");
    }
}

double number_at(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
    return x;
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
    return obj.contains(key) ? number_at(obj, key, where) : fallback;
}

int integer_of(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

void check_rate(double x, const std::string& where) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(where, "rate must be finite and >= 0, got " + std::to_string(x));
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

Matrix load_matrix_file(const std::filesystem::path& path, const std::string& where) {
    std::ifstream in(path);
    if (!in) fail(where, "cannot open matrix file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(where, "matrix file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    reject_unknown(doc, where + " (matrix file)", {"re", "im"});
    if (!doc.contains("re") || !doc["re"].is_array()) fail(where, "matrix file needs an 're' array of rows");
    const auto& re = doc["re"];
    const Index d = static_cast<Index>(re.size());
    Matrix m = Matrix::Zero(d, d);
    auto fill = [&](const json& rows, bool imag) {
        if (!rows.is_array() || static_cast<Index>(rows.size()) != d) fail(where, "matrix file rows must form a square matrix");
        for (Index i = 0; i < d; ++i) {
            const auto& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Index>(row.size()) != d) fail(where, "matrix file rows must form a square matrix");
            for (Index j = 0; j < d; ++j) {
                const auto& x = row[static_cast<std::size_t>(j)];
                if (!x.is_number()) fail(where, "matrix entries must be numbers");
                if (imag) {
                    m(i, j) += cplx{0.0, x.get<double>()};
                } else {
                    m(i, j) += x.get<double>();
                }
            }
        }
    };
    fill(re, false);
    if (doc.contains("im")) fill(doc["im"], true);
    return m;
}

void check_density(const Matrix& rho, Index dim, const std::string& where) {
    if (rho.rows() != dim) {
        fail(where, "explicit state is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                        " but the basis has dimension " + std::to_string(dim));
    }
    if (hermiticity_defect(rho) > 1e-10) fail(where, "explicit state is not Hermitian");
    if (std::abs(rho.trace() - cplx{1.0}) > 1e-10) fail(where, "explicit state must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitize(rho), Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) fail(where, "explicit state has a negative eigenvalue");
}

void parse_lattice(const json& j, ExperimentConfig& cfg) {
    const std::string where = "lattice";
    reject_unknown(j, where, {"L", "J", "bc"});
    if (!j.contains("L")) fail(where, "missing required key 'L'");
    cfg.lattice.sites = integer_of(j.at("L"), where + ".L");
    cfg.lattice.hopping = number_or(j, "J", where, 1.0);
    if (j.contains("bc")) {
        const auto& bc = j.at("bc");
        if (!bc.is_string()) fail(where + ".bc", "expected \"open\" or \"periodic\"");
        const auto s = bc.get<std::string>();
        if (s == "open") {
            cfg.lattice.bc = Boundary::open;
        } else if (s == "periodic") {
            cfg.lattice.bc = Boundary::periodic;
        } else {
            fail(where + ".bc", "expected \"open\" or \"periodic\", got \"" + s + "\"");
        }
    }
}

void parse_channels(const json& j, ExperimentConfig& cfg) {
    const std::string where = "channels";
    reject_unknown(j, where, {"dephasing", "boundary_loss"});
    if (j.contains("dephasing")) {
        const auto& d = j.at("dephasing");
        reject_unknown(d, where + ".dephasing", {"gamma_d"});
        if (!d.contains("gamma_d")) fail(where + ".dephasing", "missing required key 'gamma_d'");
        cfg.base_channels.emplace_back(Dephasing{number_at(d, "gamma_d", where + ".dephasing")});
    }
    if (j.contains("boundary_loss")) {
        const auto& b = j.at("boundary_loss");
        reject_unknown(b, where + ".boundary_loss", {"gamma_1", "gamma_L"});
        cfg.base_channels.emplace_back(BoundaryLoss{number_or(b, "gamma_1", where + ".boundary_loss", 0.0),
                                                    number_or(b, "gamma_L", where + ".boundary_loss", 0.0)});
    }
}

void parse_quench(const json& j, ExperimentConfig& cfg) {
    const std::string where = "quench";
    reject_unknown(j, where, {"enabled", "Gamma", "a", "range", "p", "q", "t1", "t2"});
    auto& q = cfg.quench;
    if (j.contains("enabled")) {
        if (!j.at("enabled").is_boolean()) fail(where + ".enabled", "expected true or false");
        q.enabled = j.at("enabled").get<bool>();
    } else {
        q.enabled = true;
    }
    q.rate = number_or(j, "Gamma", where, 0.0);
    if (j.contains("a")) q.phase = integer_of(j.at("a"), where + ".a");
    int aliases = 0;
    for (const char* key : {"range", "p", "q"}) {
        if (j.contains(key)) {
            ++aliases;
            q.range = integer_of(j.at(key), where + "." + key);
        }
    }
    if (aliases > 1) fail(where, "give the bond range once, as 'range' (aliases 'p' and 'q')");
    q.t1 = number_or(j, "t1", where, 0.0);
    q.t2 = number_or(j, "t2", where, 0.0);
}

void parse_run(const json& j, ExperimentConfig& cfg, const std::filesystem::path& base_dir) {
    const std::string where = "run";
    reject_unknown(j, where, {"initial_states", "T", "dt", "modes_to_track", "output_dir", "seed"});
    if (!j.contains("T")) fail(where, "missing required key 'T'");
    cfg.horizon = number_at(j, "T", where);
    cfg.dt = j.contains("dt") ? number_at(j, "dt", where) : default_dt(cfg.horizon);
    if (j.contains("modes_to_track")) {
        const auto& m = j.at("modes_to_track");
        if (!m.is_array()) fail(where + ".modes_to_track", "expected an array of mode indices");
        cfg.modes_to_track.clear();
        for (std::size_t i = 0; i < m.size(); ++i) {
            cfg.modes_to_track.push_back(integer_of(m[i], where + ".modes_to_track[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) fail(where + ".output_dir", "expected a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) fail(where + ".seed", "expected a nonnegative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }

    if (!j.contains("initial_states")) fail(where, "missing required key 'initial_states'");
    const auto& states = j.at("initial_states");
    if (!states.is_array() || states.empty()) fail(where + ".initial_states", "expected a non-empty array");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string at = where + ".initial_states[" + std::to_string(i) + "]";
        const auto& s = states[i];
        reject_unknown(s, at, {"label", "mixture", "matrix_file"});
        InitialState st;
        st.label = "rho" + std::to_string(i + 1);
        if (s.contains("label")) {
            if (!s.at("label").is_string()) fail(at + ".label", "expected a string");
            st.label = s.at("label").get<std::string>();
        }
        const bool has_mix = s.contains("mixture");
        const bool has_file = s.contains("matrix_file");
        if (has_mix == has_file) fail(at, "give exactly one of 'mixture' or 'matrix_file'");
        if (has_mix) {
            const auto& mix = s.at("mixture");
            if (!mix.is_array() || mix.empty()) fail(at + ".mixture", "expected a non-empty array of [site, weight]");
            for (std::size_t k = 0; k < mix.size(); ++k) {
                const std::string mk = at + ".mixture[" + std::to_string(k) + "]";
                if (!mix[k].is_array() || mix[k].size() != 2) fail(mk, "expected [site, weight]");
                const int site = integer_of(mix[k][0], mk + "[0]");
                if (!mix[k][1].is_number()) fail(mk + "[1]", "expected a number");
                st.mixture.emplace_back(site, mix[k][1].get<double>());
            }
        } else {
            if (!s.at("matrix_file").is_string()) fail(at + ".matrix_file", "expected a path string");
            st.matrix_file = s.at("matrix_file").get<std::string>();
            std::filesystem::path p(st.matrix_file);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            st.explicit_matrix = load_matrix_file(p, at + ".matrix_file");
        }
        cfg.initial_states.push_back(std::move(st));
    }
}

ordered_json state_to_json(const InitialState& st) {
    ordered_json s;
    s["label"] = st.label;
    if (st.matrix_file.empty()) {
        ordered_json mix = ordered_json::array();
        for (const auto& [site, w] : st.mixture) mix.push_back({site, w});
        s["mixture"] = mix;
    } else {
        s["matrix_file"] = st.matrix_file;
    }
    return s;
}

} // namespace

Matrix InitialState::density(const BasisSpec& basis) const {
    if (!matrix_file.empty()) return explicit_matrix;
    return site_mixture(basis, mixture);
}

double default_dt(double horizon) { return horizon >= 100.0 ? 1.0 : 0.1; }

void ExperimentConfig::validate() const {
    if (lattice.sites < 2) fail("lattice.L", "need at least 2 sites, got " + std::to_string(lattice.sites));
    if (!std::isfinite(lattice.hopping)) fail("lattice.J", "must be finite");

    for (const auto& ch : base_channels) {
        if (const auto* d = std::get_if<Dephasing>(&ch)) check_rate(d->rate, "channels.dephasing.gamma_d");
        if (const auto* b = std::get_if<BoundaryLoss>(&ch)) {
            check_rate(b->first_rate, "channels.boundary_loss.gamma_1");
            check_rate(b->last_rate, "channels.boundary_loss.gamma_L");
        }
        if (std::holds_alternative<Bond>(ch)) fail("channels", "bond dissipation belongs in the quench section");
    }

    if (quench.enabled) {
        check_rate(quench.rate, "quench.Gamma");
        if (quench.phase != 1 && quench.phase != -1) fail("quench.a", "must be +1 or -1");
        if (quench.range < 1) fail("quench.range", "must be >= 1");
        if (lattice.bc == Boundary::open && quench.range >= lattice.sites) {
            fail("quench.range", "must be < L under open boundaries");
        }
        if (quench.t1 < 0.0) fail("quench", "t1 must be >= 0");
        if (!(quench.t1 < quench.t2)) {
            fail("quench", "t2 (" + std::to_string(quench.t2) + ") must be greater than t1 (" + std::to_string(quench.t1) + ")");
        }
        if (quench.t2 > horizon) fail("quench", "t2 must not exceed the horizon run.T");
    }

    if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("run.T", "must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("run.dt", "must be finite and > 0");
    if (horizon / dt > 1e7) fail("run.dt", "more than 1e7 samples; increase dt");

    const BasisSpec b = basis();
    const Index d2 = b.dim() * b.dim();
    for (int m : modes_to_track) {
        if (m < 0 || m >= d2) fail("run.modes_to_track", "mode " + std::to_string(m) + " outside [0, " + std::to_string(d2) + ")");
    }

    if (initial_states.empty()) fail("run.initial_states", "need at least one initial state");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < initial_states.size(); ++i) {
        const auto& st = initial_states[i];
        const std::string at = "run.initial_states[" + std::to_string(i) + "]";
        if (!valid_label(st.label)) fail(at + ".label", "labels use only letters, digits, '_' and '-'");
        if (!labels.insert(st.label).second) fail(at + ".label", "duplicate label '" + st.label + "'");
        if (st.matrix_file.empty()) {
            double total = 0.0;
            for (const auto& [site, w] : st.mixture) {
                if (site < 1 || site > lattice.sites) fail(at + ".mixture", "site " + std::to_string(site) + " outside 1..L");
                if (!(w >= 0.0) || !std::isfinite(w)) fail(at + ".mixture", "weights must be >= 0");
                total += w;
            }
            if (st.mixture.empty()) fail(at + ".mixture", "empty mixture");
            if (std::abs(total - 1.0) > 1e-12) fail(at + ".mixture", "weights sum to " + std::to_string(total) + ", expected 1");
        } else {
            check_density(st.explicit_matrix, b.dim(), at + ".matrix_file");
        }
    }
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config document: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.modes_to_track = {1, 2};
    try {
        reject_unknown(doc, "config", {"lattice", "channels", "quench", "run"});
        if (!doc.contains("lattice")) fail("config", "missing section 'lattice'");
        if (!doc.contains("run")) fail("config", "missing section 'run'");
        parse_lattice(doc.at("lattice"), cfg);
        if (doc.contains("channels")) parse_channels(doc.at("channels"), cfg);
        if (doc.contains("quench")) parse_quench(doc.at("quench"), cfg);
        parse_run(doc.at("run"), cfg, base_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

std::string dump_config(const ExperimentConfig& cfg) {
    ordered_json doc;
    doc["lattice"]["L"] = cfg.lattice.sites;
    doc["lattice"]["J"] = cfg.lattice.hopping;
    doc["lattice"]["bc"] = cfg.lattice.bc == Boundary::open ? "open" : "periodic";
    doc["channels"] = ordered_json::object();
    for (const auto& ch : cfg.base_channels) {
        if (const auto* d = std::get_if<Dephasing>(&ch)) doc["channels"]["dephasing"]["gamma_d"] = d->rate;
        if (const auto* b = std::get_if<BoundaryLoss>(&ch)) {
            doc["channels"]["boundary_loss"]["gamma_1"] = b->first_rate;
            doc["channels"]["boundary_loss"]["gamma_L"] = b->last_rate;
        }
    }
    auto& q = doc["quench"];
    q["enabled"] = cfg.quench.enabled;
    q["Gamma"] = cfg.quench.rate;
    q["a"] = cfg.quench.phase;
    q["range"] = cfg.quench.range;
    q["t1"] = cfg.quench.t1;
    q["t2"] = cfg.quench.t2;
    auto& run = doc["run"];
    run["initial_states"] = ordered_json::array();
    for (const auto& st : cfg.initial_states) run["initial_states"].push_back(state_to_json(st));
    run["T"] = cfg.horizon;
    run["dt"] = cfg.dt;
    run["modes_to_track"] = cfg.modes_to_track;
    run["output_dir"] = cfg.output_dir;
    run["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

} // namespace qmpemba
