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


// Exercises the shared library through its C interface only.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "qmpemba/qmpemba.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    qmpemba_config* ptr = nullptr;
    ~Config() { qmpemba_config_free(ptr); }
};

struct Spectrum {
    qmpemba_spectrum* ptr = nullptr;
    ~Spectrum() { qmpemba_spectrum_free(ptr); }
};

fs::path scratch(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("qmpemba_capi_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::string(qmpemba_version()).find('.') != std::string::npos);
    Config cfg;
    CHECK(qmpemba_config_parse("{not json", &cfg.ptr) == QMPEMBA_ERR_CONFIG);
    CHECK(cfg.ptr == nullptr);
    CHECK(std::string(qmpemba_last_error()).find("malformed") != std::string::npos);
    CHECK(qmpemba_config_parse(nullptr, &cfg.ptr) == QMPEMBA_ERR_INVALID);
    CHECK(qmpemba_config_preset("fig9", &cfg.ptr) == QMPEMBA_ERR_CONFIG);
    CHECK(qmpemba_config_load("/nonexistent/qmpemba.json", &cfg.ptr) == QMPEMBA_ERR_CONFIG);
    CHECK(qmpemba_run(nullptr) == QMPEMBA_ERR_INVALID);
    qmpemba_config_free(nullptr);
    qmpemba_spectrum_free(nullptr);
    CHECK(qmpemba_config_preset("fig2", &cfg.ptr) == QMPEMBA_OK);
    CHECK(std::string(qmpemba_last_error()).empty());
}

TEST_CASE("config handles") {
    Config cfg;
    REQUIRE(qmpemba_config_preset("fig3-anti", &cfg.ptr) == QMPEMBA_OK);
    const char* text = nullptr;
    REQUIRE(qmpemba_config_to_json(cfg.ptr, &text) == QMPEMBA_OK);
    const std::string json = text;
    CHECK(json.find("\"Gamma\": 0.4") != std::string::npos);

    Config copy;
    REQUIRE(qmpemba_config_parse(json.c_str(), &copy.ptr) == QMPEMBA_OK);
    const char* again = nullptr;
    REQUIRE(qmpemba_config_to_json(copy.ptr, &again) == QMPEMBA_OK);
    CHECK(json == again);

    CHECK(qmpemba_config_set_dt(cfg.ptr, -1.0) == QMPEMBA_ERR_CONFIG);
    CHECK(qmpemba_config_set_dt(cfg.ptr, 0.05) == QMPEMBA_OK);
    CHECK(qmpemba_config_set_output_dir(cfg.ptr, "") == QMPEMBA_ERR_INVALID);
    CHECK(qmpemba_config_set_output_dir(cfg.ptr, "elsewhere") == QMPEMBA_OK);
    const char* dir = nullptr;
    REQUIRE(qmpemba_config_output_dir(cfg.ptr, &dir) == QMPEMBA_OK);
    CHECK(std::string(dir) == "elsewhere");
}

TEST_CASE("spectrum handles") {
    Config cfg;
    REQUIRE(qmpemba_config_preset("fig3-qme", &cfg.ptr) == QMPEMBA_OK);
    Spectrum base;
    REQUIRE(qmpemba_spectrum_compute(cfg.ptr, 0, &base.ptr) == QMPEMBA_OK);
    CHECK(qmpemba_spectrum_size(base.ptr) == 121);
    double re = 1.0;
    double im = 1.0;
    REQUIRE(qmpemba_spectrum_eigenvalue(base.ptr, 0, &re, &im) == QMPEMBA_OK);
    CHECK(std::abs(re) < 1e-10);
    CHECK(std::abs(im) < 1e-10);
    REQUIRE(qmpemba_spectrum_eigenvalue(base.ptr, 120, &re, &im) == QMPEMBA_OK);
    CHECK(re < 0.0);
    CHECK(qmpemba_spectrum_eigenvalue(base.ptr, 121, &re, &im) == QMPEMBA_ERR_INVALID);
    CHECK(qmpemba_spectrum_size(nullptr) == 0);

    const fs::path out = scratch("spec");
    fs::create_directories(out);
    CHECK(qmpemba_spectrum_write_csv(base.ptr, (out / "l0.csv").c_str()) == QMPEMBA_OK);
    CHECK(fs::file_size(out / "l0.csv") > 0);
    CHECK(qmpemba_spectrum_write_csv(base.ptr, (out / "missing" / "l0.csv").c_str()) == QMPEMBA_ERR_IO);
    fs::remove_all(out);

    Spectrum quenched;
    REQUIRE(qmpemba_spectrum_compute(cfg.ptr, 1, &quenched.ptr) == QMPEMBA_OK);
    CHECK(qmpemba_spectrum_size(quenched.ptr) == 121);
}

TEST_CASE("run and sweep through the C interface") {
    const fs::path out = scratch("run");
    Config cfg;
    REQUIRE(qmpemba_config_preset("fig3-qme", &cfg.ptr) == QMPEMBA_OK);
    REQUIRE(qmpemba_config_set_output_dir(cfg.ptr, out.c_str()) == QMPEMBA_OK);
    CHECK(qmpemba_run(cfg.ptr) == QMPEMBA_OK);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(qmpemba_write_spectra(cfg.ptr) == QMPEMBA_OK);

    const char* good[] = {"a=1,-1"};
    size_t failed = 99;
    CHECK(qmpemba_sweep(cfg.ptr, good, 1, &failed) == QMPEMBA_OK);
    CHECK(failed == 0);
    CHECK(fs::exists(out / "sweep.csv"));

    const char* partial[] = {"q=2,10"};
    CHECK(qmpemba_sweep(cfg.ptr, partial, 1, &failed) == QMPEMBA_ERR_PARTIAL);
    CHECK(failed == 1);
    CHECK(std::string(qmpemba_last_error()).find("1 sweep cell") != std::string::npos);

    const char* bad[] = {"colour=1"};
    CHECK(qmpemba_sweep(cfg.ptr, bad, 1, nullptr) == QMPEMBA_ERR_CONFIG);
    fs::remove_all(out);
}
