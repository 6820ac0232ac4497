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


// Shared helpers for the test binaries: seeded generators for random states
// and operators, and reference computations written without the library's
// vectorization machinery.

#ifndef QMPEMBA_TESTS_SUPPORT_HPP
#define QMPEMBA_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Eigenvalues>

#include "qmpemba/runner.hpp"

namespace qmpemba::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    cplx complex_normal() { return {normal(), normal()}; }

    Matrix matrix(Index n) {
        Matrix m(n, n);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) m(i, j) = complex_normal();
        }
        return m;
    }

    Matrix hermitian(Index n) {
        const Matrix g = matrix(n);
        return 0.5 * (g + g.adjoint());
    }

    /// Full-rank density matrix G G^+ / Tr.
    Matrix density(Index n) {
        const Matrix g = matrix(n);
        Matrix rho = g * g.adjoint();
        return rho / rho.trace().real();
    }

    /// Pure state |psi><psi| with a random vector.
    Matrix pure(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = complex_normal();
        v.normalize();
        return v * v.adjoint();
    }

private:
    std::mt19937_64 gen_;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Elementwise Kronecker product, written out by index.
inline Matrix kron_reference(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            for (Index k = 0; k < b.rows(); ++k) {
                for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
            }
        }
    }
    return out;
}

/// -i[H, rho] + sum_k (O rho O^+ - 1/2 {O^+ O, rho}) evaluated entry by entry.
inline Matrix lindblad_rhs(const Matrix& h, const std::vector<Matrix>& jumps, const Matrix& rho) {
    const Index d = rho.rows();
    const cplx i_unit{0.0, 1.0};
    Matrix out = Matrix::Zero(d, d);
    for (Index m = 0; m < d; ++m) {
        for (Index n = 0; n < d; ++n) {
            cplx acc = 0.0;
            for (Index k = 0; k < d; ++k) acc += -i_unit * (h(m, k) * rho(k, n) - rho(m, k) * h(k, n));
            for (const auto& o : jumps) {
                for (Index k = 0; k < d; ++k) {
                    for (Index l = 0; l < d; ++l) {
                        acc += o(m, k) * rho(k, l) * std::conj(o(n, l));
                        // (O^+ O)_{ml} = sum_k conj(O_{km}) O_{kl}
                        acc -= 0.5 * std::conj(o(k, m)) * o(k, l) * rho(l, n);
                        acc -= 0.5 * rho(m, k) * std::conj(o(l, k)) * o(l, n);
                    }
                }
            }
            out(m, n) = acc;
        }
    }
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size()};
}

/// Generator pieces for a config, built straight from the model module.
struct ModelParts {
    BasisSpec basis;
    Matrix hamiltonian;
    std::vector<Matrix> base_jumps;
    std::vector<Matrix> quench_jumps;
};

inline ModelParts parts_for(const ExperimentConfig& cfg) {
    ModelParts p;
    p.basis = cfg.basis();
    p.hamiltonian = build_hamiltonian(cfg.lattice, p.basis);
    for (const auto& ch : cfg.base_channels) append_channel(cfg.lattice, p.basis, ch, p.base_jumps);
    p.quench_jumps = p.base_jumps;
    append_channel(cfg.lattice, p.basis, cfg.quench.bond(), p.quench_jumps);
    return p;
}

/// Models of the built-in presets, computed once per test binary.
inline const ExperimentModel& preset_model(const std::string& name) {
    static std::map<std::string, std::unique_ptr<ExperimentModel>> cache;
    auto& slot = cache[name];
    if (!slot) slot = std::make_unique<ExperimentModel>(build_model(preset(name)));
    return *slot;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("qmpemba_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace qmpemba::testing

#endif
