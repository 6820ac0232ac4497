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

#include "qmpemba/superop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "csv_format.hpp"

namespace qmpemba {

namespace {

constexpr double sort_tie_tolerance = 1e-9;
constexpr double zero_eigenvalue_tolerance = 1e-10;

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double norm1(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

using IndexIter = std::vector<Index>::iterator;

// Sorts [first, last) by key, then hands each run of keys within `tol` of the
// run's first element to `inner` for further ordering.
template <class Key, class Inner>
void sort_clustered(IndexIter first, IndexIter last, Key key, bool descending, Inner inner) {
    std::stable_sort(first, last, [&](Index a, Index b) { return descending ? key(a) > key(b) : key(a) < key(b); });
    auto group = first;
    while (group != last) {
        auto end = group + 1;
        while (end != last && std::abs(key(*end) - key(*group)) <= sort_tie_tolerance) ++end;
        inner(group, end);
        group = end;
    }
}

std::vector<Index> mode_order(const Eigen::VectorXcd& values) {
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    auto re = [&](Index i) { return values(i).real(); };
    auto abs_im = [&](Index i) { return std::abs(values(i).imag()); };
    auto im = [&](Index i) { return values(i).imag(); };
    sort_clustered(order.begin(), order.end(), re, true, [&](IndexIter f, IndexIter l) {
        sort_clustered(f, l, abs_im, false, [&](IndexIter f2, IndexIter l2) {
            std::stable_sort(f2, l2, [&](Index a, Index b) { return im(a) < im(b); });
        });
    });
    return order;
}

std::pair<cplx, cplx> closest_pair(const std::vector<cplx>& values) {
    std::pair<cplx, cplx> best{values.empty() ? cplx{} : values.front(), values.empty() ? cplx{} : values.front()};
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double gap = std::abs(values[i] - values[j]);
            if (gap < best_gap) {
                best_gap = gap;
                best = {values[i], values[j]};
            }
        }
    }
    return best;
}

std::string format_cplx(cplx z) {
    std::ostringstream s;
    s.precision(17);
    s << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return s.str();
}

} // namespace

Vector vectorize(const Matrix& rho) {
    if (rho.rows() != rho.cols()) throw InvalidArgument("vectorize expects a square matrix");
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize(const Vector& v) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) {
        throw InvalidArgument("vector of length " + std::to_string(v.size()) + " is not a vectorized square matrix");
    }
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

const char* to_string(GeneratorTag tag) {
    switch (tag) {
    case GeneratorTag::unquenched: return "L0";
    case GeneratorTag::quenched: return "L1";
    case GeneratorTag::custom: return "custom";
    }
    return "custom";
}

Liouvillian Liouvillian::assemble(const Matrix& hamiltonian, std::span<const Matrix> jumps, GeneratorTag tag) {
    const Index d = hamiltonian.rows();
    if (hamiltonian.cols() != d) throw InvalidArgument("Hamiltonian must be square");
    for (const auto& o : jumps) {
        if (o.rows() != d || o.cols() != d) {
            throw InvalidArgument("jump operator of size " + std::to_string(o.rows()) + "x" + std::to_string(o.cols()) +
                                  " does not match Hamiltonian dimension " + std::to_string(d));
        }
    }
    const Matrix id = Matrix::Identity(d, d);
    const cplx i_unit{0.0, 1.0};
    Matrix m = -i_unit * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    for (const auto& o : jumps) {
        const Matrix odo = o.adjoint() * o;
        m += kron(o.conjugate(), o);
        m -= 0.5 * kron(id, odo);
        m -= 0.5 * kron(odo.transpose(), id);
    }
    return Liouvillian(d, std::move(m), tag);
}

Matrix Liouvillian::apply(const Matrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw InvalidArgument("density matrix dimension mismatch");
    return devectorize(matrix_ * vectorize(rho));
}

double Liouvillian::trace_residual() const {
    const Vector vid = vectorize(Matrix::Identity(dim_, dim_));
    if (matrix_.size() == 0) return 0.0;
    return (vid.adjoint() * matrix_).cwiseAbs().maxCoeff();
}

std::shared_ptr<const Spectrum> Spectrum::compute(std::shared_ptr<const Liouvillian> generator) {
    if (!generator) throw InvalidArgument("spectrum of a null Liouvillian");
    const Matrix& m = generator->matrix();
    const Index n = m.rows();
    Matrix a = m;
    Vector values(n);
    Matrix vectors(n, n);
    const lapack_int info = n == 0 ? 0
                                   : LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), a.data(),
                                                   static_cast<lapack_int>(n), values.data(), nullptr, 1,
                                                   vectors.data(), static_cast<lapack_int>(n));
    if (info != 0) {
        throw NumericalError("QR iteration did not converge for a " + std::to_string(n) + "x" + std::to_string(n) +
                             " Liouvillian (zgeev info " + std::to_string(info) + ")");
    }

    const auto order = mode_order(values);
    std::shared_ptr<Spectrum> spec(new Spectrum());
    spec->generator_ = std::move(generator);
    spec->eigenvalues_.reserve(static_cast<std::size_t>(n));
    spec->right_.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        spec->eigenvalues_.push_back(values(src));
        Vector col = vectors.col(src);
        col.normalize();
        Index pivot = 0;
        col.cwiseAbs().maxCoeff(&pivot);
        const cplx p = col(pivot);
        if (std::abs(p) > 0.0) col *= std::conj(p) / std::abs(p);
        spec->right_.col(k) = col;
    }

    // Leading zero mode carries the steady state: fix it to unit trace so that
    // alpha_0 = Tr[rho] for every rho.
    if (n > 0 && std::abs(spec->eigenvalues_[0]) < zero_eigenvalue_tolerance) {
        const Matrix r0 = devectorize(spec->right_.col(0));
        const cplx tr = r0.trace();
        if (std::abs(tr) > 1e-8) spec->right_.col(0) /= tr;
    }

    Eigen::PartialPivLU<Matrix> lu(spec->right_);
    spec->left_adjoint_ = lu.inverse();
    spec->condition_ = norm1(spec->right_) * norm1(spec->left_adjoint_);
    if (!std::isfinite(spec->condition_) || spec->condition_ > defective_condition) {
        const auto [a, b] = closest_pair(spec->eigenvalues_);
        throw DefectiveSpectrumError("Liouvillian is numerically defective: eigenvector condition estimate " +
                                         std::to_string(spec->condition_) + " exceeds 1e8; closest eigenvalues " +
                                         format_cplx(a) + " and " + format_cplx(b),
                                     spec->condition_, a, b);
    }
    return spec;
}

Matrix Spectrum::right_mode(Index j) const {
    if (j < 0 || j >= size()) throw InvalidArgument("mode index " + std::to_string(j) + " out of range");
    return devectorize(right_.col(j));
}

Matrix Spectrum::left_mode(Index j) const {
    if (j < 0 || j >= size()) throw InvalidArgument("mode index " + std::to_string(j) + " out of range");
    return devectorize(left_adjoint_.row(j).adjoint());
}

double Spectrum::biorthonormality_residual() const {
    const Matrix gram = left_adjoint_ * right_;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Vector Spectrum::coefficients(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
        throw InvalidArgument("density matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                              " but the spectrum acts on dimension " + std::to_string(dim()));
    }
    return left_adjoint_ * vectorize(rho);
}

Matrix Spectrum::reconstruct(const Vector& coefficients) const {
    if (coefficients.size() != size()) throw InvalidArgument("coefficient vector length mismatch");
    return devectorize(right_ * coefficients);
}

SteadyState steady_state(const Spectrum& spectrum) {
    const auto& values = spectrum.eigenvalues();
    const auto zeros = std::count_if(values.begin(), values.end(),
                                     [](cplx z) { return std::abs(z) < zero_eigenvalue_tolerance; });
    if (zeros != 1) {
        throw NumericalError("steady state is not unique: " + std::to_string(zeros) +
                             " eigenvalues within 1e-10 of zero");
    }
    if (std::abs(values.front()) >= zero_eigenvalue_tolerance) {
        throw NumericalError("zero mode is not the leading mode; spectrum has eigenvalues with positive real part");
    }
    const Matrix r0 = spectrum.right_mode(0);
    const cplx tr = r0.trace();
    if (std::abs(tr) < 1e-10) {
        throw NumericalError("zero mode is traceless (|Tr r0| = " + std::to_string(std::abs(tr)) +
                             "); refusing to normalize");
    }
    Matrix rho = hermitize(r0 / tr);

    if (std::abs(rho.trace() - cplx{1.0}) > 1e-12) throw NumericalError("steady state trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        throw NumericalError("steady state has negative eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()));
    }
    const double residual = spectrum.generator().apply(rho).cwiseAbs().maxCoeff();
    if (residual >= 1e-10) {
        throw NumericalError("steady state residual |L[rho_ss]| = " + std::to_string(residual) + " exceeds 1e-10");
    }
    return {std::move(rho)};
}

Vector decompose(const Matrix& rho0, const Spectrum& spectrum) { return spectrum.coefficients(rho0); }

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "index,re_lambda,im_lambda\n";
    for (Index j = 0; j < spectrum.size(); ++j) {
        const cplx z = spectrum.eigenvalue(j);
        out << j << ',' << detail::format_number(z.real()) << ',' << detail::format_number(z.imag()) << '\n';
    }
}

} // namespace qmpemba
