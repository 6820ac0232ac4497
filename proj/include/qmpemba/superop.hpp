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

// Liouville-space representation of the Lindblad generator.
//
// Density matrices are column-stacked: vec(X)[i + D*j] = X(i, j), so that
// vec(A X B) = (B^T kron A) vec(X). Every superoperator in the library is
// written in this convention.

#ifndef QMPEMBA_SUPEROP_HPP
#define QMPEMBA_SUPEROP_HPP

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "qmpemba/types.hpp"

namespace qmpemba {

Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v);

/// Which generator of a quench protocol a Liouvillian plays.
enum class GeneratorTag { unquenched, quenched, custom };

const char* to_string(GeneratorTag tag);

class Liouvillian {
public:
    /// -i[H, .] + sum_k (O_k . O_k^+ - 1/2 {O_k^+ O_k, .}) as a D^2 x D^2 matrix.
    static Liouvillian assemble(const Matrix& hamiltonian, std::span<const Matrix> jumps,
                                GeneratorTag tag = GeneratorTag::custom);

    Index dim() const { return dim_; }
    const Matrix& matrix() const { return matrix_; }
    GeneratorTag tag() const { return tag_; }

    /// L[rho] through the superoperator matrix.
    Matrix apply(const Matrix& rho) const;

    /// max |vec(I)^dagger L|, zero for a trace-preserving generator.
    double trace_residual() const;

private:
    Liouvillian(Index dim, Matrix matrix, GeneratorTag tag) : dim_(dim), matrix_(std::move(matrix)), tag_(tag) {}

    Index dim_;
    Matrix matrix_;
    GeneratorTag tag_;
};

/// Full biorthogonal eigendecomposition of a Liouvillian.
///
/// Modes are sorted by descending Re(lambda). A run of modes whose real parts
/// lie within 1e-9 of the run's first member counts as tied and is ordered by
/// ascending |Im|, then ascending Im. Right modes
/// have unit Frobenius norm except the leading zero mode, which is scaled to
/// unit trace. Left modes are the rows of R^{-1}, so Tr[l_i^+ r_j] = delta_ij
/// holds even inside degenerate eigenspaces.
///
/// Immutable after construction; share it through shared_ptr<const Spectrum>.
class Spectrum {
public:
    /// Condition estimate of R above which the generator is treated as defective.
    static constexpr double defective_condition = 1e8;

    /// Throws DefectiveSpectrumError or NumericalError.
    static std::shared_ptr<const Spectrum> compute(std::shared_ptr<const Liouvillian> generator);

    Index size() const { return static_cast<Index>(eigenvalues_.size()); }
    Index dim() const { return generator_->dim(); }
    const std::vector<cplx>& eigenvalues() const { return eigenvalues_; }
    cplx eigenvalue(Index j) const { return eigenvalues_.at(static_cast<std::size_t>(j)); }

    Matrix right_mode(Index j) const;
    Matrix left_mode(Index j) const;

    /// Columns are vec(r_j).
    const Matrix& right_vectors() const { return right_; }
    /// Rows are vec(l_j)^dagger; equal to right_vectors()^{-1}.
    const Matrix& left_adjoint() const { return left_adjoint_; }

    /// ||R||_1 ||R^{-1}||_1.
    double condition_estimate() const { return condition_; }
    /// max_{ij} |Tr[l_i^+ r_j] - delta_ij|.
    double biorthonormality_residual() const;

    const Liouvillian& generator() const { return *generator_; }
    const std::shared_ptr<const Liouvillian>& generator_ptr() const { return generator_; }

    /// alpha_j = Tr[l_j^+ rho] for every mode.
    Vector coefficients(const Matrix& rho) const;
    /// sum_j c_j r_j.
    Matrix reconstruct(const Vector& coefficients) const;

private:
    Spectrum() = default;

    std::shared_ptr<const Liouvillian> generator_;
    std::vector<cplx> eigenvalues_;
    Matrix right_;
    Matrix left_adjoint_;
    double condition_ = 0.0;
};

struct SteadyState {
    Matrix rho;
};

/// Zero mode rescaled to unit trace and Hermitized. Throws NumericalError when the
/// zero eigenvalue is not unique or its mode is traceless.
SteadyState steady_state(const Spectrum& spectrum);

/// Modal coefficients alpha_j = Tr[l_j^+ rho0].
Vector decompose(const Matrix& rho0, const Spectrum& spectrum);

/// CSV with header `index,re_lambda,im_lambda`, in spectrum order.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

} // namespace qmpemba

#endif
