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

#ifndef QMPEMBA_TYPES_HPP
#define QMPEMBA_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmpemba {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument to a constructor or operation (dimensions, rates, ranges).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Experiment configuration failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Eigenvector matrix too ill-conditioned to treat the generator as diagonalizable.
class DefectiveSpectrumError : public NumericalError {
public:
    DefectiveSpectrumError(const std::string& what, double condition, cplx closest_a, cplx closest_b)
        : NumericalError(what), condition_(condition), closest_a_(closest_a), closest_b_(closest_b) {}

    double condition() const { return condition_; }
    cplx closest_a() const { return closest_a_; }
    cplx closest_b() const { return closest_b_; }

private:
    double condition_;
    cplx closest_a_;
    cplx closest_b_;
};

/// Max elementwise |A - A^dagger|.
inline double hermiticity_defect(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

} // namespace qmpemba

#endif
