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

// Matrix exponential by scaling and squaring with diagonal Pade approximants.
// Degree selection and the theta_m thresholds follow N. J. Higham, "The
// scaling and squaring method for the matrix exponential revisited",
// SIAM J. Matrix Anal. Appl. 26 (2005).

#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "qmpemba/evolve.hpp"

namespace qmpemba {

namespace {

constexpr std::array<double, 4> small_theta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                               2.097847961257068e0};
constexpr double theta13 = 5.371920351148152e0;

constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                       2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> b13 = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                        1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                        670442572800.0,      33522128640.0,       1323241920.0,
                                        40840800.0,          960960.0,            16380.0,
                                        182.0,               1.0};

double norm1(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff(); }

Matrix solve_pade(const Matrix& u, const Matrix& v) { return (v - u).partialPivLu().solve(v + u); }

// Orders 3..9: U = A sum_{odd k} b_k A^{k-1}, V = sum_{even k} b_k A^k.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix u_inner = b[1] * id;
    Matrix v = b[0] * id;
    Matrix power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        v += b[k] * power;
        if (k + 1 < N) u_inner += b[k + 1] * power;
    }
    return solve_pade(a * u_inner, v);
}

Matrix pade13(const Matrix& a) {
    const auto& b = b13;
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return solve_pade(u, v);
}

} // namespace

int pade_squarings(double norm) {
    if (norm <= theta13) return 0;
    return static_cast<int>(std::ceil(std::log2(norm / theta13)));
}

Matrix expm_pade(const Matrix& a, int max_squarings) {
    if (a.rows() != a.cols()) throw InvalidArgument("matrix exponential of a non-square matrix");
    const double norm = norm1(a);
    if (!std::isfinite(norm)) throw NumericalError("matrix exponential of a matrix with non-finite entries");

    if (norm <= small_theta[0]) return pade_low(a, b3);
    if (norm <= small_theta[1]) return pade_low(a, b5);
    if (norm <= small_theta[2]) return pade_low(a, b7);
    if (norm <= small_theta[3]) return pade_low(a, b9);

    const int s = pade_squarings(norm);
    if (s > max_squarings) {
        throw NumericalError("matrix exponential needs " + std::to_string(s) + " squarings (||A||_1 = " +
                             std::to_string(norm) + "), above the limit of " + std::to_string(max_squarings));
    }
    Matrix x = pade13(a / std::ldexp(1.0, s));
    for (int k = 0; k < s; ++k) x = x * x;
    return x;
}

Matrix expm_pade(const Liouvillian& generator, double t, int max_squarings) {
    if (!std::isfinite(t)) throw InvalidArgument("propagation time must be finite");
    return expm_pade(Matrix(t * generator.matrix()), max_squarings);
}

} // namespace qmpemba
