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

#include "qmpemba/model.hpp"

#include <cmath>
#include <string>

namespace qmpemba {

namespace {

void check_basis(const LatticeSpec& spec, const BasisSpec& basis) {
    spec.validate();
    if (basis.sites != spec.sites) {
        throw InvalidArgument("basis holds " + std::to_string(basis.sites) + " sites but lattice has " +
                              std::to_string(spec.sites));
    }
}

void check_rate(double rate, const char* name) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw InvalidArgument(std::string(name) + " must be a finite rate >= 0, got " + std::to_string(rate));
    }
}

// Wraps a 1-based site index onto 1..L.
int wrap_site(int site, int sites) { return ((site - 1) % sites + sites) % sites + 1; }

} // namespace

void LatticeSpec::validate() const {
    if (sites < 2) throw InvalidArgument("lattice needs L >= 2 sites, got " + std::to_string(sites));
    if (!std::isfinite(hopping)) throw InvalidArgument("hopping amplitude J must be finite");
}

Index BasisSpec::site_index(int site) const {
    if (site < 1 || site > sites) {
        throw InvalidArgument("site " + std::to_string(site) + " outside 1.." + std::to_string(sites));
    }
    return has_vacuum() ? site : site - 1;
}

SectorKind sector_for(const std::vector<DissipationChannel>& channels) {
    for (const auto& ch : channels) {
        if (std::holds_alternative<BoundaryLoss>(ch)) return SectorKind::vacuum_extended;
    }
    return SectorKind::single_particle;
}

Matrix build_hamiltonian(const LatticeSpec& spec, const BasisSpec& basis) {
    check_basis(spec, basis);
    const Index d = basis.dim();
    Matrix h = Matrix::Zero(d, d);
    const int bonds = spec.bc == Boundary::open ? spec.sites - 1 : spec.sites;
    for (int j = 1; j <= bonds; ++j) {
        const Index a = basis.site_index(j);
        const Index b = basis.site_index(wrap_site(j + 1, spec.sites));
        h(a, b) += spec.hopping;
        h(b, a) += spec.hopping;
    }
    return h;
}

std::vector<Matrix> build_dephasing(const LatticeSpec& spec, const BasisSpec& basis, double rate) {
    check_basis(spec, basis);
    check_rate(rate, "dephasing rate");
    const Index d = basis.dim();
    const double amp = std::sqrt(rate);
    std::vector<Matrix> ops;
    ops.reserve(spec.sites);
    for (int j = 1; j <= spec.sites; ++j) {
        Matrix o = Matrix::Zero(d, d);
        const Index k = basis.site_index(j);
        o(k, k) = amp;
        ops.push_back(std::move(o));
    }
    return ops;
}

std::vector<Matrix> build_boundary_loss(const LatticeSpec& spec, const BasisSpec& basis, double first_rate,
                                        double last_rate) {
    check_basis(spec, basis);
    if (!basis.has_vacuum()) {
        throw InvalidArgument("boundary loss leaves the one-particle sector; use the vacuum-extended basis");
    }
    check_rate(first_rate, "boundary loss rate at site 1");
    check_rate(last_rate, "boundary loss rate at site L");
    const Index d = basis.dim();
    Matrix first = Matrix::Zero(d, d);
    Matrix last = Matrix::Zero(d, d);
    first(BasisSpec::vacuum_index, basis.site_index(1)) = std::sqrt(first_rate);
    last(BasisSpec::vacuum_index, basis.site_index(spec.sites)) = std::sqrt(last_rate);
    return {std::move(first), std::move(last)};
}

std::vector<Matrix> build_bond(const LatticeSpec& spec, const BasisSpec& basis, double rate, int phase, int range) {
    check_basis(spec, basis);
    check_rate(rate, "bond rate");
    if (phase != 1 && phase != -1) {
        throw InvalidArgument("bond phase a must be +1 or -1, got " + std::to_string(phase));
    }
    if (range < 1) throw InvalidArgument("bond range q must be >= 1, got " + std::to_string(range));
    if (spec.bc == Boundary::open && range >= spec.sites) {
        throw InvalidArgument("bond range q=" + std::to_string(range) + " needs q < L=" + std::to_string(spec.sites) +
                              " under open boundaries");
    }
    if (spec.bc == Boundary::periodic && range % spec.sites == 0) {
        throw InvalidArgument("bond range q=" + std::to_string(range) + " maps every site onto itself on a ring of L=" +
                              std::to_string(spec.sites));
    }

    const Index d = basis.dim();
    const double amp = std::sqrt(rate);
    const double a = phase;
    const int count = spec.bc == Boundary::open ? spec.sites - range : spec.sites;
    std::vector<Matrix> ops;
    ops.reserve(count);
    for (int j = 1; j <= count; ++j) {
        const Index u = basis.site_index(j);
        const Index v = basis.site_index(wrap_site(j + range, spec.sites));
        Vector ket = Vector::Zero(d);
        Vector bra = Vector::Zero(d);
        ket(u) += 1.0;
        ket(v) += a;
        bra(u) += 1.0;
        bra(v) -= a;
        ops.push_back(amp * ket * bra.transpose());
    }
    return ops;
}

void append_channel(const LatticeSpec& spec, const BasisSpec& basis, const DissipationChannel& channel,
                    std::vector<Matrix>& out) {
    std::vector<Matrix> ops = std::visit(
        [&](const auto& ch) -> std::vector<Matrix> {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, Dephasing>) {
                return build_dephasing(spec, basis, ch.rate);
            } else if constexpr (std::is_same_v<T, BoundaryLoss>) {
                return build_boundary_loss(spec, basis, ch.first_rate, ch.last_rate);
            } else {
                return build_bond(spec, basis, ch.rate, ch.phase, ch.range);
            }
        },
        channel);
    for (auto& op : ops) out.push_back(std::move(op));
}

Matrix number_operator(const BasisSpec& basis) {
    Matrix n = Matrix::Zero(basis.dim(), basis.dim());
    for (int j = 1; j <= basis.sites; ++j) {
        const Index k = basis.site_index(j);
        n(k, k) = 1.0;
    }
    return n;
}

Matrix site_mixture(const BasisSpec& basis, const std::vector<std::pair<int, double>>& weights) {
    if (weights.empty()) throw InvalidArgument("initial mixture has no sites");
    Matrix rho = Matrix::Zero(basis.dim(), basis.dim());
    double total = 0.0;
    for (const auto& [site, w] : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("mixture weight for site " + std::to_string(site) + " must be >= 0");
        }
        const Index k = basis.site_index(site);
        rho(k, k) += w;
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidArgument("mixture weights sum to " + std::to_string(total) + ", expected 1");
    }
    return rho;
}

Vector plane_wave(const BasisSpec& basis, double momentum) {
    Vector v = Vector::Zero(basis.dim());
    const double norm = 1.0 / std::sqrt(static_cast<double>(basis.sites));
    for (int j = 1; j <= basis.sites; ++j) {
        v(basis.site_index(j)) = std::polar(norm, momentum * j);
    }
    return v;
}

} // namespace qmpemba
