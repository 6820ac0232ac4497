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

// One-particle lattice models: the hopping Hamiltonian and the jump-operator
// families (on-site dephasing, edge loss, two-site bond dissipation), all as
// dense matrices on a fixed basis.
//
// Sites are numbered 1..L. In the single-particle basis site j sits at row
// j-1. In the vacuum-extended basis row 0 is the empty lattice and site j
// sits at row j.

#ifndef QMPEMBA_MODEL_HPP
#define QMPEMBA_MODEL_HPP

#include <utility>
#include <variant>
#include <vector>

#include "qmpemba/types.hpp"

namespace qmpemba {

enum class Boundary { open, periodic };

struct LatticeSpec {
    int sites = 2;
    double hopping = 1.0;
    Boundary bc = Boundary::open;

    void validate() const;
};

enum class SectorKind { single_particle, vacuum_extended };

struct BasisSpec {
    SectorKind kind = SectorKind::single_particle;
    int sites = 2;

    static constexpr Index vacuum_index = 0;

    static BasisSpec for_lattice(const LatticeSpec& spec, SectorKind kind) { return {kind, spec.sites}; }

    Index dim() const { return kind == SectorKind::vacuum_extended ? sites + 1 : sites; }
    bool has_vacuum() const { return kind == SectorKind::vacuum_extended; }
    /// Row of site j (1-based).
    Index site_index(int site) const;
};

struct Dephasing {
    double rate = 0.0;
};

struct BoundaryLoss {
    double first_rate = 0.0;
    double last_rate = 0.0;
};

/// Bond dissipation sqrt(rate) (c_j^+ + phase c_{j+range}^+)(c_j - phase c_{j+range}).
/// `range` is the same parameter written p or q in the literature.
struct Bond {
    double rate = 0.0;
    int phase = 1;
    int range = 1;
};

using DissipationChannel = std::variant<Dephasing, BoundaryLoss, Bond>;

/// Smallest basis that holds every channel: loss channels need the vacuum.
SectorKind sector_for(const std::vector<DissipationChannel>& channels);

Matrix build_hamiltonian(const LatticeSpec& spec, const BasisSpec& basis);
std::vector<Matrix> build_dephasing(const LatticeSpec& spec, const BasisSpec& basis, double rate);
std::vector<Matrix> build_boundary_loss(const LatticeSpec& spec, const BasisSpec& basis, double first_rate,
                                        double last_rate);
std::vector<Matrix> build_bond(const LatticeSpec& spec, const BasisSpec& basis, double rate, int phase, int range);

/// Dispatches on the channel variant and appends to `out`.
void append_channel(const LatticeSpec& spec, const BasisSpec& basis, const DissipationChannel& channel,
                    std::vector<Matrix>& out);

/// N|j> = |j>, N|vac> = 0.
Matrix number_operator(const BasisSpec& basis);

/// Diagonal density matrix sum_k w_k |site_k><site_k|.
/// Weights must be nonnegative and sum to 1 within 1e-12.
Matrix site_mixture(const BasisSpec& basis, const std::vector<std::pair<int, double>>& weights);

/// Plane wave e^{ikj}/sqrt(L) placed on the one-particle rows of `basis`.
Vector plane_wave(const BasisSpec& basis, double momentum);

} // namespace qmpemba

#endif
