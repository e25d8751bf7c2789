// Copyright 2026 The qeval Authors
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

#pragma once

/**
 * @file
 * N distinguishable particles on a 1-D periodic lattice of L sites, with
 * configuration (x_0, .., x_{N-1}) stored at index sum_j x_j L^(N-1-j).
 *
 * A configuration is rigid when it is a non-wrapping chain
 * (s, s+1, .., s+N-1) with 0 <= s <= L-N. The Hamiltonian keeps the rigid
 * sector invariant:
 *
 *   H = P H_free P + (1 - P) H_mobile (1 - P)
 *
 * where H_free = sum_j -(1/2 mu) Laplacian_j and H_mobile is the same
 * operator with hopping restricted to the mobile particle group. On the
 * rigid sector H is diagonal, so every velocity i[H, Q_j] annihilates a
 * rigid state.
 */

#include <span>
#include <vector>

#include "qeval/hilbert_core.hpp"

namespace qeval {

enum class Profile {
    gaussian,  ///< exp(-(c - c0)^2 / (2 sigma^2)), sigma = L / 4 sites
    uniform,
};

struct LatticeConfig {
    Index sites = 8;
    double spacing = 1.0;
    Index particles = 4;
    double mass = 1.0;
    Profile profile = Profile::gaussian;
};

struct RigidChain {
    LatticeConfig cfg;
    Index dim;
    /// Q_j, diagonal with entries spacing * x_j.
    std::vector<Matrix> position;
    Matrix hamiltonian;
    /// Normalised superposition of rigid configurations.
    Vector psi;
    /// Indices of the rigid configurations, in increasing start site.
    std::vector<Index> rigid;

    /// sum_{j in group} Q_j / |group|.
    [[nodiscard]] Matrix group_position(std::span<const Index> group) const;
    /// i[H, X].
    [[nodiscard]] Matrix velocity_of(const Matrix &x) const;
};

/// Throws InvalidArgument for sites < particles, particles < 2, a
/// non-positive spacing or mass, a mobile index out of range, or
/// dimension L^N above max_dim.
RigidChain build_rigid_chain(const LatticeConfig &cfg, std::span<const Index> mobile,
                             Index max_dim);

Index configuration_index(std::span<const Index> sites, Index lattice_sites);
std::vector<Index> configuration_sites(Index index, Index lattice_sites, Index particles);

} // namespace qeval
