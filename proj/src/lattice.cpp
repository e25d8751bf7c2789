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

#include "qeval/lattice.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace qeval {

Index configuration_index(std::span<const Index> sites, Index lattice_sites) {
    Index idx = 0;
    for (Index x : sites) {
        idx = idx * lattice_sites + x;
    }
    return idx;
}

std::vector<Index> configuration_sites(Index index, Index lattice_sites, Index particles) {
    std::vector<Index> out(static_cast<std::size_t>(particles));
    for (Index j = particles - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = index % lattice_sites;
        index /= lattice_sites;
    }
    return out;
}

Matrix RigidChain::group_position(std::span<const Index> group) const {
    if (group.empty()) {
        throw InvalidArgument("group_position: empty particle group");
    }
    Matrix out = zero_matrix(dim);
    for (Index j : group) {
        if (j < 0 || j >= cfg.particles) {
            throw InvalidArgument("group_position: particle index out of range");
        }
        out += position[static_cast<std::size_t>(j)];
    }
    out *= Complex(1.0 / static_cast<double>(group.size()));
    return out;
}

Matrix RigidChain::velocity_of(const Matrix &x) const {
    Matrix v = commutator(hamiltonian, x) * Complex(0.0, 1.0);
    v.prune(Complex(0.0));
    return v;
}

RigidChain build_rigid_chain(const LatticeConfig &cfg, std::span<const Index> mobile,
                             Index max_dim) {
    const Index n = cfg.particles;
    const Index l = cfg.sites;
    if (n < 2) {
        throw InvalidArgument("rigid chain: at least 2 particles required");
    }
    if (l < n) {
        std::ostringstream os;
        os << "rigid chain: " << l << " sites cannot hold a chain of " << n << " particles";
        throw InvalidArgument(os.str());
    }
    if (!(cfg.spacing > 0.0) || !(cfg.mass > 0.0)) {
        throw InvalidArgument("rigid chain: spacing and mass must be positive");
    }
    for (Index j : mobile) {
        if (j < 0 || j >= n) {
            throw InvalidArgument("rigid chain: mobile particle index out of range");
        }
    }
    const double dim_real = std::pow(static_cast<double>(l), static_cast<double>(n));
    if (dim_real > static_cast<double>(max_dim)) {
        std::ostringstream os;
        os << "rigid chain: dimension " << l << "^" << n << " exceeds the cap " << max_dim;
        throw InvalidArgument(os.str());
    }
    const auto dim = static_cast<Index>(std::llround(dim_real));

    RigidChain chain{cfg, dim, {}, Matrix(dim, dim), Vector::Zero(dim), {}};

    std::vector<Index> sites(static_cast<std::size_t>(n));
    for (Index s = 0; s + n <= l; ++s) {
        for (Index j = 0; j < n; ++j) {
            sites[static_cast<std::size_t>(j)] = s + j;
        }
        chain.rigid.push_back(configuration_index(sites, l));
    }
    const std::unordered_set<Index> rigid_set(chain.rigid.begin(), chain.rigid.end());

    std::vector<Index> stride(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        stride[static_cast<std::size_t>(j)] = static_cast<Index>(
            std::llround(std::pow(static_cast<double>(l), static_cast<double>(n - 1 - j))));
    }

    for (Index j = 0; j < n; ++j) {
        const Index st = stride[static_cast<std::size_t>(j)];
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(static_cast<std::size_t>(dim));
        for (Index a = 0; a < dim; ++a) {
            const Index x = (a / st) % l;
            if (x != 0) {
                trips.emplace_back(a, a, Complex(cfg.spacing * static_cast<double>(x)));
            }
        }
        Matrix q(dim, dim);
        q.setFromTriplets(trips.begin(), trips.end());
        chain.position.push_back(std::move(q));
    }

    // -(1/2 mu) (psi(x+1) + psi(x-1) - 2 psi(x)) / a^2 per particle.
    const double hop = -1.0 / (2.0 * cfg.mass * cfg.spacing * cfg.spacing);
    const double onsite = -2.0 * hop * static_cast<double>(n);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(dim) * (1 + 2 * mobile.size()));
    for (Index a = 0; a < dim; ++a) {
        trips.emplace_back(a, a, Complex(onsite));
        if (rigid_set.count(a) != 0) {
            continue;
        }
        for (Index j : mobile) {
            const Index st = stride[static_cast<std::size_t>(j)];
            const Index x = (a / st) % l;
            for (Index step : {Index{1}, l - 1}) {
                const Index b = a + (((x + step) % l) - x) * st;
                if (rigid_set.count(b) == 0) {
                    trips.emplace_back(a, b, Complex(hop));
                }
            }
        }
    }
    chain.hamiltonian.setFromTriplets(trips.begin(), trips.end());
    chain.hamiltonian.makeCompressed();

    const double centre0 = 0.5 * static_cast<double>(l - 1);
    const double sigma = static_cast<double>(l) / 4.0;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < chain.rigid.size(); ++k) {
        const double centre = static_cast<double>(k) + 0.5 * static_cast<double>(n - 1);
        double w = 1.0;
        if (cfg.profile == Profile::gaussian) {
            const double d = centre - centre0;
            w = std::exp(-d * d / (2.0 * sigma * sigma));
        }
        chain.psi(chain.rigid[k]) = w;
        norm2 += w * w;
    }
    chain.psi /= std::sqrt(norm2);
    return chain;
}

} // namespace qeval
