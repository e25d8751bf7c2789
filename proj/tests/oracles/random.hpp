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

// Seeded generators for property tests. Only mt19937_64 raw output is
// used, so the cases are the same on every standard library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qeval/hilbert_core.hpp"

namespace qeval::testing {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

    /// Uniform integer in [lo, hi].
    int integer(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Complex gaussian() { return {normal(), normal()}; }

  private:
    std::mt19937_64 gen_;
};

inline DenseMatrix random_unitary(Index n, Rng &rng) {
    DenseMatrix z(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            z(i, j) = rng.gaussian();
        }
    }
    const Eigen::HouseholderQR<DenseMatrix> qr(z);
    DenseMatrix q = qr.householderQ();
    for (Index k = 0; k < n; ++k) {
        const Complex d = qr.matrixQR()(k, k);
        q.col(k) *= d / std::abs(d);
    }
    return q;
}

inline DenseMatrix random_hermitian(Index n, Rng &rng) {
    DenseMatrix z(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            z(i, j) = rng.gaussian();
        }
    }
    return 0.5 * (z + z.adjoint());
}

/// Random density operator of the given rank.
inline DenseMatrix random_density(Index n, Index rank, Rng &rng) {
    DenseMatrix g(n, rank);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < rank; ++j) {
            g(i, j) = rng.gaussian();
        }
    }
    DenseMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

/// Random density operator supported on the column span of `basis`.
inline DenseMatrix random_density_on(const DenseMatrix &basis, Rng &rng) {
    const DenseMatrix inner = random_density(basis.cols(), basis.cols(), rng);
    DenseMatrix rho = basis * inner * basis.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

inline DenseMatrix random_projection(Index n, Index rank, Rng &rng) {
    const DenseMatrix u = random_unitary(n, rng);
    const DenseMatrix cols = u.leftCols(rank);
    DenseMatrix p = cols * cols.adjoint();
    return 0.5 * (p + p.adjoint());
}

/// A = f(C), T = g(C) for a random C with integer spectrum labels, and a
/// state either supported where f = g (correlated) or not.
struct PairCase {
    DenseMatrix a;
    DenseMatrix t;
    DenseMatrix rho;
    DenseMatrix c;
    std::vector<double> f;
    std::vector<double> g;
    bool correlated;
};

inline PairCase correlated_pair(Index n, Rng &rng, bool correlated) {
    const int levels = rng.integer(2, static_cast<int>(n));
    std::vector<int> label(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        // Every level occurs at least once.
        label[static_cast<std::size_t>(k)] = k < levels ? static_cast<int>(k)
                                                        : rng.integer(0, levels - 1);
    }
    std::vector<double> f(static_cast<std::size_t>(levels));
    std::vector<double> g(static_cast<std::size_t>(levels));
    std::vector<bool> agree(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) {
        f[l] = static_cast<double>(rng.integer(-3, 3));
        // Level 0 always agrees, level levels-1 never does.
        agree[l] = l == 0 || (l != levels - 1 && rng.uniform() < 0.5);
        g[l] = agree[l] ? f[l] : f[l] + static_cast<double>(rng.integer(1, 3));
    }

    const DenseMatrix u = random_unitary(n, rng);
    DenseMatrix dc = DenseMatrix::Zero(n, n);
    DenseMatrix da = DenseMatrix::Zero(n, n);
    DenseMatrix dt = DenseMatrix::Zero(n, n);
    std::vector<Index> support;
    for (Index k = 0; k < n; ++k) {
        const int l = label[static_cast<std::size_t>(k)];
        dc(k, k) = static_cast<double>(l);
        da(k, k) = f[l];
        dt(k, k) = g[l];
        if (agree[l]) {
            support.push_back(k);
        }
    }
    DenseMatrix basis;
    if (correlated) {
        basis.resize(n, static_cast<Index>(support.size()));
        for (std::size_t s = 0; s < support.size(); ++s) {
            basis.col(static_cast<Index>(s)) = u.col(support[s]);
        }
    } else {
        basis = u;  // full support reaches the level where f != g
    }
    PairCase out;
    out.c = u * dc * u.adjoint();
    out.a = u * da * u.adjoint();
    out.t = u * dt * u.adjoint();
    out.c = 0.5 * (out.c + out.c.adjoint()).eval();
    out.a = 0.5 * (out.a + out.a.adjoint()).eval();
    out.t = 0.5 * (out.t + out.t.adjoint()).eval();
    out.rho = random_density_on(basis, rng);
    out.f = f;
    out.g = g;
    out.correlated = correlated;
    return out;
}

/// A pair that is not perfectly correlated: either non-commuting random
/// Hermitian matrices or a commuting pair whose state reaches a level with
/// f != g.
inline PairCase uncorrelated_pair(Index n, Rng &rng) {
    if (rng.uniform() < 0.5) {
        PairCase out;
        out.a = random_hermitian(n, rng);
        out.t = random_hermitian(n, rng);
        out.rho = random_density(n, static_cast<Index>(rng.integer(1, static_cast<int>(n))), rng);
        out.correlated = false;
        return out;
    }
    return correlated_pair(n, rng, false);
}

/// `count` observables diagonal in one random basis, with small-integer
/// spectra so that joint cells are often degenerate.
inline std::vector<DenseMatrix> commuting_family(Index n, int count, Rng &rng) {
    const DenseMatrix u = random_unitary(n, rng);
    std::vector<DenseMatrix> family;
    for (int i = 0; i < count; ++i) {
        const int top = rng.integer(1, 3);
        DenseMatrix d = DenseMatrix::Zero(n, n);
        for (Index k = 0; k < n; ++k) {
            d(k, k) = static_cast<double>(rng.integer(0, top));
        }
        DenseMatrix m = u * d * u.adjoint();
        family.push_back(0.5 * (m + m.adjoint()));
    }
    return family;
}

/// Projections E = f(C), T = g(C) with 0/1 lookups and rho supported where
/// they agree, plus an orthonormal basis adapted to T that does not, in
/// general, diagonalise E.
struct EvaluatorCase {
    DenseMatrix e;
    DenseMatrix t;
    DenseMatrix rho;
    DenseMatrix t_basis;  ///< columns: eigenvectors of T
};

inline DenseMatrix mix_columns(const DenseMatrix &cols, Rng &rng) {
    if (cols.cols() == 0) {
        return cols;
    }
    return cols * random_unitary(cols.cols(), rng);
}

inline EvaluatorCase evaluator_case(Index n, Rng &rng) {
    // Column k of u gets the pair (e_k, t_k); column 0 agrees and column 1
    // disagrees, so E != T and rho != 0.
    std::vector<int> e(static_cast<std::size_t>(n));
    std::vector<int> t(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        e[k] = rng.integer(0, 1);
        t[k] = k == 1 ? 1 - e[k] : (k == 0 ? e[k] : rng.integer(0, 1));
    }
    const DenseMatrix u = random_unitary(n, rng);
    EvaluatorCase out;
    out.e = DenseMatrix::Zero(n, n);
    out.t = DenseMatrix::Zero(n, n);
    std::vector<Index> agree;
    std::vector<Index> t_on;
    std::vector<Index> t_off;
    for (Index k = 0; k < n; ++k) {
        const DenseMatrix p = u.col(k) * u.col(k).adjoint();
        if (e[k] == 1) {
            out.e += p;
        }
        if (t[k] == 1) {
            out.t += p;
            t_on.push_back(k);
        } else {
            t_off.push_back(k);
        }
        if (e[k] == t[k]) {
            agree.push_back(k);
        }
    }
    auto gather = [&](const std::vector<Index> &idx) {
        DenseMatrix cols(n, static_cast<Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            cols.col(static_cast<Index>(i)) = u.col(idx[i]);
        }
        return cols;
    };
    const DenseMatrix support = gather(agree);
    const DenseMatrix inner =
        random_density(support.cols(), rng.integer(1, static_cast<int>(support.cols())), rng);
    out.rho = support * inner * support.adjoint();
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
    out.e = 0.5 * (out.e + out.e.adjoint()).eval();
    out.t = 0.5 * (out.t + out.t.adjoint()).eval();
    const DenseMatrix on = mix_columns(gather(t_on), rng);
    const DenseMatrix off = mix_columns(gather(t_off), rng);
    out.t_basis.resize(n, n);
    out.t_basis.leftCols(on.cols()) = on;
    out.t_basis.rightCols(off.cols()) = off;
    return out;
}

/// All 2^n sums of rank-one projectors onto columns of `basis`.
inline std::vector<DenseMatrix> projector_lattice(const DenseMatrix &basis) {
    const Index n = basis.cols();
    std::vector<DenseMatrix> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        DenseMatrix p = DenseMatrix::Zero(basis.rows(), basis.rows());
        for (Index k = 0; k < n; ++k) {
            if ((mask >> k) & 1U) {
                p += basis.col(k) * basis.col(k).adjoint();
            }
        }
        out.push_back(0.5 * (p + p.adjoint()));
    }
    return out;
}

} // namespace qeval::testing
