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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "qeval/hilbert_core.hpp"

namespace qeval {

namespace {

/// Union-find over matrix indices; two indices join when a nonzero entry
/// couples them.
class Components {
  public:
    explicit Components(Index n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }

    Index find(Index i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void join(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

  private:
    std::vector<Index> parent_;
};

struct EigenPair {
    double value;
    std::size_t block;
    Index column;
};

} // namespace

SpectralDecomposition::SpectralDecomposition(std::vector<SpectralCluster> clusters,
                                             Index dim, double cluster_tolerance)
    : clusters_(std::move(clusters)), dim_(dim), tol_(cluster_tolerance) {}

std::vector<double> SpectralDecomposition::eigenvalues() const {
    std::vector<double> out;
    out.reserve(clusters_.size());
    for (const auto &c : clusters_) {
        out.push_back(c.eigenvalue);
    }
    return out;
}

Projection SpectralDecomposition::projector(std::size_t k) const {
    const Matrix &b = clusters_.at(k).basis;
    Matrix p = b * Matrix(b.adjoint());
    p.makeCompressed();
    std::ostringstream label;
    label << "P[" << clusters_[k].eigenvalue << "]";
    // Orthonormal columns give an exact projector up to rounding; the check
    // is loose enough for dense blocks of a few thousand.
    return Projection(label.str(), std::move(p), 1e-8);
}

std::vector<Projection> SpectralDecomposition::projectors() const {
    std::vector<Projection> out;
    out.reserve(clusters_.size());
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
        out.push_back(projector(k));
    }
    return out;
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix out = zero_matrix(dim_);
    for (const auto &c : clusters_) {
        out += c.basis * Matrix(c.basis.adjoint()) * Complex(c.eigenvalue);
    }
    return out;
}

SpectralDecomposition decompose_hermitian(const Matrix &m, double cluster_tol) {
    const Index n = m.rows();
    if (n != m.cols() || n < 1) {
        throw DimensionMismatch("decompose_hermitian: expected a square matrix");
    }

    Components comps(n);
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (Matrix::InnerIterator it(m, k); it; ++it) {
            if (it.value() != Complex(0.0) && it.row() != it.col()) {
                comps.join(it.row(), it.col());
            }
        }
    }

    // Group indices by root, in increasing order of the smallest member.
    std::vector<Index> root_of(static_cast<std::size_t>(n));
    std::vector<std::size_t> block_of_root(static_cast<std::size_t>(n), SIZE_MAX);
    std::vector<std::vector<Index>> blocks;
    for (Index i = 0; i < n; ++i) {
        const Index r = comps.find(i);
        if (block_of_root[r] == SIZE_MAX) {
            block_of_root[r] = blocks.size();
            blocks.emplace_back();
        }
        blocks[block_of_root[r]].push_back(i);
        root_of[i] = r;
    }

    std::vector<Index> local(static_cast<std::size_t>(n));
    for (const auto &blk : blocks) {
        for (std::size_t p = 0; p < blk.size(); ++p) {
            local[blk[p]] = static_cast<Index>(p);
        }
    }

    std::vector<DenseMatrix> vectors(blocks.size());
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto &blk = blocks[b];
        const auto size = static_cast<Index>(blk.size());
        if (size > kMaxDenseBlock) {
            std::ostringstream os;
            os << "decompose_hermitian: connected block of size " << size
               << " exceeds the dense limit " << kMaxDenseBlock;
            throw EigensolverFailure(os.str());
        }
        DenseMatrix dense = DenseMatrix::Zero(size, size);
        for (Index c : blk) {
            for (Matrix::InnerIterator it(m, c); it; ++it) {
                dense(local[it.row()], local[c]) = it.value();
            }
        }
        if (size == 1) {
            vectors[b] = DenseMatrix::Identity(1, 1);
            pairs.push_back({dense(0, 0).real(), b, 0});
            continue;
        }
        // Symmetrise so the solver sees an exactly Hermitian input.
        const DenseMatrix herm = 0.5 * (dense + dense.adjoint());
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm);
        if (solver.info() != Eigen::Success) {
            throw EigensolverFailure("decompose_hermitian: eigensolver did not converge");
        }
        vectors[b] = solver.eigenvectors();
        for (Index j = 0; j < size; ++j) {
            pairs.push_back({solver.eigenvalues()(j), b, j});
        }
    }

    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair &x, const EigenPair &y) {
                         return x.value < y.value;
                     });

    std::vector<SpectralCluster> clusters;
    std::size_t start = 0;
    while (start < pairs.size()) {
        std::size_t end = start + 1;
        while (end < pairs.size() &&
               pairs[end].value - pairs[end - 1].value <= cluster_tol) {
            ++end;
        }
        double sum = 0.0;
        std::vector<Eigen::Triplet<Complex>> trips;
        for (std::size_t k = start; k < end; ++k) {
            const EigenPair &p = pairs[k];
            sum += p.value;
            const auto &blk = blocks[p.block];
            const DenseMatrix &vec = vectors[p.block];
            const auto col = static_cast<Index>(k - start);
            for (std::size_t r = 0; r < blk.size(); ++r) {
                const Complex v = vec(static_cast<Index>(r), p.column);
                if (v != Complex(0.0)) {
                    trips.emplace_back(blk[r], col, v);
                }
            }
        }
        Matrix basis(n, static_cast<Index>(end - start));
        basis.setFromTriplets(trips.begin(), trips.end());
        basis.makeCompressed();
        clusters.push_back({sum / static_cast<double>(end - start), std::move(basis)});
        start = end;
    }
    return SpectralDecomposition(std::move(clusters), n, cluster_tol);
}

SpectralDecomposition spectral_decompose(const Observable &a, double cluster_tol) {
    return decompose_hermitian(a.matrix(), cluster_tol);
}

std::vector<JointCell> simultaneous_decompose(std::span<const Observable> family,
                                              double cluster_tol) {
    if (family.empty()) {
        throw InvalidArgument("simultaneous_decompose: empty family");
    }
    const Index dim = family.front().dim();
    for (const auto &obs : family) {
        if (obs.dim() != dim) {
            throw DimensionMismatch("simultaneous_decompose: '" + obs.label() +
                                    "' has a different dimension");
        }
    }

    std::vector<JointCell> cells;
    const SpectralDecomposition first = spectral_decompose(family.front(), cluster_tol);
    for (const auto &cluster : first.clusters()) {
        cells.push_back({{cluster.eigenvalue}, cluster.basis});
    }

    for (std::size_t o = 1; o < family.size(); ++o) {
        const Matrix &op = family[o].matrix();
        std::vector<JointCell> refined;
        for (const auto &cell : cells) {
            Matrix restricted = Matrix(cell.basis.adjoint()) * op * cell.basis;
            // Rounding noise would otherwise couple blocks that are exactly
            // decoupled and defeat the component split.
            double scale = 0.0;
            for (Index k = 0; k < restricted.outerSize(); ++k) {
                for (Matrix::InnerIterator it(restricted, k); it; ++it) {
                    scale = std::max(scale, std::abs(it.value()));
                }
            }
            const double floor = 1e-14 * std::max(1.0, scale);
            restricted.prune([floor](Index, Index, const Complex &v) {
                return std::abs(v) > floor;
            });
            const SpectralDecomposition sd = decompose_hermitian(restricted, cluster_tol);
            for (const auto &sub : sd.clusters()) {
                JointCell next{cell.values, cell.basis * sub.basis};
                next.values.push_back(sub.eigenvalue);
                next.basis.makeCompressed();
                refined.push_back(std::move(next));
            }
        }
        cells = std::move(refined);
    }
    return cells;
}

} // namespace qeval
