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

#include <cmath>
#include <sstream>
#include <vector>

#include "qeval/evaluation.hpp"

namespace qeval {

namespace {

/// Real basis of the n x n Hermitian matrices: E_ii, E_ij + E_ji and
/// i(E_ij - E_ji) for i < j.
std::vector<DenseMatrix> hermitian_basis(Index n) {
    std::vector<DenseMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n * n));
    for (Index i = 0; i < n; ++i) {
        DenseMatrix b = DenseMatrix::Zero(n, n);
        b(i, i) = 1.0;
        basis.push_back(std::move(b));
    }
    const Complex iu(0.0, 1.0);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            DenseMatrix re = DenseMatrix::Zero(n, n);
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            basis.push_back(std::move(re));
            DenseMatrix im = DenseMatrix::Zero(n, n);
            im(i, j) = iu;
            im(j, i) = -iu;
            basis.push_back(std::move(im));
        }
    }
    return basis;
}

/// Writes the real and imaginary parts of m into rows [row, row + 2 n^2).
void put_rows(Eigen::MatrixXd &sys, Index row, Index col, const DenseMatrix &m) {
    const Index n2 = m.size();
    for (Index k = 0; k < n2; ++k) {
        sys(row + k, col) = m(k).real();
        sys(row + n2 + k, col) = m(k).imag();
    }
}

} // namespace

SynthesisResult synthesize_evaluator(const Observable &a,
                                     const DensityOperator &rho,
                                     std::span<const Observable> must_commute_with,
                                     double tol) {
    const Index n = a.dim();
    if (rho.dim() != n) {
        throw DimensionMismatch("synthesize_evaluator: state and target differ in dimension");
    }
    for (const Observable &c : must_commute_with) {
        if (c.dim() != n) {
            throw DimensionMismatch("synthesize_evaluator: constraint '" + c.label() +
                                    "' has a different dimension");
        }
    }
    if (n > kMaxSynthesisDim) {
        std::ostringstream os;
        os << "synthesize_evaluator: dimension " << n << " exceeds " << kMaxSynthesisDim;
        throw InvalidArgument(os.str());
    }

    const DenseMatrix da = to_dense(a.matrix());
    const DenseMatrix dr = to_dense(rho.matrix());
    std::vector<DenseMatrix> constraints;
    constraints.reserve(must_commute_with.size());
    for (const Observable &c : must_commute_with) {
        constraints.push_back(to_dense(c.matrix()));
    }

    // Blocks: [T,A], [T,C_1..m], T rho; each block holds 2 n^2 real rows.
    const Index n2 = n * n;
    const Index blocks = 2 + static_cast<Index>(constraints.size());
    const std::vector<DenseMatrix> basis = hermitian_basis(n);
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * n2 * blocks, n2);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n2 * blocks);

    for (Index k = 0; k < n2; ++k) {
        const DenseMatrix &b = basis[static_cast<std::size_t>(k)];
        put_rows(sys, 0, k, b * da - da * b);
        for (std::size_t c = 0; c < constraints.size(); ++c) {
            const DenseMatrix &cm = constraints[c];
            put_rows(sys, 2 * n2 * static_cast<Index>(c + 1), k, b * cm - cm * b);
        }
        put_rows(sys, 2 * n2 * (blocks - 1), k, b * dr);
    }
    const DenseMatrix target = da * dr;
    for (Index k = 0; k < n2; ++k) {
        rhs(2 * n2 * (blocks - 1) + k) = target(k).real();
        rhs(2 * n2 * (blocks - 1) + n2 + k) = target(k).imag();
    }

    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys);
    const Eigen::VectorXd coeff = cod.solve(rhs);
    const double residual = (sys * coeff - rhs).norm();

    DenseMatrix t = DenseMatrix::Zero(n, n);
    for (Index k = 0; k < n2; ++k) {
        t += coeff(k) * basis[static_cast<std::size_t>(k)];
    }
    t = 0.5 * (t + t.adjoint()).eval();

    Observable evaluator("T[" + a.label() + "]", t);
    const bool feasible = std::isfinite(residual) && residual <= tol &&
                          check_perfect_correlation(a, evaluator, rho, tol).holds;
    return SynthesisResult{feasible, std::move(evaluator), residual};
}

} // namespace qeval
