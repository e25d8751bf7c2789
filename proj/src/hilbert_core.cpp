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

#include "qeval/hilbert_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

namespace qeval {

namespace {

void require_square(const Matrix &m, const std::string &what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows()
           << "x" << m.cols();
        throw DimensionMismatch(os.str());
    }
}

void require_same_dim(Index a, Index b, const char *op) {
    if (a != b) {
        std::ostringstream os;
        os << op << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionMismatch(os.str());
    }
}

double idempotency_defect(const Matrix &m) {
    const Matrix sq = m * m;
    return frobenius(sq - m) / std::max(1.0, frobenius(m));
}

} // namespace

Matrix identity_matrix(Index dim) {
    Matrix id(dim, dim);
    id.setIdentity();
    return id;
}

Matrix zero_matrix(Index dim) { return Matrix(dim, dim); }

Matrix to_sparse(const DenseMatrix &m) {
    Matrix s = m.sparseView();
    s.makeCompressed();
    return s;
}

DenseMatrix to_dense(const Matrix &m) { return DenseMatrix(m); }

double frobenius(const Matrix &m) { return m.norm(); }

Complex trace(const Matrix &m) {
    Complex t{0.0, 0.0};
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (Matrix::InnerIterator it(m, k); it; ++it) {
            if (it.row() == it.col()) {
                t += it.value();
            }
        }
    }
    return t;
}

Complex trace_product(const Matrix &a, const Matrix &b) {
    // Tr(AB) = sum_ij A_ij B_ji
    const Matrix bt = b.transpose();
    return a.cwiseProduct(bt).sum();
}

double hermiticity_defect(const Matrix &m) {
    const Matrix adj = m.adjoint();
    return frobenius(m - adj) / std::max(1.0, frobenius(m));
}

Matrix outer(const Vector &v) {
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) {
        throw InvalidArgument("outer: zero vector");
    }
    const Vector u = v / std::sqrt(n2);
    std::vector<Index> nz;
    for (Index k = 0; k < u.size(); ++k) {
        if (u(k) != Complex(0.0, 0.0)) {
            nz.push_back(k);
        }
    }
    Matrix p(u.size(), u.size());
    Eigen::VectorXi per_column = Eigen::VectorXi::Zero(u.size());
    for (Index c : nz) {
        per_column(c) = static_cast<int>(nz.size());
    }
    p.reserve(per_column);
    for (Index c : nz) {
        const Complex conj_c = std::conj(u(c));
        for (Index r : nz) {
            p.insert(r, c) = u(r) * conj_c;
        }
    }
    p.makeCompressed();
    return p;
}

// ---------------------------------------------------------------------------

Observable::Observable(std::string label, Matrix matrix, double herm_tol)
    : label_(std::move(label)), matrix_(std::move(matrix)) {
    require_square(matrix_, "observable '" + label_ + "'");
    const double defect = hermiticity_defect(matrix_);
    if (!(defect <= herm_tol)) {
        std::ostringstream os;
        os << "observable '" << label_ << "' is not Hermitian (relative defect "
           << defect << ")";
        throw NotHermitian(os.str());
    }
    matrix_.makeCompressed();
}

Observable::Observable(std::string label, const DenseMatrix &matrix,
                       double herm_tol)
    : Observable(std::move(label), to_sparse(matrix), herm_tol) {}

Observable::Observable(Unchecked, std::string label, Matrix matrix)
    : label_(std::move(label)), matrix_(std::move(matrix)) {}

Observable Observable::relabeled(std::string label) const {
    return Observable(Unchecked{}, std::move(label), matrix_);
}

Projection::Projection(std::string label, Matrix matrix, double tol)
    : Observable(std::move(label), std::move(matrix), tol) {
    const double defect = idempotency_defect(this->matrix());
    if (!(defect <= tol)) {
        std::ostringstream os;
        os << "'" << this->label() << "' is not a projection (E^2 - E defect "
           << defect << ")";
        throw NotProjection(os.str());
    }
}

Projection::Projection(std::string label, const DenseMatrix &matrix, double tol)
    : Projection(std::move(label), to_sparse(matrix), tol) {}

Projection::Projection(const Observable &obs, double tol)
    : Projection(obs.label(), obs.matrix(), tol) {}

Projection::Projection(Unchecked tag, std::string label, Matrix matrix)
    : Observable(tag, std::move(label), std::move(matrix)) {}

Projection Projection::complement() const {
    Matrix c = identity_matrix(dim()) - matrix();
    c.prune(Complex(0.0));
    return Projection(Unchecked{}, label() + "'", std::move(c));
}

Projection Projection::zero(Index dim, std::string label) {
    return Projection(Unchecked{}, std::move(label), zero_matrix(dim));
}

Projection Projection::identity(Index dim, std::string label) {
    return Projection(Unchecked{}, std::move(label), identity_matrix(dim));
}

Projection Projection::onto(const Vector &v, std::string label) {
    return Projection(std::move(label), outer(v));
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(Matrix matrix, const Tolerances &tol)
    : matrix_(std::move(matrix)) {
    require_square(matrix_, "density operator");
    matrix_.makeCompressed();
    const double defect = hermiticity_defect(matrix_);
    if (!(defect <= tol.herm)) {
        std::ostringstream os;
        os << "state is not Hermitian (relative defect " << defect << ")";
        throw InvalidState(os.str());
    }
    const Complex tr = trace(matrix_);
    if (!(std::abs(tr - Complex(1.0, 0.0)) <= tol.trace)) {
        std::ostringstream os;
        os << "state trace is " << tr.real() << " (expected 1)";
        throw InvalidState(os.str());
    }
    const SpectralDecomposition sd = decompose_hermitian(matrix_, 0.0);
    const double lowest = sd.clusters().front().eigenvalue;
    if (lowest < -tol.eig) {
        std::ostringstream os;
        os << "state is not positive semidefinite (eigenvalue " << lowest << ")";
        throw InvalidState(os.str());
    }
}

DensityOperator::DensityOperator(const DenseMatrix &matrix,
                                 const Tolerances &tol)
    : DensityOperator(to_sparse(matrix), tol) {}

// Both are positive with unit trace by construction; no eigensolve.
DensityOperator DensityOperator::pure(const Vector &psi) {
    return DensityOperator(Unchecked{}, outer(psi));
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
    if (dim < 1) {
        throw InvalidArgument("maximally_mixed: dimension must be positive");
    }
    Matrix m = identity_matrix(dim) * Complex(1.0 / static_cast<double>(dim));
    return DensityOperator(Unchecked{}, std::move(m));
}

double DensityOperator::purity() const {
    return trace_product(matrix_, matrix_).real();
}

bool DensityOperator::is_pure(double tol) const {
    return std::abs(purity() - 1.0) <= tol;
}

// ---------------------------------------------------------------------------

Matrix commutator(const Matrix &a, const Matrix &b) {
    require_same_dim(a.rows(), b.rows(), "commutator");
    Matrix ab = a * b;
    Matrix ba = b * a;
    Matrix c = ab - ba;
    c.makeCompressed();
    return c;
}

Matrix commutator(const Observable &a, const Observable &b) {
    return commutator(a.matrix(), b.matrix());
}

bool is_commuting(const Observable &a, const Observable &b, double tol) {
    const double residual = frobenius(commutator(a, b));
    const double scale =
        std::max(1.0, frobenius(a.matrix()) * frobenius(b.matrix()));
    return residual <= tol * scale;
}

Projection spectral_projector(const SpectralDecomposition &sd, double lo,
                              double hi, std::string label) {
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "spectral_projector: empty interval (" << lo << ", " << hi << "]";
        throw InvalidArgument(os.str());
    }
    Matrix p = zero_matrix(sd.dim());
    for (std::size_t k = 0; k < sd.size(); ++k) {
        const double lambda = sd.clusters()[k].eigenvalue;
        if (lambda > lo && lambda <= hi) {
            p += sd.projector(k).matrix();
        }
    }
    return Projection(std::move(label), std::move(p));
}

Projection spectral_projector(const Observable &a, double lo, double hi,
                              double cluster_tol) {
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "spectral_projector: empty interval (" << lo << ", " << hi << "]";
        throw InvalidArgument(os.str());
    }
    return spectral_projector(spectral_decompose(a, cluster_tol), lo, hi,
                              "chi(" + a.label() + ")");
}

Observable function_of_observable(const SpectralDecomposition &sd,
                                  const std::function<double(double)> &f,
                                  std::string label) {
    Matrix out = zero_matrix(sd.dim());
    for (std::size_t k = 0; k < sd.size(); ++k) {
        const double value = f(sd.clusters()[k].eigenvalue);
        if (value != 0.0) {
            out += sd.projector(k).matrix() * Complex(value);
        }
    }
    out.makeCompressed();
    return Observable(std::move(label), std::move(out));
}

Observable function_of_observable(const Observable &a,
                                  const std::function<double(double)> &f,
                                  double cluster_tol) {
    return function_of_observable(spectral_decompose(a, cluster_tol), f,
                                  "f(" + a.label() + ")");
}

Expectation expected_value(const DensityOperator &rho, const Observable &a) {
    require_same_dim(rho.dim(), a.dim(), "expected_value");
    const Complex t = trace_product(rho.matrix(), a.matrix());
    return {t.real(), std::abs(t.imag())};
}

double probability_one(const DensityOperator &rho, const Projection &e,
                       double tol) {
    const Expectation ev = expected_value(rho, e);
    if (ev.imaginary_residual > tol || ev.value < -tol || ev.value > 1.0 + tol) {
        std::ostringstream os;
        os << "probability_one: Tr(rho E) = " << ev.value << " + "
           << ev.imaginary_residual << "i lies outside [0,1]";
        throw InvalidState(os.str());
    }
    return std::clamp(ev.value, 0.0, 1.0);
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix k = Eigen::kroneckerProduct(a, b).eval();
    k.makeCompressed();
    return k;
}

Observable tensor_product(const Observable &a, const Observable &b) {
    return Observable(a.label() + "⊗" + b.label(),
                      kron(a.matrix(), b.matrix()));
}

Observable apply_lookup(const Observable &c, std::span<const double> table,
                        std::string label) {
    const SpectralDecomposition sd = spectral_decompose(c);
    Matrix out = zero_matrix(c.dim());
    for (std::size_t k = 0; k < sd.size(); ++k) {
        const double lambda = sd.clusters()[k].eigenvalue;
        const long idx = std::lround(lambda);
        if (idx < 0 || static_cast<std::size_t>(idx) >= table.size() ||
            std::abs(lambda - static_cast<double>(idx)) > 1e-6) {
            std::ostringstream os;
            os << "apply_lookup: eigenvalue " << lambda
               << " is not an index into a table of size " << table.size();
            throw InvalidArgument(os.str());
        }
        out += sd.projector(k).matrix() * Complex(table[idx]);
    }
    out.makeCompressed();
    return Observable(std::move(label), std::move(out));
}

JointObservable joint_observable(const Observable &a, const Observable &b,
                                 double tol, double cluster_tol) {
    require_same_dim(a.dim(), b.dim(), "joint_observable");
    if (!is_commuting(a, b, tol)) {
        throw NotCommuting("joint_observable: '" + a.label() + "' and '" +
                           b.label() + "' are not co-measurable");
    }
    const std::vector<Observable> family{a, b};
    const std::vector<JointCell> cells = simultaneous_decompose(family, cluster_tol);

    // Snap b values onto B's own cluster representatives so equal pairs
    // coming from different A-eigenspaces compare equal.
    const std::vector<double> b_spec = spectral_decompose(b, cluster_tol).eigenvalues();
    auto snap = [&](double v) {
        double best = b_spec.front();
        for (double s : b_spec) {
            if (std::abs(s - v) < std::abs(best - v)) {
                best = s;
            }
        }
        return best;
    };

    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(cells.size());
    for (const auto &cell : cells) {
        pairs.emplace_back(cell.values[0], snap(cell.values[1]));
    }
    std::vector<std::pair<double, double>> distinct = pairs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    Matrix c = zero_matrix(a.dim());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), pairs[i]);
        const auto code = static_cast<double>(pos - distinct.begin());
        if (code != 0.0) {
            const Matrix &basis = cells[i].basis;
            c += basis * Matrix(basis.adjoint()) * Complex(code);
        }
    }
    c.makeCompressed();

    JointObservable out{Observable("C(" + a.label() + "," + b.label() + ")",
                                   std::move(c)),
                        {},
                        {}};
    for (const auto &[va, vb] : distinct) {
        out.f.push_back(va);
        out.g.push_back(vb);
    }
    return out;
}

} // namespace qeval
