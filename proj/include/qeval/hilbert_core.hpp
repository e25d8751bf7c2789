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
 * Finite-dimensional operator algebra: observables, projections, density
 * operators, spectral calculus and joint (simultaneous) diagonalisation of
 * commuting families.
 *
 * Every operator is stored as a sparse complex matrix. Small dense inputs are
 * converted on construction; large lattice operators stay sparse end to end.
 */

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qeval/errors.hpp"

namespace qeval {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances. Every public operation takes the relevant one as an
/// argument defaulting to these values.
struct Tolerances {
    double herm = 1e-10;    ///< relative Frobenius defect of A - A^dagger
    double eig = 1e-10;     ///< eigenvalue sign / projector orthogonality
    double trace = 1e-10;   ///< |Tr(rho) - 1| and purity
    double recon = 1e-9;    ///< spectral reconstruction and identity checks
    double cluster = 1e-8;  ///< gap below which adjacent eigenvalues merge
};

inline constexpr Tolerances kDefaultTolerances{};

/// Largest connected block handed to the dense eigensolver.
inline constexpr Index kMaxDenseBlock = 4096;

// ---------------------------------------------------------------------------
// Matrix helpers
// ---------------------------------------------------------------------------

Matrix identity_matrix(Index dim);
Matrix zero_matrix(Index dim);
Matrix to_sparse(const DenseMatrix &m);
DenseMatrix to_dense(const Matrix &m);
double frobenius(const Matrix &m);
Complex trace(const Matrix &m);
/// Tr(AB) without forming the product.
Complex trace_product(const Matrix &a, const Matrix &b);
/// ||A - A^dagger||_F / max(1, ||A||_F).
double hermiticity_defect(const Matrix &m);
/// |v><v| / <v|v>.
Matrix outer(const Vector &v);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A labelled Hermitian matrix.
class Observable {
  public:
    Observable(std::string label, Matrix matrix,
               double herm_tol = kDefaultTolerances.herm);
    Observable(std::string label, const DenseMatrix &matrix,
               double herm_tol = kDefaultTolerances.herm);

    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] Observable relabeled(std::string label) const;

  protected:
    struct Unchecked {};
    Observable(Unchecked, std::string label, Matrix matrix);

  private:
    std::string label_;
    Matrix matrix_;
};

/// Elementary observable: a Hermitian idempotent.
class Projection : public Observable {
  public:
    Projection(std::string label, Matrix matrix,
               double tol = kDefaultTolerances.herm);
    Projection(std::string label, const DenseMatrix &matrix,
               double tol = kDefaultTolerances.herm);
    explicit Projection(const Observable &obs,
                        double tol = kDefaultTolerances.herm);

    /// Id - E, labelled with a trailing prime.
    [[nodiscard]] Projection complement() const;

    static Projection zero(Index dim, std::string label = "0");
    static Projection identity(Index dim, std::string label = "Id");
    /// Rank-one projector onto span{v}.
    static Projection onto(const Vector &v, std::string label);

  private:
    Projection(Unchecked tag, std::string label, Matrix matrix);
};

/// Positive semidefinite unit-trace matrix.
class DensityOperator {
  public:
    explicit DensityOperator(Matrix matrix,
                             const Tolerances &tol = kDefaultTolerances);
    explicit DensityOperator(const DenseMatrix &matrix,
                             const Tolerances &tol = kDefaultTolerances);

    /// |psi><psi| with psi normalised first.
    static DensityOperator pure(const Vector &psi);
    static DensityOperator maximally_mixed(Index dim);

    [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    /// Tr(rho^2).
    [[nodiscard]] double purity() const;
    [[nodiscard]] bool is_pure(double tol = kDefaultTolerances.trace) const;

  private:
    struct Unchecked {};
    DensityOperator(Unchecked, Matrix matrix) : matrix_(std::move(matrix)) {}

    Matrix matrix_;
};

struct SpectralCluster {
    double eigenvalue;
    /// dim x rank matrix with orthonormal columns spanning the eigenspace.
    Matrix basis;
};

/// Eigenvalue clusters of a Hermitian matrix, in increasing order.
class SpectralDecomposition {
  public:
    SpectralDecomposition(std::vector<SpectralCluster> clusters, Index dim,
                          double cluster_tolerance);

    [[nodiscard]] const std::vector<SpectralCluster> &clusters() const noexcept {
        return clusters_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return clusters_.size(); }
    [[nodiscard]] Index dim() const noexcept { return dim_; }
    [[nodiscard]] double cluster_tolerance() const noexcept { return tol_; }
    [[nodiscard]] std::vector<double> eigenvalues() const;
    [[nodiscard]] Projection projector(std::size_t k) const;
    [[nodiscard]] std::vector<Projection> projectors() const;
    /// sum_k lambda_k P_k.
    [[nodiscard]] Matrix reconstruct() const;

  private:
    std::vector<SpectralCluster> clusters_;
    Index dim_;
    double tol_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// AB - BA.
Matrix commutator(const Observable &a, const Observable &b);
Matrix commutator(const Matrix &a, const Matrix &b);

/// ||[A,B]||_F <= tol * max(1, ||A||_F ||B||_F).
bool is_commuting(const Observable &a, const Observable &b, double tol);

/// Eigen-decomposition of a Hermitian sparse matrix. The sparsity graph is
/// split into connected components, each diagonalised densely, and sorted
/// eigenvalues closer than cluster_tol are merged.
SpectralDecomposition decompose_hermitian(const Matrix &m, double cluster_tol);

SpectralDecomposition
spectral_decompose(const Observable &a,
                   double cluster_tol = kDefaultTolerances.cluster);

/// Projector onto the eigenvalues of A in (lo, hi].
Projection spectral_projector(const Observable &a, double lo, double hi,
                              double cluster_tol = kDefaultTolerances.cluster);
Projection spectral_projector(const SpectralDecomposition &sd, double lo,
                              double hi, std::string label = "chi(A)");

/// sum_k f(lambda_k) P_k.
Observable function_of_observable(const Observable &a,
                                  const std::function<double(double)> &f,
                                  double cluster_tol = kDefaultTolerances.cluster);
Observable function_of_observable(const SpectralDecomposition &sd,
                                  const std::function<double(double)> &f,
                                  std::string label);

struct Expectation {
    double value;
    double imaginary_residual;
};

/// Re Tr(rho A), with the discarded imaginary part reported.
Expectation expected_value(const DensityOperator &rho, const Observable &a);

/// Tr(rho E), clamped to [0, 1] after checking it is within tolerance of it.
double probability_one(const DensityOperator &rho, const Projection &e,
                       double tol = kDefaultTolerances.recon);

/// Kronecker product A (x) B.
Observable tensor_product(const Observable &a, const Observable &b);
Matrix kron(const Matrix &a, const Matrix &b);

/// A simultaneous eigenspace of a commuting family.
struct JointCell {
    /// Cluster representative of each observable on this cell.
    std::vector<double> values;
    /// dim x rank orthonormal basis.
    Matrix basis;
};

/// Joint spectral cells of a pairwise commuting family, obtained by
/// decomposing the first observable and refining every eigenspace with the
/// restriction of each subsequent observable. Does not re-check commutation.
std::vector<JointCell>
simultaneous_decompose(std::span<const Observable> family,
                       double cluster_tol = kDefaultTolerances.cluster);

struct JointObservable {
    Observable c;
    /// Lookup tables: eigenvalue c = k of C maps to a = f[k], b = g[k].
    std::vector<double> f;
    std::vector<double> g;
};

/// Builds C, f, g with A = f(C), B = g(C). Distinct joint eigenvalue pairs
/// (a, b) are enumerated in lexicographic order and assigned c = 0, 1, ...
/// Throws NotCommuting when [A,B] != 0.
JointObservable joint_observable(const Observable &a, const Observable &b,
                                 double tol = kDefaultTolerances.recon,
                                 double cluster_tol = kDefaultTolerances.cluster);

/// Applies a lookup table to an observable whose spectrum is {0, .., n-1}.
Observable apply_lookup(const Observable &c, std::span<const double> table,
                        std::string label);

} // namespace qeval
