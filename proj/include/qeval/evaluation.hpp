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
 * Perfect correlation between observables, value assignment by evaluation,
 * and the consistency functionals that such an assignment must satisfy.
 *
 * Naming of the consistency checks:
 *  - verify_commuting_agreement: on every F commuting with E, the joint
 *    functional reproduces Tr(rho E F) (and the same for E').
 *  - verify_additivity: the functional is additive over orthogonal families.
 *  - verify_marginal_sum: h(E&F) + h(E'&F) = Tr(rho F).
 */

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeval/hilbert_core.hpp"

namespace qeval {

/// Verdict of the operator criterion for perfect correlation:
/// [A,T] = 0 together with A rho = T rho or rho T = rho A.
struct CorrelationReport {
    bool holds;
    double commutator_residual;    ///< ||[A,T]||_F
    double state_action_residual;  ///< ||A rho - T rho||_F
    double reverse_residual;       ///< ||rho T - rho A||_F
    double tolerance_used;
};

CorrelationReport check_perfect_correlation(const Observable &a,
                                            const Observable &t,
                                            const DensityOperator &rho,
                                            double tol = kDefaultTolerances.recon);

/// For commuting A, T: A rho = T rho holds exactly when rho T = rho A does.
/// Returns whether the two residual tests agree. Throws NotCommuting.
bool check_corollary_equivalence(const Observable &a, const Observable &t,
                                 const DensityOperator &rho,
                                 double tol = kDefaultTolerances.recon);

/// h(E&F) = Re Tr(rho E F E).
double h_functional(const Projection &e, const Projection &f,
                    const DensityOperator &rho);

struct AgreementVerdict {
    std::string label;
    bool skipped;                ///< F does not commute with E
    double residual;             ///< |h(E&F) - Tr(rho E F)|
    double complement_residual;  ///< |h(E'&F) - Tr(rho E' F)|
    bool pass;
};

/// Agreement with the joint probability Tr(rho E F) on every domain member
/// that commutes with E. Non-commuting members are skipped and reported.
std::vector<AgreementVerdict>
verify_commuting_agreement(const Projection &e, const DensityOperator &rho,
                           std::span<const Projection> domain,
                           double tol = kDefaultTolerances.recon);

/// Additivity of h(E&.) and h(E'&.) over a mutually orthogonal family.
/// Throws NotProjection if the family does not sum to a projection and
/// PreconditionFailed if two members overlap.
bool verify_additivity(const Projection &e, const DensityOperator &rho,
                       std::span<const Projection> family,
                       double tol = kDefaultTolerances.recon);

/// 2 Re Tr(rho E F E'). Checks internally that
/// Tr(rho F) = h(E&F) + h(E'&F) + interference.
double interference_term(const Projection &e, const Projection &f,
                         const DensityOperator &rho);

/// h(E&F) + h(E'&F) = Tr(rho F) for every F in the domain. Requires that T
/// evaluates E in rho and that every F commutes with T; a violated
/// precondition throws PreconditionFailed rather than returning false.
bool verify_marginal_sum(const Projection &e, const Projection &t,
                         const DensityOperator &rho,
                         std::span<const Projection> domain,
                         double tol = kDefaultTolerances.recon);

/// Tr(rho T F) for F commuting with the evaluator T of E. The value is
/// checked against h(E&F) within recon_tol.
double evaluation_probability(const Projection &e, const Projection &t,
                              const Projection &f, const DensityOperator &rho,
                              double tol = kDefaultTolerances.recon,
                              double recon_tol = kDefaultTolerances.recon);

/// Tr(rho T' F), the complement version (equals h(E'&F)).
double evaluation_probability_complement(const Projection &e, const Projection &t,
                                         const Projection &f,
                                         const DensityOperator &rho,
                                         double tol = kDefaultTolerances.recon,
                                         double recon_tol = kDefaultTolerances.recon);

/// Half-open spectral interval (lo, hi].
struct Interval {
    double lo;
    double hi;
};

struct SpectralIdentityReport {
    bool holds;
    double max_interval_residual;  ///< max ||rho chi(A) - rho chi(T)||_F
    double max_power_residual;     ///< max_j ||rho A^j - rho T^j||_F
};

/// For a perfectly correlated pair: rho chi_(lo,hi](A) = rho chi_(lo,hi](T)
/// on every interval and rho A^j = rho T^j for j = 1..max_power.
SpectralIdentityReport verify_spectral_identities(const Observable &a,
                                                  const Observable &t,
                                                  const DensityOperator &rho,
                                                  std::span<const Interval> intervals,
                                                  double tol = kDefaultTolerances.recon,
                                                  int max_power = 5);

struct ConsistencyVerdict {
    bool agreement_ok;
    bool additivity_ok;
    bool marginal_ok;
    double max_violation;
    std::vector<std::pair<std::string, double>> interference_terms;
};

/// Runs all three consistency checks of the evaluation of E by T over the
/// domain (which must lie in the commutant of T) and lists the interference
/// term of each domain member. Additivity is checked on every split
/// {F, Id - F}, and on the whole domain when its members are mutually
/// orthogonal.
ConsistencyVerdict assess_consistency(const Projection &e, const Projection &t,
                                      const DensityOperator &rho,
                                      std::span<const Projection> domain,
                                      double tol = kDefaultTolerances.recon);

/// A target observable together with an evaluator certified to be perfectly
/// correlated with it in the given state.
struct EvaluationPlan {
    Observable target;
    Observable evaluator;
    DensityOperator state;
    std::string commutant_domain_note;
};

/// Throws PreconditionFailed unless the evaluator is perfectly correlated
/// with the target.
EvaluationPlan make_evaluation_plan(const Observable &target,
                                    const Observable &evaluator,
                                    const DensityOperator &state,
                                    double tol = kDefaultTolerances.recon);

struct SynthesisResult {
    bool feasible;
    /// Least-squares minimiser (minimum norm among minimisers), always set.
    Observable evaluator;
    /// Euclidean norm of the stacked residual
    /// ([T,A], [T,C_1], ..., T rho - A rho).
    double residual;
};

/// Searches the real vector space of Hermitian matrices for T with
/// [T,A] = 0, [T,C] = 0 for every constraint C and T rho = A rho.
SynthesisResult synthesize_evaluator(const Observable &a,
                                     const DensityOperator &rho,
                                     std::span<const Observable> must_commute_with,
                                     double tol = kDefaultTolerances.recon);

/// Largest dimension accepted by synthesize_evaluator.
inline constexpr Index kMaxSynthesisDim = 24;

} // namespace qeval
