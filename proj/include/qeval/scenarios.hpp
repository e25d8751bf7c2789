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
 * Physical setups packaged as a state, labelled observables and the
 * relations expected to hold between them, plus the engine that checks
 * those relations.
 *
 * An operand label with a trailing "'" denotes the complement Id - E of a
 * declared projection E.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qeval/evaluation.hpp"
#include "qeval/hilbert_core.hpp"
#include "qeval/lattice.hpp"
#include "qeval/measurement_sim.hpp"

namespace qeval {

enum class RelationKind {
    perfect_correlation,          ///< (A, T)
    commute,                      ///< (A, B)
    not_commute,                  ///< (A, B)
    state_equality,               ///< (A, B): A rho = B rho
    probability_positive,         ///< (E_1, .., E_k): Tr(rho E_1 .. E_k) > tol
    conditional_probability_one,  ///< (E, F): Tr(rho E) > tol, Tr(rho E F') <= tol
};

std::string_view to_string(RelationKind kind);
/// Throws InvalidArgument for an unknown name.
RelationKind parse_relation_kind(std::string_view name);
/// Whether k operands suit the kind.
bool arity_ok(RelationKind kind, std::size_t k);
/// Whether every operand of the kind must be a projection.
bool needs_projections(RelationKind kind);

struct Relation {
    RelationKind kind;
    std::vector<std::string> operands;
    double tolerance = kDefaultTolerances.recon;
    /// Statement of the physical claim; a generic text is used when empty.
    std::string note;
};

/// One-line statement of what a relation asserts.
std::string describe(const Relation &r);

class Scenario {
  public:
    /// Throws DimensionMismatch, InvalidArgument (duplicate or unknown labels,
    /// bad arity) or NotProjection (projection-only operands).
    Scenario(std::string name, DensityOperator state, std::vector<Observable> observables,
             std::vector<Relation> relations, std::string description = {});

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] const std::string &description() const noexcept { return description_; }
    [[nodiscard]] const DensityOperator &state() const noexcept { return state_; }
    [[nodiscard]] const std::vector<Observable> &observables() const noexcept {
        return observables_;
    }
    [[nodiscard]] const std::vector<Relation> &relations() const noexcept { return relations_; }
    [[nodiscard]] Index dim() const noexcept { return state_.dim(); }

    /// Declared observable; throws InvalidArgument when absent.
    [[nodiscard]] const Observable &observable(std::string_view label) const;
    /// Declared label or the complement of a declared projection.
    [[nodiscard]] Observable resolve(std::string_view operand) const;

  private:
    std::string name_;
    std::string description_;
    DensityOperator state_;
    std::vector<Observable> observables_;
    std::vector<Relation> relations_;
};

Scenario build_stern_gerlach();

/// Seed of the path unitary accepted for the double slit.
inline constexpr std::uint64_t kDoubleSlitSeed = 0;
/// Smallest ||[Q_S, Q_F]||_F accepted for a double-slit unitary.
inline constexpr double kDoubleSlitMinCommutator = 0.1;

/// nullopt when the seed's unitary is rejected (commutator too small or
/// no evaluator).
std::optional<Scenario> try_build_double_slit(std::uint64_t seed);
/// Throws PreconditionFailed when the seed is rejected.
Scenario build_double_slit(std::uint64_t seed = kDoubleSlitSeed);
/// First accepted seed at or after `first`.
std::uint64_t find_double_slit_seed(std::uint64_t first = 0);

/// Hardy's two-qubit setup at the optimum of P(L1 = 1, R2 = 0).
struct HardyConstants {
    /// u = (sqrt 5 - 1) / 2.
    static double u();
    /// Optimal P(L1 = 1, R2 = 0) = u^5.
    static double optimum();
    /// Amplitudes on |00>, |01>, |10>, |11> (left factor first).
    static Vector state();
    /// Unit vectors spanning the ranges of L1, L2 (left) and R1, R2 (right).
    static Vector l1();
    static Vector l2();
    static Vector r1();
    static Vector r2();
};

Scenario build_hardy();

/// 4 particles, T_Q = (Q_2 + Q_3)/2, T_V = (V_1 + V_4)/2 in one-based
/// particle numbering. Requires particles == 4 and sites >= 8.
Scenario build_rigid_toy(const LatticeConfig &cfg = {});

inline constexpr Index kMaxRealisticDim = 50000;

/// T_Q = Q^J_CM, T_V = i[H, Q^K_CM]. J, K must be nonempty, disjoint and
/// centred on the chain (mean index (N - 1)/2).
Scenario build_rigid_realistic(const LatticeConfig &cfg, std::span<const Index> j_group,
                               std::span<const Index> k_group,
                               Index max_dim = kMaxRealisticDim);

/// Default realistic chain: N = 4, L = 6, J = {1, 2}, K = {0, 3}.
Scenario build_rigid_realistic();

struct BuiltinInfo {
    std::string name;
    std::string summary;
};

/// The fixed, ordered list of built-in scenarios.
const std::vector<BuiltinInfo> &builtin_scenarios();
/// Throws InvalidArgument for an unknown name.
Scenario build_builtin(std::string_view name, const std::optional<LatticeConfig> &lattice = {});

struct RelationResult {
    Relation relation;
    std::string reference;
    bool pass;
    double residual;
    std::string detail;
};

struct SamplingSummary {
    std::uint64_t trials;
    std::uint64_t seed;
    std::vector<std::pair<std::string, double>> frequencies;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<RelationResult> relations;
    SamplingSummary sampling;
    bool pass;
};

/// Evaluates one relation; `tolerance` overrides the relation's own.
RelationResult check_relation(const Scenario &s, const Relation &r,
                              std::optional<double> tolerance = {});

/// Checks every relation and samples the jointly measurable ones
/// (coincidence of correlated pairs, joint and conditional frequencies).
/// Sampling is skipped when cfg.trials == 0. Verdicts come from the exact
/// checks only.
ScenarioReport verify_scenario(const Scenario &s, const SamplerConfig &cfg,
                               std::optional<double> tolerance = {});

} // namespace qeval
