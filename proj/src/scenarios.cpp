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

#include "qeval/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace qeval {

namespace {

struct KindName {
    RelationKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 6> kKinds{{
    {RelationKind::perfect_correlation, "perfect_correlation"},
    {RelationKind::commute, "commute"},
    {RelationKind::not_commute, "not_commute"},
    {RelationKind::state_equality, "state_equality"},
    {RelationKind::probability_positive, "probability_positive"},
    {RelationKind::conditional_probability_one, "conditional_probability_one"},
}};

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::string_view base_label(std::string_view operand) {
    if (!operand.empty() && operand.back() == '\'') {
        operand.remove_suffix(1);
    }
    return operand;
}

Matrix diag2(double a, double b) {
    DenseMatrix d = DenseMatrix::Zero(2, 2);
    d(0, 0) = a;
    d(1, 1) = b;
    return to_sparse(d);
}

/// Product E_1 .. E_k of the resolved operands.
Matrix product_of(const std::vector<Observable> &ops) {
    Matrix p = ops.front().matrix();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        p = p * ops[i].matrix();
    }
    return p;
}

/// Largest pairwise commutator, or a negative value when all commute.
double worst_commutator(const std::vector<Observable> &ops, double tol) {
    double worst = -1.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            if (!is_commuting(ops[i], ops[j], tol)) {
                worst = std::max(worst, frobenius(commutator(ops[i], ops[j])));
            }
        }
    }
    return worst;
}

/// Haar-random 2 x 2 unitary from mt19937_64, via Box-Muller so the draw
/// does not depend on the standard library's distributions.
DenseMatrix haar_unitary_2(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; };
    DenseMatrix z(2, 2);
    for (Index k = 0; k < 4; ++k) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        z(k % 2, k / 2) = Complex(r * std::cos(t), r * std::sin(t)) / std::sqrt(2.0);
    }
    const Eigen::HouseholderQR<DenseMatrix> qr(z);
    DenseMatrix q = qr.householderQ();
    const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < 2; ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) > 0.0) {
            q.col(k) *= d / std::abs(d);
        }
    }
    return q;
}

void require_group(std::span<const Index> group, Index n, const char *name) {
    if (group.empty()) {
        throw InvalidArgument(std::string("rigid chain: group ") + name + " is empty");
    }
    std::set<Index> seen;
    double sum = 0.0;
    for (Index j : group) {
        if (j < 0 || j >= n) {
            throw InvalidArgument(std::string("rigid chain: group ") + name +
                                  " has an index outside the chain");
        }
        if (!seen.insert(j).second) {
            throw InvalidArgument(std::string("rigid chain: group ") + name +
                                  " repeats an index");
        }
        sum += static_cast<double>(j);
    }
    // Mean index must equal (N - 1)/2 for the group's centre to track the
    // chain's centre.
    const double mean = sum / static_cast<double>(group.size());
    if (std::abs(mean - 0.5 * static_cast<double>(n - 1)) > 1e-12) {
        throw InvalidArgument(std::string("rigid chain: group ") + name +
                              " is not centred on the chain");
    }
}

Scenario rigid_scenario(std::string name, std::string description, const RigidChain &chain,
                        std::span<const Index> j_group, std::span<const Index> k_group,
                        const std::string &setting) {
    std::vector<Index> all(static_cast<std::size_t>(chain.cfg.particles));
    for (std::size_t j = 0; j < all.size(); ++j) {
        all[j] = static_cast<Index>(j);
    }
    const Matrix q_cm = chain.group_position(all);
    const Matrix t_q = chain.group_position(j_group);
    const Matrix v_cm = chain.velocity_of(q_cm);
    const Matrix t_v = chain.velocity_of(chain.group_position(k_group));

    std::vector<Observable> obs{
        Observable("Q_CM", q_cm), Observable("T_Q", t_q),
        Observable("V_CM", v_cm), Observable("T_V", t_v)};
    const double tol = kDefaultTolerances.recon;
    std::vector<Relation> rel{
        {RelationKind::state_equality, {"Q_CM", "T_Q"}, tol,
         "on the rigid state the centre of mass equals the " + setting + " position mean"},
        {RelationKind::state_equality, {"V_CM", "T_V"}, tol,
         "on the rigid state the centre-of-mass velocity equals the evaluating velocity"},
        {RelationKind::commute, {"T_Q", "T_V"}, tol,
         "position and velocity evaluators act on disjoint particle groups"},
        {RelationKind::not_commute, {"Q_CM", "V_CM"}, tol,
         "centre-of-mass position and velocity are not co-measurable"},
        {RelationKind::perfect_correlation, {"Q_CM", "T_Q"}, tol,
         "T_Q evaluates the centre-of-mass position"},
        {RelationKind::perfect_correlation, {"V_CM", "T_V"}, tol,
         "T_V evaluates the centre-of-mass velocity"},
    };
    return Scenario(std::move(name), DensityOperator::pure(chain.psi), std::move(obs),
                    std::move(rel), std::move(description));
}

} // namespace

// ---------------------------------------------------------------------------
// Relations

std::string_view to_string(RelationKind kind) {
    for (const auto &k : kKinds) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "unknown";
}

RelationKind parse_relation_kind(std::string_view name) {
    for (const auto &k : kKinds) {
        if (k.name == name) {
            return k.kind;
        }
    }
    throw InvalidArgument("unknown relation kind '" + std::string(name) + "'");
}

bool arity_ok(RelationKind kind, std::size_t k) {
    return kind == RelationKind::probability_positive ? k >= 1 : k == 2;
}

bool needs_projections(RelationKind kind) {
    return kind == RelationKind::probability_positive ||
           kind == RelationKind::conditional_probability_one;
}

std::string describe(const Relation &r) {
    if (!r.note.empty()) {
        return r.note;
    }
    const auto &o = r.operands;
    switch (r.kind) {
    case RelationKind::perfect_correlation:
        return o[0] + " and " + o[1] + " commute and act identically on the state";
    case RelationKind::commute:
        return o[0] + " and " + o[1] + " commute";
    case RelationKind::not_commute:
        return o[0] + " and " + o[1] + " do not commute";
    case RelationKind::state_equality:
        return o[0] + " and " + o[1] + " act identically on the state";
    case RelationKind::probability_positive:
        return "joint outcome 1 of " + join(o, ", ") + " has positive probability";
    case RelationKind::conditional_probability_one:
        return "outcome 1 of " + o[0] + " implies outcome 1 of " + o[1];
    }
    return {};
}

// ---------------------------------------------------------------------------
// Scenario

Scenario::Scenario(std::string name, DensityOperator state, std::vector<Observable> observables,
                   std::vector<Relation> relations, std::string description)
    : name_(std::move(name)), description_(std::move(description)), state_(std::move(state)),
      observables_(std::move(observables)), relations_(std::move(relations)) {
    std::set<std::string> labels;
    for (const auto &o : observables_) {
        if (o.dim() != state_.dim()) {
            throw DimensionMismatch("scenario '" + name_ + "': observable '" + o.label() +
                                    "' does not match the state dimension");
        }
        if (o.label().empty() || o.label().back() == '\'') {
            throw InvalidArgument("scenario '" + name_ + "': invalid label '" + o.label() + "'");
        }
        if (!labels.insert(o.label()).second) {
            throw InvalidArgument("scenario '" + name_ + "': duplicate label '" + o.label() +
                                  "'");
        }
    }
    for (const auto &r : relations_) {
        if (!arity_ok(r.kind, r.operands.size())) {
            std::ostringstream os;
            os << "scenario '" << name_ << "': relation " << to_string(r.kind) << " takes "
               << (r.kind == RelationKind::probability_positive ? "at least 1" : "2")
               << " operands, got " << r.operands.size();
            throw InvalidArgument(os.str());
        }
        if (!(r.tolerance > 0.0)) {
            throw InvalidArgument("scenario '" + name_ + "': relation " +
                                  std::string(to_string(r.kind)) +
                                  " needs a positive tolerance");
        }
        for (const auto &op : r.operands) {
            const Observable &o = observable(base_label(op));
            if (needs_projections(r.kind) || op.back() == '\'') {
                // Throws NotProjection naming the label.
                (void)Projection(o);
            }
        }
    }
}

const Observable &Scenario::observable(std::string_view label) const {
    for (const auto &o : observables_) {
        if (o.label() == label) {
            return o;
        }
    }
    throw InvalidArgument("scenario '" + name_ + "': no observable labelled '" +
                          std::string(label) + "'");
}

Observable Scenario::resolve(std::string_view operand) const {
    const Observable &o = observable(base_label(operand));
    if (operand.back() == '\'') {
        return Projection(o).complement();
    }
    return o;
}

// ---------------------------------------------------------------------------
// Built-in setups

Scenario build_stern_gerlach() {
    // Spin (up = 0) x exit path (upper = 0); index = 2 spin + path.
    Vector psi = Vector::Zero(4);
    psi(0) = 1.0 / std::numbers::sqrt2;  // |up spin, upper exit>
    psi(3) = 1.0 / std::numbers::sqrt2;  // |down spin, lower exit>
    const Matrix id2 = identity_matrix(2);
    std::vector<Observable> obs{
        Projection("S_z", kron(diag2(1.0, 0.0), id2)),
        Projection("T_up", kron(id2, diag2(1.0, 0.0))),
    };
    std::vector<Relation> rel{
        {RelationKind::perfect_correlation, {"S_z", "T_up"}, kDefaultTolerances.recon,
         "localisation in the upper exit evaluates spin up"},
        {RelationKind::commute, {"S_z", "T_up"}, kDefaultTolerances.recon,
         "spin projection and exit localisation are co-measurable"},
    };
    return Scenario("stern-gerlach", DensityOperator::pure(psi), std::move(obs), std::move(rel),
                    "spin value assigned by localising the atom behind a Stern-Gerlach magnet");
}

std::optional<Scenario> try_build_double_slit(std::uint64_t seed) {
    // Path (upper slit = 0) x which-way marker; index = 2 path + marker.
    Vector psi = Vector::Zero(4);
    psi(0) = 1.0 / std::numbers::sqrt2;
    psi(3) = 1.0 / std::numbers::sqrt2;
    const DensityOperator rho = DensityOperator::pure(psi);
    const Matrix id2 = identity_matrix(2);

    const DenseMatrix u = haar_unitary_2(seed);
    DenseMatrix screen = DenseMatrix::Zero(2, 2);
    screen(0, 0) = 1.0;
    DenseMatrix evolved = u.adjoint() * screen * u;
    evolved = 0.5 * (evolved + evolved.adjoint()).eval();

    const Projection q_s("Q_S", kron(diag2(1.0, 0.0), id2));
    const Projection q_f("Q_F", kron(to_sparse(evolved), id2), 1e-9);
    if (frobenius(commutator(q_s, q_f)) < kDoubleSlitMinCommutator) {
        return std::nullopt;
    }
    const std::vector<Observable> constraints{q_f};
    const SynthesisResult syn = synthesize_evaluator(q_s, rho, constraints);
    if (!syn.feasible) {
        return std::nullopt;
    }
    std::vector<Observable> obs{q_s, q_f, syn.evaluator.relabeled("T_S")};
    std::vector<Relation> rel{
        {RelationKind::not_commute, {"Q_S", "Q_F"}, kDefaultTolerances.recon,
         "slit position and final-screen position are not co-measurable"},
        {RelationKind::commute, {"T_S", "Q_F"}, kDefaultTolerances.recon,
         "the slit evaluator is co-measurable with the final-screen position"},
        {RelationKind::perfect_correlation, {"Q_S", "T_S"}, kDefaultTolerances.recon,
         "T_S evaluates which slit was crossed"},
    };
    return Scenario("double-slit", rho, std::move(obs), std::move(rel),
                    "which-slit value assigned together with a final-screen localisation");
}

Scenario build_double_slit(std::uint64_t seed) {
    auto s = try_build_double_slit(seed);
    if (!s) {
        throw PreconditionFailed("double slit: the path unitary of seed " +
                                 std::to_string(seed) + " is rejected");
    }
    return std::move(*s);
}

std::uint64_t find_double_slit_seed(std::uint64_t first) {
    for (std::uint64_t seed = first;; ++seed) {
        if (try_build_double_slit(seed)) {
            return seed;
        }
    }
}

double HardyConstants::u() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double HardyConstants::optimum() { return std::pow(u(), 5); }

Vector HardyConstants::state() {
    const double v = u();
    Vector psi(4);
    psi << v, std::pow(v, 1.5), 0.0, -v;
    return psi;
}

Vector HardyConstants::l1() {
    Vector l(2);
    l << std::sqrt(u()), u();
    return l;
}

Vector HardyConstants::l2() {
    Vector l(2);
    l << 1.0, 0.0;
    return l;
}

Vector HardyConstants::r1() { return l2(); }

Vector HardyConstants::r2() { return l1(); }

Scenario build_hardy() {
    const Matrix id2 = identity_matrix(2);
    std::vector<Observable> obs{
        Projection("L1", kron(outer(HardyConstants::l1()), id2)),
        Projection("L2", kron(outer(HardyConstants::l2()), id2)),
        Projection("R1", kron(id2, outer(HardyConstants::r1()))),
        Projection("R2", kron(id2, outer(HardyConstants::r2()))),
    };
    const double tol = kDefaultTolerances.recon;
    std::vector<Relation> rel{
        {RelationKind::conditional_probability_one, {"L1", "R1"}, tol,
         "whenever L1 = 1 is found, R1 = 1 is found"},
        {RelationKind::conditional_probability_one, {"R1", "L2"}, tol,
         "whenever R1 = 1 is found, L2 = 1 is found"},
        {RelationKind::conditional_probability_one, {"L2", "R2"}, tol,
         "whenever L2 = 1 is found, R2 = 1 is found"},
        {RelationKind::probability_positive, {"L1", "R2'"}, tol,
         "L1 = 1 together with R2 = 0 occurs, against values pre-assigned along the chain"},
    };
    return Scenario("hardy", DensityOperator::pure(HardyConstants::state()), std::move(obs),
                    std::move(rel),
                    "two-qubit correlations refuting universally pre-assigned values");
}

Scenario build_rigid_toy(const LatticeConfig &cfg) {
    if (cfg.particles != 4) {
        throw InvalidArgument("rigid toy: exactly 4 particles required");
    }
    if (cfg.sites < 8) {
        throw InvalidArgument("rigid toy: at least 8 sites required");
    }
    const std::array<Index, 2> j_group{1, 2};
    const std::array<Index, 2> k_group{0, 3};
    const RigidChain chain =
        build_rigid_chain(cfg, k_group, std::numeric_limits<Index>::max());
    return rigid_scenario("rigid-toy",
                          "four-particle rigid segment: centre of mass evaluated by inner and "
                          "outer pairs",
                          chain, j_group, k_group, "inner pair");
}

Scenario build_rigid_realistic(const LatticeConfig &cfg, std::span<const Index> j_group,
                               std::span<const Index> k_group, Index max_dim) {
    const Index n = cfg.particles;
    require_group(j_group, n, "J");
    require_group(k_group, n, "K");
    for (Index j : j_group) {
        if (std::find(k_group.begin(), k_group.end(), j) != k_group.end()) {
            throw InvalidArgument("rigid chain: groups J and K overlap");
        }
    }
    const RigidChain chain = build_rigid_chain(cfg, k_group, max_dim);
    return rigid_scenario("rigid-realistic",
                          "N-particle rigid chain: centre of mass evaluated on disjoint "
                          "subsets J and K",
                          chain, j_group, k_group, "group J");
}

Scenario build_rigid_realistic() {
    LatticeConfig cfg;
    cfg.sites = 6;
    cfg.particles = 4;
    const std::array<Index, 2> j_group{1, 2};
    const std::array<Index, 2> k_group{0, 3};
    return build_rigid_realistic(cfg, j_group, k_group);
}

const std::vector<BuiltinInfo> &builtin_scenarios() {
    static const std::vector<BuiltinInfo> kList{
        {"stern-gerlach", "spin evaluated by exit localisation behind a Stern-Gerlach magnet"},
        {"double-slit", "which-slit evaluator co-measurable with final-screen position"},
        {"hardy", "two-qubit chain of certain implications refuting pre-assigned values"},
        {"rigid-toy", "four-particle rigid segment, centre of mass position and velocity"},
        {"rigid-realistic", "N-particle rigid chain evaluated on disjoint subsets J, K"},
    };
    return kList;
}

Scenario build_builtin(std::string_view name, const std::optional<LatticeConfig> &lattice) {
    if (name == "stern-gerlach") {
        return build_stern_gerlach();
    }
    if (name == "double-slit") {
        return build_double_slit();
    }
    if (name == "hardy") {
        return build_hardy();
    }
    if (name == "rigid-toy") {
        return build_rigid_toy(lattice.value_or(LatticeConfig{}));
    }
    if (name == "rigid-realistic") {
        if (!lattice) {
            return build_rigid_realistic();
        }
        // Centred disjoint groups: middle one or two particles and the ends.
        const Index n = lattice->particles;
        std::vector<Index> j_group;
        if (n % 2 == 0) {
            j_group = {n / 2 - 1, n / 2};
        } else {
            j_group = {n / 2};
        }
        const std::vector<Index> k_group{0, n - 1};
        return build_rigid_realistic(*lattice, j_group, k_group);
    }
    throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Verification

RelationResult check_relation(const Scenario &s, const Relation &r,
                              std::optional<double> tolerance) {
    const double tol = tolerance.value_or(r.tolerance);
    RelationResult out{r, describe(r), false, 0.0, {}};
    std::vector<Observable> ops;
    ops.reserve(r.operands.size());
    for (const auto &op : r.operands) {
        ops.push_back(s.resolve(op));
    }
    const DensityOperator &rho = s.state();

    switch (r.kind) {
    case RelationKind::perfect_correlation: {
        const CorrelationReport rep = check_perfect_correlation(ops[0], ops[1], rho, tol);
        out.pass = rep.holds;
        out.residual = std::max(rep.commutator_residual,
                                std::min(rep.state_action_residual, rep.reverse_residual));
        std::ostringstream os;
        os << "commutator " << rep.commutator_residual << ", state action "
           << rep.state_action_residual << ", reverse " << rep.reverse_residual;
        out.detail = os.str();
        break;
    }
    case RelationKind::commute:
    case RelationKind::not_commute: {
        out.residual = frobenius(commutator(ops[0], ops[1]));
        const bool commuting = is_commuting(ops[0], ops[1], tol);
        out.pass = (r.kind == RelationKind::commute) == commuting;
        out.detail = "commutator norm";
        break;
    }
    case RelationKind::state_equality: {
        const Matrix diff = ops[0].matrix() - ops[1].matrix();
        out.residual = frobenius(Matrix(diff * rho.matrix()));
        out.pass = out.residual <= tol;
        out.detail = "norm of the difference applied to the state";
        break;
    }
    case RelationKind::probability_positive: {
        const double worst = worst_commutator(ops, tol);
        if (worst >= 0.0) {
            out.residual = worst;
            out.detail = "operands do not commute; no joint probability";
            break;
        }
        out.residual = trace_product(rho.matrix(), product_of(ops)).real();
        out.pass = out.residual > tol;
        out.detail = "joint probability";
        break;
    }
    case RelationKind::conditional_probability_one: {
        const double worst = worst_commutator(ops, tol);
        if (worst >= 0.0) {
            out.residual = worst;
            out.detail = "operands do not commute; no joint probability";
            break;
        }
        const double p_cond = trace_product(rho.matrix(), ops[0].matrix()).real();
        const Projection miss = Projection(ops[1]).complement();
        const double p_miss =
            trace_product(rho.matrix(), Matrix(ops[0].matrix() * miss.matrix())).real();
        out.residual = std::abs(p_miss);
        out.pass = p_cond > tol && out.residual <= tol;
        std::ostringstream os;
        os << "P(" << r.operands[0] << "=1) = " << p_cond << ", P(" << r.operands[0] << "=1, "
           << r.operands[1] << "=0) = " << p_miss;
        out.detail = os.str();
        break;
    }
    }
    return out;
}

ScenarioReport verify_scenario(const Scenario &s, const SamplerConfig &cfg,
                               std::optional<double> tolerance) {
    ScenarioReport rep{s.name(), {}, {cfg.trials, cfg.seed, {}}, true};
    for (const auto &r : s.relations()) {
        rep.relations.push_back(check_relation(s, r, tolerance));
        rep.pass = rep.pass && rep.relations.back().pass;
    }
    if (cfg.trials == 0) {
        return rep;
    }

    auto &freq = rep.sampling.frequencies;
    for (const auto &r : s.relations()) {
        std::vector<Observable> ops;
        for (const auto &op : r.operands) {
            ops.push_back(s.resolve(op));
        }
        const std::string args = join(r.operands, ",");
        try {
            switch (r.kind) {
            case RelationKind::perfect_correlation: {
                const SampleSet set = sample_joint(ops, s.state(), cfg);
                const double tol = std::max(cfg.cluster_tol, 1e-12);
                freq.emplace_back("coincide(" + args + ")",
                                  empirical_frequency(set, [tol](const OutcomeView &v) {
                                      return std::abs(v.at(0) - v.at(1)) <= tol;
                                  }));
                break;
            }
            case RelationKind::probability_positive: {
                const SampleSet set = sample_joint(ops, s.state(), cfg);
                const std::size_t k = ops.size();
                freq.emplace_back("P(" + join(r.operands, "=1,") + "=1)",
                                  empirical_frequency(set, [k](const OutcomeView &v) {
                                      for (std::size_t i = 0; i < k; ++i) {
                                          if (std::abs(v.at(i) - 1.0) > 0.5) {
                                              return false;
                                          }
                                      }
                                      return true;
                                  }));
                break;
            }
            case RelationKind::conditional_probability_one: {
                const SampleSet set = sample_joint(ops, s.state(), cfg);
                std::size_t given = 0;
                std::size_t both = 0;
                for (const auto &rec : set.records) {
                    if (std::abs(rec.outcomes[0] - 1.0) <= 0.5) {
                        ++given;
                        both += std::abs(rec.outcomes[1] - 1.0) <= 0.5 ? 1 : 0;
                    }
                }
                if (given > 0) {
                    freq.emplace_back("P(" + r.operands[1] + "=1|" + r.operands[0] + "=1)",
                                      static_cast<double>(both) / static_cast<double>(given));
                }
                break;
            }
            default:
                break;
            }
        } catch (const NotCommuting &) {
            // Not jointly measurable: nothing to sample.
        }
    }
    return rep;
}

} // namespace qeval
