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

#include "qeval/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qeval {

namespace {

void require_same_dim(Index a, Index b, const char *op) {
    if (a != b) {
        std::ostringstream os;
        os << op << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionMismatch(os.str());
    }
}

double state_scale(const Observable &a, const Observable &t,
                   const DensityOperator &rho) {
    return std::max(1.0, (frobenius(a.matrix()) + frobenius(t.matrix())) *
                             frobenius(rho.matrix()));
}

double commutator_scale(const Observable &a, const Observable &b) {
    return std::max(1.0, frobenius(a.matrix()) * frobenius(b.matrix()));
}

double re_trace3(const Matrix &a, const Matrix &b, const Matrix &c) {
    const Matrix ab = a * b;
    return trace_product(ab, c).real();
}

void require_evaluator(const Projection &e, const Projection &t,
                       const DensityOperator &rho, double tol, const char *op) {
    const CorrelationReport rep = check_perfect_correlation(e, t, rho, tol);
    if (!rep.holds) {
        std::ostringstream os;
        os << op << ": '" << t.label() << "' does not evaluate '" << e.label()
           << "' in this state (commutator " << rep.commutator_residual
           << ", state action " << rep.state_action_residual << ")";
        throw PreconditionFailed(os.str());
    }
}

void require_in_commutant(const Projection &f, const Projection &t, double tol,
                          const char *op) {
    if (!is_commuting(f, t, tol)) {
        std::ostringstream os;
        os << op << ": '" << f.label() << "' does not commute with the evaluator '"
           << t.label() << "'";
        throw PreconditionFailed(os.str());
    }
}

} // namespace

CorrelationReport check_perfect_correlation(const Observable &a,
                                            const Observable &t,
                                            const DensityOperator &rho,
                                            double tol) {
    require_same_dim(a.dim(), t.dim(), "check_perfect_correlation");
    require_same_dim(a.dim(), rho.dim(), "check_perfect_correlation");
    const Matrix &r = rho.matrix();

    CorrelationReport rep{};
    rep.tolerance_used = tol;
    rep.commutator_residual = frobenius(commutator(a, t));
    const Matrix diff = a.matrix() - t.matrix();
    rep.state_action_residual = frobenius(Matrix(diff * r));
    rep.reverse_residual = frobenius(Matrix(r * diff));

    const double comm_limit = tol * commutator_scale(a, t);
    const double state_limit = tol * state_scale(a, t, rho);
    rep.holds = rep.commutator_residual <= comm_limit &&
                (rep.state_action_residual <= state_limit ||
                 rep.reverse_residual <= state_limit);
    return rep;
}

bool check_corollary_equivalence(const Observable &a, const Observable &t,
                                 const DensityOperator &rho, double tol) {
    if (!is_commuting(a, t, tol)) {
        throw NotCommuting("check_corollary_equivalence: '" + a.label() +
                           "' and '" + t.label() + "' do not commute");
    }
    const CorrelationReport rep = check_perfect_correlation(a, t, rho, tol);
    const double limit = tol * state_scale(a, t, rho);
    return (rep.state_action_residual <= limit) == (rep.reverse_residual <= limit);
}

double h_functional(const Projection &e, const Projection &f,
                    const DensityOperator &rho) {
    require_same_dim(e.dim(), f.dim(), "h_functional");
    require_same_dim(e.dim(), rho.dim(), "h_functional");
    // Tr(rho E F E) = Tr((E rho E) F)
    const Matrix ere = e.matrix() * rho.matrix() * e.matrix();
    return trace_product(ere, f.matrix()).real();
}

std::vector<AgreementVerdict>
verify_commuting_agreement(const Projection &e, const DensityOperator &rho,
                           std::span<const Projection> domain, double tol) {
    const Projection ec = e.complement();
    std::vector<AgreementVerdict> out;
    out.reserve(domain.size());
    for (const Projection &f : domain) {
        AgreementVerdict v{f.label(), false, 0.0, 0.0, true};
        if (!is_commuting(f, e, tol)) {
            v.skipped = true;
            out.push_back(v);
            continue;
        }
        const double joint = trace_product(rho.matrix(), Matrix(e.matrix() * f.matrix())).real();
        const double joint_c = trace_product(rho.matrix(), Matrix(ec.matrix() * f.matrix())).real();
        v.residual = std::abs(h_functional(e, f, rho) - joint);
        v.complement_residual = std::abs(h_functional(ec, f, rho) - joint_c);
        v.pass = v.residual <= tol && v.complement_residual <= tol;
        out.push_back(v);
    }
    return out;
}

bool verify_additivity(const Projection &e, const DensityOperator &rho,
                       std::span<const Projection> family, double tol) {
    if (family.empty()) {
        return true;
    }
    const Index dim = e.dim();
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const Matrix prod = family[i].matrix() * family[j].matrix();
            if (frobenius(prod) > tol * std::max(1.0, frobenius(family[i].matrix()))) {
                throw PreconditionFailed("verify_additivity: '" + family[i].label() +
                                         "' and '" + family[j].label() +
                                         "' are not orthogonal");
            }
        }
    }
    Matrix sum = zero_matrix(dim);
    for (const Projection &f : family) {
        sum += f.matrix();
    }
    // Throws NotProjection when the sum is not idempotent.
    const Projection total("sum", sum, std::max(tol, kDefaultTolerances.herm));

    const Projection ec = e.complement();
    double parts = 0.0;
    double parts_c = 0.0;
    for (const Projection &f : family) {
        parts += h_functional(e, f, rho);
        parts_c += h_functional(ec, f, rho);
    }
    return std::abs(h_functional(e, total, rho) - parts) <= tol &&
           std::abs(h_functional(ec, total, rho) - parts_c) <= tol;
}

double interference_term(const Projection &e, const Projection &f,
                         const DensityOperator &rho) {
    require_same_dim(e.dim(), f.dim(), "interference_term");
    require_same_dim(e.dim(), rho.dim(), "interference_term");
    const Projection ec = e.complement();
    const double value = 2.0 * re_trace3(rho.matrix(), e.matrix(),
                                         Matrix(f.matrix() * ec.matrix()));
    const double marginal = trace_product(rho.matrix(), f.matrix()).real();
    const double gap = marginal - h_functional(e, f, rho) -
                       h_functional(ec, f, rho) - value;
    if (std::abs(gap) > kDefaultTolerances.recon) {
        std::ostringstream os;
        os << "interference_term: decomposition of Tr(rho F) is off by " << gap;
        throw Error(os.str());
    }
    return value;
}

bool verify_marginal_sum(const Projection &e, const Projection &t,
                         const DensityOperator &rho,
                         std::span<const Projection> domain, double tol) {
    require_evaluator(e, t, rho, tol, "verify_marginal_sum");
    const Projection ec = e.complement();
    bool ok = true;
    for (const Projection &f : domain) {
        require_in_commutant(f, t, tol, "verify_marginal_sum");
        const double marginal = trace_product(rho.matrix(), f.matrix()).real();
        const double sum = h_functional(e, f, rho) + h_functional(ec, f, rho);
        ok = ok && std::abs(sum - marginal) <= tol;
    }
    return ok;
}

double evaluation_probability(const Projection &e, const Projection &t,
                              const Projection &f, const DensityOperator &rho,
                              double tol, double recon_tol) {
    require_evaluator(e, t, rho, tol, "evaluation_probability");
    require_in_commutant(f, t, tol, "evaluation_probability");
    const double value = trace_product(rho.matrix(), Matrix(t.matrix() * f.matrix())).real();
    const double h = h_functional(e, f, rho);
    if (std::abs(value - h) > recon_tol) {
        std::ostringstream os;
        os << "evaluation_probability: Tr(rho T F) = " << value
           << " differs from h(E&F) = " << h;
        throw PreconditionFailed(os.str());
    }
    return value;
}

double evaluation_probability_complement(const Projection &e, const Projection &t,
                                         const Projection &f,
                                         const DensityOperator &rho, double tol,
                                         double recon_tol) {
    require_evaluator(e, t, rho, tol, "evaluation_probability_complement");
    require_in_commutant(f, t, tol, "evaluation_probability_complement");
    const Projection tc = t.complement();
    const Projection ec = e.complement();
    const double value = trace_product(rho.matrix(), Matrix(tc.matrix() * f.matrix())).real();
    const double h = h_functional(ec, f, rho);
    if (std::abs(value - h) > recon_tol) {
        std::ostringstream os;
        os << "evaluation_probability_complement: Tr(rho T' F) = " << value
           << " differs from h(E'&F) = " << h;
        throw PreconditionFailed(os.str());
    }
    return value;
}

SpectralIdentityReport verify_spectral_identities(const Observable &a,
                                                  const Observable &t,
                                                  const DensityOperator &rho,
                                                  std::span<const Interval> intervals,
                                                  double tol, int max_power) {
    const CorrelationReport rep = check_perfect_correlation(a, t, rho, tol);
    if (!rep.holds) {
        throw PreconditionFailed("verify_spectral_identities: '" + a.label() + "' and '" +
                                 t.label() + "' are not perfectly correlated");
    }
    const Matrix &r = rho.matrix();
    const SpectralDecomposition sa = spectral_decompose(a);
    const SpectralDecomposition st = spectral_decompose(t);

    SpectralIdentityReport out{true, 0.0, 0.0};
    for (const Interval &iv : intervals) {
        const Projection pa = spectral_projector(sa, iv.lo, iv.hi);
        const Projection pt = spectral_projector(st, iv.lo, iv.hi);
        const Matrix diff = r * pa.matrix() - r * pt.matrix();
        out.max_interval_residual = std::max(out.max_interval_residual, frobenius(diff));
    }
    Matrix ra = r;
    Matrix rt = r;
    for (int j = 1; j <= max_power; ++j) {
        ra = ra * a.matrix();
        rt = rt * t.matrix();
        out.max_power_residual = std::max(out.max_power_residual, frobenius(Matrix(ra - rt)));
    }
    out.holds = out.max_interval_residual <= tol && out.max_power_residual <= tol;
    return out;
}

ConsistencyVerdict assess_consistency(const Projection &e, const Projection &t,
                                      const DensityOperator &rho,
                                      std::span<const Projection> domain,
                                      double tol) {
    ConsistencyVerdict v{true, true, true, 0.0, {}};

    for (const auto &a : verify_commuting_agreement(e, rho, domain, tol)) {
        if (!a.skipped) {
            v.max_violation = std::max({v.max_violation, a.residual, a.complement_residual});
            v.agreement_ok = v.agreement_ok && a.pass;
        }
    }

    for (const Projection &f : domain) {
        const std::vector<Projection> split{f, f.complement()};
        v.additivity_ok = v.additivity_ok && verify_additivity(e, rho, split, tol);
    }
    bool orthogonal = true;
    for (std::size_t i = 0; i < domain.size() && orthogonal; ++i) {
        for (std::size_t j = i + 1; j < domain.size(); ++j) {
            if (frobenius(Matrix(domain[i].matrix() * domain[j].matrix())) > tol) {
                orthogonal = false;
                break;
            }
        }
    }
    if (orthogonal && domain.size() > 1) {
        v.additivity_ok = v.additivity_ok && verify_additivity(e, rho, domain, tol);
    }

    v.marginal_ok = verify_marginal_sum(e, t, rho, domain, tol);
    const Projection ec = e.complement();
    for (const Projection &f : domain) {
        const double term = interference_term(e, f, rho);
        v.interference_terms.emplace_back(f.label(), term);
        const double marginal = trace_product(rho.matrix(), f.matrix()).real();
        const double gap = std::abs(h_functional(e, f, rho) + h_functional(ec, f, rho) - marginal);
        v.max_violation = std::max(v.max_violation, gap);
    }
    return v;
}

EvaluationPlan make_evaluation_plan(const Observable &target,
                                    const Observable &evaluator,
                                    const DensityOperator &state, double tol) {
    const CorrelationReport rep = check_perfect_correlation(target, evaluator, state, tol);
    if (!rep.holds) {
        throw PreconditionFailed("make_evaluation_plan: '" + evaluator.label() +
                                 "' is not perfectly correlated with '" +
                                 target.label() + "'");
    }
    return EvaluationPlan{target, evaluator, state,
                          "consistency domain: projections commuting with " +
                              evaluator.label()};
}

} // namespace qeval
