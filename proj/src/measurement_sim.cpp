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

#include "qeval/measurement_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>

namespace qeval {

namespace {

/// Mismatch weights below this are rounding noise rather than physics.
constexpr double kZeroProbability = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform in [0, 1), a pure function of (seed, trial).
double trial_uniform(std::uint64_t seed, std::uint64_t trial) {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(~trial));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void require_family(std::span<const Observable> family, const DensityOperator &rho,
                    double commute_tol, const char *op) {
    if (family.empty()) {
        throw InvalidArgument(std::string(op) + ": empty observable family");
    }
    for (const Observable &o : family) {
        if (o.dim() != rho.dim()) {
            throw DimensionMismatch(std::string(op) + ": '" + o.label() +
                                    "' does not match the state dimension");
        }
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (!is_commuting(family[i], family[j], commute_tol)) {
                throw NotCommuting(std::string(op) + ": '" + family[i].label() + "' and '" +
                                   family[j].label() +
                                   "' do not commute and cannot be measured together");
            }
        }
    }
}

/// Smallest set of coordinates containing supp(rho) and closed under the
/// sparsity graphs of the family.
std::vector<Index> reachable_coordinates(std::span<const Observable> family,
                                         const Matrix &rho) {
    const Index n = rho.rows();
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
    for (const Observable &o : family) {
        const Matrix &m = o.matrix();
        for (Index k = 0; k < m.outerSize(); ++k) {
            for (Matrix::InnerIterator it(m, k); it; ++it) {
                if (it.row() != it.col() && it.value() != Complex(0.0)) {
                    adj[it.row()].push_back(it.col());
                }
            }
        }
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<Index> queue;
    for (Index k = 0; k < rho.outerSize(); ++k) {
        for (Matrix::InnerIterator it(rho, k); it; ++it) {
            if (it.value() != Complex(0.0)) {
                for (Index idx : {it.row(), it.col()}) {
                    if (!seen[idx]) {
                        seen[idx] = 1;
                        queue.push_back(idx);
                    }
                }
            }
        }
    }
    while (!queue.empty()) {
        const Index i = queue.front();
        queue.pop_front();
        for (Index j : adj[i]) {
            if (!seen[j]) {
                seen[j] = 1;
                queue.push_back(j);
            }
        }
    }
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i) {
        if (seen[i]) {
            out.push_back(i);
        }
    }
    return out;
}

Matrix selection(Index dim, const std::vector<Index> &coords) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) {
        trips.emplace_back(coords[k], static_cast<Index>(k), Complex(1.0));
    }
    Matrix s(dim, static_cast<Index>(coords.size()));
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

double coincidence_tolerance(const SamplerConfig &cfg) {
    return std::max(cfg.cluster_tol, 1e-12);
}

} // namespace

std::vector<CellProbability> joint_distribution(std::span<const Observable> family,
                                                const DensityOperator &rho,
                                                const SamplerConfig &cfg) {
    require_family(family, rho, cfg.commute_tol, "joint_distribution");

    const std::vector<Index> coords = reachable_coordinates(family, rho.matrix());
    const Matrix sel = selection(rho.dim(), coords);
    const Matrix sel_t = sel.adjoint();

    std::vector<Observable> restricted;
    restricted.reserve(family.size());
    for (const Observable &o : family) {
        Matrix m = sel_t * o.matrix() * sel;
        // The restriction of a Hermitian matrix is Hermitian; skip the check.
        restricted.emplace_back(o.label(), std::move(m), 1.0);
    }
    const Matrix r = sel_t * rho.matrix() * sel;

    std::vector<CellProbability> out;
    for (JointCell &cell : simultaneous_decompose(restricted, cfg.cluster_tol)) {
        const Matrix rb = r * cell.basis;
        const Matrix brb = Matrix(cell.basis.adjoint()) * rb;
        const double p = std::max(0.0, trace(brb).real());
        out.push_back({std::move(cell.values), p});
    }
    return out;
}

std::size_t SampleSet::column(std::string_view label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw InvalidArgument("no sampled observable labelled '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

SampleSet sample_joint(std::span<const Observable> family, const DensityOperator &rho,
                       const SamplerConfig &cfg) {
    if (cfg.trials == 0) {
        throw InvalidArgument("sample_joint: trials must be at least 1");
    }
    const std::vector<CellProbability> cells = joint_distribution(family, rho, cfg);

    std::vector<double> cdf;
    cdf.reserve(cells.size());
    double acc = 0.0;
    for (const auto &c : cells) {
        acc += c.probability;
        cdf.push_back(acc);
    }
    if (!(acc > 0.0)) {
        throw InvalidState("sample_joint: joint distribution has zero total weight");
    }

    std::size_t last = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].probability > 0.0) {
            last = i;
        }
    }

    SampleSet out;
    for (const Observable &o : family) {
        out.labels.push_back(o.label());
    }
    out.records.reserve(static_cast<std::size_t>(cfg.trials));
    for (std::uint64_t k = 0; k < cfg.trials; ++k) {
        const double u = trial_uniform(cfg.seed, k) * acc;
        // cdf[i] > u >= cdf[i - 1] selects a cell of positive weight.
        auto idx = static_cast<std::size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (idx == cells.size()) {
            idx = last;
        }
        out.records.push_back({k, cells[idx].values});
    }
    return out;
}

double empirical_frequency(const SampleSet &samples,
                           const std::function<bool(const OutcomeView &)> &predicate) {
    if (samples.records.empty()) {
        throw InvalidArgument("empirical_frequency: no records");
    }
    std::size_t hits = 0;
    for (const auto &rec : samples.records) {
        if (predicate(OutcomeView(samples, rec))) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples.records.size());
}

double binomial_bound(double p, std::uint64_t trials, double sigmas) {
    if (trials == 0) {
        throw InvalidArgument("binomial_bound: trials must be at least 1");
    }
    const double q = std::clamp(p, 0.0, 1.0);
    return sigmas * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

CoincidenceAnalysis analyse_coincidence(const Observable &e, const Observable &t,
                                        const DensityOperator &rho,
                                        const SamplerConfig &cfg) {
    const std::vector<Observable> pair{e, t};
    const double tol = coincidence_tolerance(cfg);

    double mismatch = 0.0;
    for (const auto &cell : joint_distribution(pair, rho, cfg)) {
        if (std::abs(cell.values[0] - cell.values[1]) > tol) {
            mismatch += cell.probability;
        }
    }
    const SampleSet samples = sample_joint(pair, rho, cfg);
    std::uint64_t misses = 0;
    for (const auto &rec : samples.records) {
        if (std::abs(rec.outcomes[0] - rec.outcomes[1]) > tol) {
            ++misses;
        }
    }
    const double p = mismatch > kZeroProbability ? mismatch : 0.0;
    const bool gray = p > 0.0 && p < 10.0 / static_cast<double>(cfg.trials);
    return CoincidenceAnalysis{misses == 0, misses, p, gray};
}

bool coincidence_check(const Observable &e, const Observable &t,
                       const DensityOperator &rho, const SamplerConfig &cfg) {
    if (cfg.trials == 0) {
        throw InvalidArgument("coincidence_check: trials must be at least 1");
    }
    const std::vector<Observable> pair{e, t};
    const SampleSet samples = sample_joint(pair, rho, cfg);
    const double tol = coincidence_tolerance(cfg);
    return std::all_of(samples.records.begin(), samples.records.end(),
                       [tol](const MeasurementRecord &r) {
                           return std::abs(r.outcomes[0] - r.outcomes[1]) <= tol;
                       });
}

void write_records_csv(std::ostream &out, const SampleSet &samples) {
    out << "trial";
    for (const auto &l : samples.labels) {
        out << ',' << l;
    }
    out << '\n';
    char buf[64];
    for (const auto &rec : samples.records) {
        out << rec.trial_index;
        for (double v : rec.outcomes) {
            // -0 prints as 0.
            const double shown = std::abs(v) < 1e-300 ? 0.0 : v;
            std::snprintf(buf, sizeof buf, "%.12g", shown);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace qeval
