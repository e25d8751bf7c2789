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
 * Monte Carlo simulation of simultaneous measurements of commuting
 * observables. Each trial draws one joint spectral cell P with probability
 * Tr(rho P) and reports the value of every observable on that cell.
 *
 * Trial k uses a random number derived only from (seed, k), so the record
 * list does not depend on evaluation order.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qeval/hilbert_core.hpp"

namespace qeval {

struct SamplerConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 42;
    double cluster_tol = kDefaultTolerances.cluster;
    /// Pairwise commutation tolerance for accepting a family.
    double commute_tol = kDefaultTolerances.recon;
};

/// One joint spectral cell of a commuting family and its Born weight.
struct CellProbability {
    std::vector<double> values;
    double probability;
};

/// Joint cells of the family restricted to the part of the space the state
/// can reach, with probabilities Tr(rho P) clamped at zero. Throws
/// NotCommuting unless the family is pairwise commuting.
std::vector<CellProbability> joint_distribution(std::span<const Observable> family,
                                                const DensityOperator &rho,
                                                const SamplerConfig &cfg = {});

struct MeasurementRecord {
    std::uint64_t trial_index;
    /// Outcome of each observable, in the order of SampleSet::labels.
    std::vector<double> outcomes;
};

struct SampleSet {
    std::vector<std::string> labels;
    std::vector<MeasurementRecord> records;

    /// Column of a label; throws InvalidArgument when absent.
    [[nodiscard]] std::size_t column(std::string_view label) const;
};

/// Read access to one record by label.
class OutcomeView {
  public:
    OutcomeView(const SampleSet &set, const MeasurementRecord &record)
        : set_(&set), record_(&record) {}
    [[nodiscard]] double operator[](std::string_view label) const {
        return record_->outcomes[set_->column(label)];
    }
    [[nodiscard]] double at(std::size_t column) const {
        return record_->outcomes.at(column);
    }

  private:
    const SampleSet *set_;
    const MeasurementRecord *record_;
};

/// Throws NotCommuting for a non-commuting family and InvalidArgument for
/// trials == 0 or an empty family.
SampleSet sample_joint(std::span<const Observable> family,
                       const DensityOperator &rho, const SamplerConfig &cfg = {});

/// Fraction of records satisfying the predicate. Throws InvalidArgument on
/// an empty record list.
double empirical_frequency(const SampleSet &samples,
                           const std::function<bool(const OutcomeView &)> &predicate);

/// 4-sigma style binomial half-width: sigmas * sqrt(p (1 - p) / trials).
double binomial_bound(double p, std::uint64_t trials, double sigmas = 4.0);

/// Sampled and exact view of whether E and T always agree.
struct CoincidenceAnalysis {
    bool coincide;                ///< outcomes agreed in every trial
    std::uint64_t mismatches;     ///< trials with differing outcomes
    double mismatch_probability;  ///< exact weight of the disagreeing cells
    /// 0 < mismatch_probability < 10 / trials: sampling cannot be expected
    /// to witness the mismatch, so no verdict is drawn from it.
    bool gray_zone;
};

CoincidenceAnalysis analyse_coincidence(const Observable &e, const Observable &t,
                                        const DensityOperator &rho,
                                        const SamplerConfig &cfg = {});

/// True iff the sampled outcomes of E and T coincide in every trial.
/// Throws NotCommuting.
bool coincidence_check(const Observable &e, const Observable &t,
                       const DensityOperator &rho, const SamplerConfig &cfg = {});

/// CSV with header "trial,label1,label2,..." and 12 significant digits.
void write_records_csv(std::ostream &out, const SampleSet &samples);

} // namespace qeval
