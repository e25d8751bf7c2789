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
 * Command-line front end, callable in-process for testing.
 *
 *   qeval list
 *   qeval run NAME | --file PATH  [--trials N] [--seed S] [--tolerance EPS]
 *                                 [--out PATH] [--format json|csv|text]
 *   qeval check --file PATH
 *   qeval export NAME --out PATH
 *
 * Exit codes: 0 all relations pass, 1 some relation fails, 2 usage or IO
 * error. QEVAL_TOLERANCE sets the tolerance when --tolerance is absent.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qeval/lattice.hpp"
#include "qeval/scenarios.hpp"

namespace qeval {

inline constexpr int kExitPass = 0;
inline constexpr int kExitRelationFailure = 1;
inline constexpr int kExitUsage = 2;

enum class ReportFormat { json, csv, text };

struct RunConfig {
    std::string scenario;  ///< built-in name, or a path when from_file
    bool from_file = false;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 42;
    /// Replaces every relation's own tolerance when set.
    std::optional<double> tolerance;
    std::optional<std::filesystem::path> output_path;
    ReportFormat format = ReportFormat::json;
    /// Lattice for the rigid built-ins; their defaults when unset.
    std::optional<LatticeConfig> lattice;
};

/// Built-in names with one-line summaries, one per line.
std::string cmd_list();
std::string format_report(const ScenarioReport &r, ReportFormat format);
int cmd_run(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_check(const std::filesystem::path &file, std::ostream &out, std::ostream &err);
int cmd_export(const std::string &name, const std::filesystem::path &path,
               const std::optional<LatticeConfig> &lattice, std::ostream &out,
               std::ostream &err);

/// args excludes the program name. env_tolerance is the value of
/// QEVAL_TOLERANCE, if set.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::optional<std::string> &env_tolerance = std::nullopt);

} // namespace qeval
