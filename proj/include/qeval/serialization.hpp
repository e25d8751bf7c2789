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
 * JSON encodings of matrices, scenarios and reports.
 *
 * A matrix is either dense, an array of rows of [re, im] pairs, or sparse,
 * {"dim": n, "entries": [[row, col, re, im], ...]}. Scenario files read
 *
 *   {"name": ..., "state": matrix, "observables": {label: matrix, ...},
 *    "relations": [{"kind": ..., "operands": [...], "tolerance": ...}, ...]}
 *
 * with optional "description" and per-relation "note".
 */

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qeval/evaluation.hpp"
#include "qeval/scenarios.hpp"

namespace qeval {

using Json = nlohmann::ordered_json;

/// Dimension above which export switches to the sparse encoding.
inline constexpr Index kDenseExportLimit = 64;

Json matrix_to_json(const Matrix &m);
/// `field` names the location in diagnostics. Throws ParseError.
Matrix matrix_from_json(const Json &j, const std::string &field);

Json scenario_to_json(const Scenario &s);
/// Throws ParseError for structural problems and the domain errors of
/// Scenario for invalid content.
Scenario scenario_from_json(const Json &j);

/// Parses text, reporting syntax errors with line and column.
Json parse_json_text(std::string_view text, const std::string &source);
Scenario load_scenario(const std::filesystem::path &path);
void save_scenario(const Scenario &s, const std::filesystem::path &path);

/// Every invariant violation of a scenario document (structure,
/// Hermiticity, unit trace, positivity, projection operands, labels), one
/// message per problem. Empty when the document is valid.
std::vector<std::string> validate_scenario_json(const Json &j);

Json report_to_json(const ScenarioReport &r);
Json to_json(const CorrelationReport &r);
Json to_json(const ConsistencyVerdict &v);

} // namespace qeval
