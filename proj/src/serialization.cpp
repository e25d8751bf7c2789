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

#include "qeval/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace qeval {

namespace {

[[noreturn]] void fail(const std::string &field, const std::string &what) {
    throw ParseError(field + ": " + what);
}

double number_at(const Json &j, const std::string &field) {
    if (!j.is_number()) {
        fail(field, "expected a number");
    }
    return j.get<double>();
}

Complex complex_at(const Json &j, const std::string &field) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        fail(field, "expected [re, im]");
    }
    return {number_at(j[0], field + "[0]"), number_at(j[1], field + "[1]")};
}

const Json &member(const Json &j, const char *key, const std::string &where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        fail(where, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

Relation relation_from_json(const Json &j, const std::string &field) {
    if (!j.is_object()) {
        fail(field, "expected an object");
    }
    const Json &kind = member(j, "kind", field);
    if (!kind.is_string()) {
        fail(field + ".kind", "expected a string");
    }
    Relation r{};
    try {
        r.kind = parse_relation_kind(kind.get<std::string>());
    } catch (const InvalidArgument &e) {
        fail(field + ".kind", e.what());
    }
    const Json &ops = member(j, "operands", field);
    if (!ops.is_array()) {
        fail(field + ".operands", "expected an array of labels");
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (!ops[i].is_string() || ops[i].get<std::string>().empty()) {
            fail(field + ".operands[" + std::to_string(i) + "]", "expected a label");
        }
        r.operands.push_back(ops[i].get<std::string>());
    }
    r.tolerance = kDefaultTolerances.recon;
    if (const auto it = j.find("tolerance"); it != j.end()) {
        r.tolerance = number_at(*it, field + ".tolerance");
    }
    if (const auto it = j.find("note"); it != j.end()) {
        if (!it->is_string()) {
            fail(field + ".note", "expected a string");
        }
        r.note = it->get<std::string>();
    }
    return r;
}

std::string operand_base(const std::string &op) {
    return !op.empty() && op.back() == '\'' ? op.substr(0, op.size() - 1) : op;
}

double idempotency(const Matrix &m) {
    const Matrix sq = m * m;
    return frobenius(Matrix(sq - m)) / std::max(1.0, frobenius(m));
}

} // namespace

Json matrix_to_json(const Matrix &m) {
    if (m.rows() <= kDenseExportLimit && m.rows() == m.cols()) {
        const DenseMatrix d = to_dense(m);
        Json rows = Json::array();
        for (Index r = 0; r < d.rows(); ++r) {
            Json row = Json::array();
            for (Index c = 0; c < d.cols(); ++c) {
                row.push_back(Json::array({d(r, c).real(), d(r, c).imag()}));
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }
    std::vector<std::tuple<Index, Index, Complex>> entries;
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (Matrix::InnerIterator it(m, k); it; ++it) {
            if (it.value() != Complex(0.0)) {
                entries.emplace_back(it.row(), it.col(), it.value());
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) <
               std::tie(std::get<0>(b), std::get<1>(b));
    });
    Json list = Json::array();
    for (const auto &[r, c, v] : entries) {
        list.push_back(Json::array({r, c, v.real(), v.imag()}));
    }
    return Json{{"dim", m.rows()}, {"entries", std::move(list)}};
}

Matrix matrix_from_json(const Json &j, const std::string &field) {
    if (j.is_object()) {
        const Json &dim_j = member(j, "dim", field);
        if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
            fail(field + ".dim", "expected a positive integer");
        }
        const auto n = static_cast<Index>(dim_j.get<long long>());
        const Json &entries = member(j, "entries", field);
        if (!entries.is_array()) {
            fail(field + ".entries", "expected an array");
        }
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(entries.size());
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const std::string f = field + ".entries[" + std::to_string(k) + "]";
            const Json &e = entries[k];
            if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
                !e[1].is_number_integer()) {
                fail(f, "expected [row, col, re, im]");
            }
            const auto r = static_cast<Index>(e[0].get<long long>());
            const auto c = static_cast<Index>(e[1].get<long long>());
            if (r < 0 || r >= n || c < 0 || c >= n) {
                fail(f, "index out of range for dim " + std::to_string(n));
            }
            trips.emplace_back(r, c, Complex(number_at(e[2], f), number_at(e[3], f)));
        }
        Matrix m(n, n);
        m.setFromTriplets(trips.begin(), trips.end());
        m.makeCompressed();
        return m;
    }
    if (!j.is_array() || j.empty()) {
        fail(field, "expected a non-empty array of rows or a sparse object");
    }
    const auto n = static_cast<Index>(j.size());
    DenseMatrix d(n, n);
    for (Index r = 0; r < n; ++r) {
        const std::string f = field + "[" + std::to_string(r) + "]";
        const Json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n) {
            fail(f, "row has " + std::to_string(row.is_array() ? row.size() : 0) +
                        " entries, expected " + std::to_string(n));
        }
        for (Index c = 0; c < n; ++c) {
            d(r, c) = complex_at(row[static_cast<std::size_t>(c)],
                                 f + "[" + std::to_string(c) + "]");
        }
    }
    return to_sparse(d);
}

Json scenario_to_json(const Scenario &s) {
    Json obs = Json::object();
    for (const auto &o : s.observables()) {
        obs[o.label()] = matrix_to_json(o.matrix());
    }
    Json rel = Json::array();
    for (const auto &r : s.relations()) {
        Json item{{"kind", std::string(to_string(r.kind))},
                  {"operands", r.operands},
                  {"tolerance", r.tolerance}};
        if (!r.note.empty()) {
            item["note"] = r.note;
        }
        rel.push_back(std::move(item));
    }
    Json out{{"name", s.name()}};
    if (!s.description().empty()) {
        out["description"] = s.description();
    }
    out["state"] = matrix_to_json(s.state().matrix());
    out["observables"] = std::move(obs);
    out["relations"] = std::move(rel);
    return out;
}

Scenario scenario_from_json(const Json &j) {
    if (!j.is_object()) {
        fail("scenario", "expected a JSON object");
    }
    const Json &name = member(j, "name", "scenario");
    if (!name.is_string()) {
        fail("name", "expected a string");
    }
    std::string description;
    if (const auto it = j.find("description"); it != j.end() && it->is_string()) {
        description = it->get<std::string>();
    }
    const Matrix state_m = matrix_from_json(member(j, "state", "scenario"), "state");

    const Json &obs_j = member(j, "observables", "scenario");
    if (!obs_j.is_object()) {
        fail("observables", "expected an object mapping labels to matrices");
    }
    std::vector<Observable> obs;
    for (const auto &[label, m] : obs_j.items()) {
        const std::string field = "observables." + label;
        try {
            obs.emplace_back(label, matrix_from_json(m, field));
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            fail(field, e.what());
        }
    }

    const Json &rel_j = member(j, "relations", "scenario");
    if (!rel_j.is_array()) {
        fail("relations", "expected an array");
    }
    std::vector<Relation> rel;
    for (std::size_t k = 0; k < rel_j.size(); ++k) {
        rel.push_back(relation_from_json(rel_j[k], "relations[" + std::to_string(k) + "]"));
    }

    try {
        return Scenario(name.get<std::string>(), DensityOperator(state_m), std::move(obs),
                        std::move(rel), std::move(description));
    } catch (const InvalidState &e) {
        fail("state", e.what());
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        fail("scenario", e.what());
    }
}

Json parse_json_text(std::string_view text, const std::string &source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << source << ":" << line << ":" << col << ": malformed JSON";
        const std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) {
            os << " (" << what.substr(pos) << ")";
        }
        throw ParseError(os.str());
    }
}

Scenario load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const Json j = parse_json_text(buf.str(), path.string());
    try {
        return scenario_from_json(j);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_scenario(const Scenario &s, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << scenario_to_json(s).dump(1) << '\n';
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::vector<std::string> validate_scenario_json(const Json &j) {
    std::vector<std::string> issues;
    if (!j.is_object()) {
        issues.emplace_back("scenario: expected a JSON object");
        return issues;
    }
    if (const auto it = j.find("name"); it == j.end() || !it->is_string()) {
        issues.emplace_back("name: missing or not a string");
    }

    Index dim = -1;
    if (const auto it = j.find("state"); it == j.end()) {
        issues.emplace_back("state: missing");
    } else {
        try {
            const Matrix m = matrix_from_json(*it, "state");
            dim = m.rows();
            const double herm = hermiticity_defect(m);
            if (herm > kDefaultTolerances.herm) {
                std::ostringstream os;
                os << "state: not Hermitian (relative defect " << herm << ")";
                issues.push_back(os.str());
            }
            const Complex tr = trace(m);
            if (std::abs(tr - Complex(1.0)) > kDefaultTolerances.trace) {
                std::ostringstream os;
                os << "state trace is " << tr.real() << " (expected 1)";
                issues.push_back(os.str());
            }
            if (herm <= kDefaultTolerances.herm) {
                const Matrix sym = (m + Matrix(m.adjoint())) * Complex(0.5);
                const double lowest = decompose_hermitian(sym, 0.0).clusters().front().eigenvalue;
                if (lowest < -kDefaultTolerances.eig) {
                    std::ostringstream os;
                    os << "state: not positive semidefinite (eigenvalue " << lowest << ")";
                    issues.push_back(os.str());
                }
            }
        } catch (const Error &e) {
            issues.emplace_back(e.what());
        }
    }

    std::set<std::string> labels;
    std::set<std::string> projections;
    if (const auto it = j.find("observables"); it == j.end() || !it->is_object()) {
        issues.emplace_back("observables: missing or not an object");
    } else {
        for (const auto &[label, mj] : it->items()) {
            const std::string field = "observables." + label;
            labels.insert(label);
            if (label.empty() || label.back() == '\'') {
                issues.push_back(field + ": invalid label '" + label + "'");
            }
            try {
                const Matrix m = matrix_from_json(mj, field);
                if (dim >= 0 && m.rows() != dim) {
                    issues.push_back(field + ": dimension " + std::to_string(m.rows()) +
                                     " differs from the state dimension " +
                                     std::to_string(dim));
                }
                const double herm = hermiticity_defect(m);
                if (herm > kDefaultTolerances.herm) {
                    std::ostringstream os;
                    os << "observable '" << label << "' is not Hermitian (relative defect "
                       << herm << ")";
                    issues.push_back(os.str());
                } else if (idempotency(m) <= kDefaultTolerances.herm) {
                    projections.insert(label);
                }
            } catch (const Error &e) {
                issues.emplace_back(e.what());
            }
        }
    }

    if (const auto it = j.find("relations"); it == j.end() || !it->is_array()) {
        issues.emplace_back("relations: missing or not an array");
    } else {
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string field = "relations[" + std::to_string(k) + "]";
            Relation r{};
            try {
                r = relation_from_json((*it)[k], field);
            } catch (const Error &e) {
                issues.emplace_back(e.what());
                continue;
            }
            if (!arity_ok(r.kind, r.operands.size())) {
                issues.push_back(field + ": wrong number of operands (" +
                                 std::to_string(r.operands.size()) + ") for " +
                                 std::string(to_string(r.kind)));
            }
            if (!(r.tolerance > 0.0)) {
                issues.push_back(field + ".tolerance: must be positive");
            }
            for (const auto &op : r.operands) {
                const std::string base = operand_base(op);
                if (labels.count(base) == 0) {
                    issues.push_back(field + ": unknown label '" + base + "'");
                } else if ((needs_projections(r.kind) || op.back() == '\'') &&
                           projections.count(base) == 0) {
                    issues.push_back(field + ": operand '" + base + "' is not a projection");
                }
            }
        }
    }
    return issues;
}

Json report_to_json(const ScenarioReport &r) {
    Json rel = Json::array();
    for (const auto &x : r.relations) {
        rel.push_back(Json{{"kind", std::string(to_string(x.relation.kind))},
                           {"operands", x.relation.operands},
                           {"paper_ref", x.reference},
                           {"pass", x.pass},
                           {"residual", x.residual}});
    }
    Json freq = Json::object();
    for (const auto &[label, value] : r.sampling.frequencies) {
        freq[label] = value;
    }
    return Json{{"scenario", r.scenario},
                {"relations", std::move(rel)},
                {"sampling",
                 {{"trials", r.sampling.trials},
                  {"seed", r.sampling.seed},
                  {"frequencies", std::move(freq)}}},
                {"pass", r.pass}};
}

Json to_json(const CorrelationReport &r) {
    return Json{{"holds", r.holds},
                {"commutator_residual", r.commutator_residual},
                {"state_action_residual", r.state_action_residual},
                {"reverse_residual", r.reverse_residual},
                {"tolerance", r.tolerance_used}};
}

Json to_json(const ConsistencyVerdict &v) {
    Json terms = Json::object();
    for (const auto &[label, value] : v.interference_terms) {
        terms[label] = value;
    }
    return Json{{"agreement_ok", v.agreement_ok},
                {"additivity_ok", v.additivity_ok},
                {"marginal_ok", v.marginal_ok},
                {"max_violation", v.max_violation},
                {"interference_terms", std::move(terms)}};
}

} // namespace qeval
