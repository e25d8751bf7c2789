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

#include "qeval/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qeval/serialization.hpp"

namespace qeval {

namespace {

std::string fmt_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string join(const std::vector<std::string> &parts, const char *sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i == 0 ? "" : sep) + parts[i];
    }
    return out;
}

std::optional<double> parse_tolerance(const std::string &text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        return std::nullopt;
    }
    if (used != text.size() || !(v > 0.0)) {
        return std::nullopt;
    }
    return v;
}

} // namespace

std::string cmd_list() {
    std::ostringstream os;
    for (const auto &b : builtin_scenarios()) {
        os << std::left << std::setw(17) << b.name << b.summary << '\n';
    }
    return os.str();
}

std::string format_report(const ScenarioReport &r, ReportFormat format) {
    std::ostringstream os;
    switch (format) {
    case ReportFormat::json:
        os << report_to_json(r).dump(2) << '\n';
        break;
    case ReportFormat::csv:
        os << "kind,operands,pass,residual,paper_ref\n";
        for (const auto &x : r.relations) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", x.residual);
            os << to_string(x.relation.kind) << ',' << join(x.relation.operands, ";") << ','
               << (x.pass ? "true" : "false") << ',' << buf << ',' << csv_quote(x.reference)
               << '\n';
        }
        break;
    case ReportFormat::text:
        os << "scenario " << r.scenario << '\n';
        for (const auto &x : r.relations) {
            os << (x.pass ? "  PASS " : "  FAIL ") << to_string(x.relation.kind) << '('
               << join(x.relation.operands, ", ") << ")  residual "
               << fmt_number(x.residual) << "  -- " << x.reference << '\n';
        }
        if (!r.sampling.frequencies.empty()) {
            os << "sampling: " << r.sampling.trials << " trials, seed " << r.sampling.seed
               << '\n';
            for (const auto &[label, value] : r.sampling.frequencies) {
                os << "  " << label << " = " << fmt_number(value) << '\n';
            }
        }
        os << (r.pass ? "PASS" : "FAIL") << '\n';
        break;
    }
    return os.str();
}

int cmd_run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    if (cfg.trials < 1) {
        err << "error: --trials must be at least 1\n";
        return kExitUsage;
    }
    if (cfg.tolerance && !(*cfg.tolerance > 0.0)) {
        err << "error: tolerance must be positive\n";
        return kExitUsage;
    }
    std::optional<Scenario> scenario;
    try {
        scenario = cfg.from_file ? load_scenario(cfg.scenario)
                                 : build_builtin(cfg.scenario, cfg.lattice);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    SamplerConfig sampler;
    sampler.trials = cfg.trials;
    sampler.seed = cfg.seed;
    ScenarioReport report;
    try {
        report = verify_scenario(*scenario, sampler, cfg.tolerance);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::string text = format_report(report, cfg.format);
    if (cfg.output_path) {
        std::ofstream file(*cfg.output_path, std::ios::binary);
        if (!(file << text)) {
            err << "error: cannot write '" << cfg.output_path->string() << "'\n";
            return kExitUsage;
        }
    } else {
        out << text;
    }
    return report.pass ? kExitPass : kExitRelationFailure;
}

int cmd_check(const std::filesystem::path &file, std::ostream &out, std::ostream &err) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << file.string() << "'\n";
        return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::vector<std::string> issues;
    try {
        issues = validate_scenario_json(parse_json_text(buf.str(), file.string()));
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (!issues.empty()) {
        for (const auto &i : issues) {
            err << file.string() << ": " << i << '\n';
        }
        return kExitUsage;
    }
    out << file.string() << ": ok\n";
    return kExitPass;
}

int cmd_export(const std::string &name, const std::filesystem::path &path,
               const std::optional<LatticeConfig> &lattice, std::ostream &out,
               std::ostream &err) {
    try {
        save_scenario(build_builtin(name, lattice), path);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    out << "wrote " << path.string() << '\n';
    return kExitPass;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::optional<std::string> &env_tolerance) {
    CLI::App app{"Evaluation of quantum observables through perfectly correlated partners",
                 "qeval"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list", "List the built-in scenarios");

    RunConfig run_cfg;
    std::string run_name;
    std::string run_file;
    double tolerance = 0.0;
    std::string out_path;
    Index sites = 0;
    Index particles = 0;
    std::string profile = "gaussian";
    const std::map<std::string, ReportFormat> formats{
        {"json", ReportFormat::json}, {"csv", ReportFormat::csv}, {"text", ReportFormat::text}};
    const std::map<std::string, Profile> profiles{{"gaussian", Profile::gaussian},
                                                  {"uniform", Profile::uniform}};

    auto add_lattice_options = [&](CLI::App *cmd) {
        cmd->add_option("--sites", sites, "Lattice sites for rigid scenarios")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--particles", particles, "Particles for rigid-realistic")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--profile", profile, "Rigid state profile")
            ->check(CLI::IsMember({"gaussian", "uniform"}));
    };

    auto *run = app.add_subcommand("run", "Verify a scenario and report");
    auto *run_name_opt = run->add_option("name", run_name, "Built-in scenario name");
    auto *run_file_opt = run->add_option("--file", run_file, "Scenario JSON file");
    run_name_opt->excludes(run_file_opt);
    run->add_option("--trials", run_cfg.trials, "Sampling trials")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    run->add_option("--seed", run_cfg.seed, "Sampling seed");
    auto *tol_opt = run->add_option("--tolerance", tolerance, "Tolerance for every relation")
                        ->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "Write the report here");
    run->add_option("--format", run_cfg.format, "Report format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    add_lattice_options(run);

    std::string check_file;
    auto *check = app.add_subcommand("check", "Validate a scenario file");
    check->add_option("--file", check_file, "Scenario JSON file")->required();

    std::string export_name;
    std::string export_path;
    auto *exp = app.add_subcommand("export", "Write a built-in scenario as JSON");
    exp->add_option("name", export_name, "Built-in scenario name")->required();
    exp->add_option("--out", export_path, "Output path")->required();
    add_lattice_options(exp);

    std::vector<std::string> argv_store{"qeval"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    auto lattice_for = [&](const std::string &name) -> std::optional<LatticeConfig> {
        if (sites == 0 && particles == 0 && profile == "gaussian") {
            return std::nullopt;
        }
        LatticeConfig cfg;
        if (name == "rigid-realistic") {
            cfg.sites = 6;
        }
        if (sites != 0) {
            cfg.sites = sites;
        }
        if (particles != 0) {
            cfg.particles = particles;
        }
        cfg.profile = profiles.at(profile);
        return cfg;
    };

    if (list->parsed()) {
        out << cmd_list();
        return kExitPass;
    }
    if (check->parsed()) {
        return cmd_check(check_file, out, err);
    }
    if (exp->parsed()) {
        return cmd_export(export_name, export_path, lattice_for(export_name), out, err);
    }

    // run
    if (run_name.empty() == run_file.empty()) {
        err << "error: run needs a scenario NAME or --file PATH\n";
        return kExitUsage;
    }
    run_cfg.from_file = !run_file.empty();
    run_cfg.scenario = run_cfg.from_file ? run_file : run_name;
    if (*tol_opt) {
        run_cfg.tolerance = tolerance;
    } else if (env_tolerance) {
        run_cfg.tolerance = parse_tolerance(*env_tolerance);
        if (!run_cfg.tolerance) {
            err << "error: QEVAL_TOLERANCE must be a positive number, got '" << *env_tolerance
                << "'\n";
            return kExitUsage;
        }
    }
    if (!out_path.empty()) {
        run_cfg.output_path = out_path;
    }
    if (!run_cfg.from_file) {
        run_cfg.lattice = lattice_for(run_name);
    }
    return cmd_run(run_cfg, out, err);
}

} // namespace qeval
