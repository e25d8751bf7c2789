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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qeval/cli.hpp"
#include "qeval/serialization.hpp"

namespace qeval {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string> &args, std::optional<std::string> env = std::nullopt) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err, env);
    return {code, out.str(), err.str()};
}

fs::path temp(const std::string &name) { return fs::temp_directory_path() / ("qeval_cli_" + name); }

std::string write(const std::string &name, const std::string &text) {
    const fs::path p = temp(name);
    std::ofstream(p) << text;
    return p.string();
}

TEST(List, FiveBuiltinsStable) {
    const std::string a = cmd_list();
    EXPECT_NE(a.find("hardy"), std::string::npos);
    EXPECT_NE(a.find("rigid-toy"), std::string::npos);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
    EXPECT_EQ(a, cmd_list());
    const CliRun r = run({"list"});
    EXPECT_EQ(r.code, kExitPass);
    EXPECT_EQ(r.out, a);
}

TEST(RunBuiltin, HardyReportsPositiveJointFrequency) {
    const CliRun r = run({"run", "hardy", "--trials", "20000"});
    ASSERT_EQ(r.code, kExitPass) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("pass"), true);
    EXPECT_GT(j.at("sampling").at("frequencies").at("P(L1=1,R2'=1)").get<double>(), 0.0);
}

TEST(RunBuiltin, EveryBuiltinPassesByDefault) {
    for (const BuiltinInfo &b : builtin_scenarios()) {
        EXPECT_EQ(run({"run", b.name, "--trials", "5000"}).code, kExitPass) << b.name;
    }
}

TEST(RunBuiltin, ByteIdenticalReruns) {
    const CliRun a = run({"run", "double-slit", "--trials", "3000", "--seed", "9"});
    const CliRun b = run({"run", "double-slit", "--trials", "3000", "--seed", "9"});
    EXPECT_EQ(a.out, b.out);
}

TEST(RunBuiltin, Formats) {
    const CliRun text = run({"run", "stern-gerlach", "--trials", "100", "--format", "text"});
    EXPECT_EQ(text.code, kExitPass);
    EXPECT_NE(text.out.find("stern-gerlach"), std::string::npos);
    const CliRun csv = run({"run", "stern-gerlach", "--trials", "100", "--format", "csv"});
    EXPECT_EQ(csv.code, kExitPass);
    EXPECT_EQ(csv.out.rfind("kind,operands,pass,residual,paper_ref", 0), 0U);
    EXPECT_EQ(run({"run", "stern-gerlach", "--format", "xml"}).code, kExitUsage);
}

TEST(RunBuiltin, LatticeOptions) {
    EXPECT_EQ(run({"run", "rigid-toy", "--sites", "10", "--trials", "100", "--profile", "uniform"}).code,
              kExitPass);
    EXPECT_EQ(run({"run", "rigid-realistic", "--particles", "5", "--sites", "5", "--trials", "100"})
                  .code,
              kExitPass);
    EXPECT_EQ(run({"run", "rigid-toy", "--sites", "3"}).code, kExitUsage);
}

TEST(Tolerance, TightToleranceCanFailButNotCrash) {
    const CliRun r = run({"run", "double-slit", "--trials", "100", "--tolerance", "1e-18"});
    EXPECT_TRUE(r.code == kExitPass || r.code == kExitRelationFailure);
}

TEST(Tolerance, FlagBeatsEnvironment) {
    // A huge tolerance makes not_commute fail; the flag restores the default.
    EXPECT_EQ(run({"run", "double-slit", "--trials", "100"}, "1e6").code, kExitRelationFailure);
    EXPECT_EQ(run({"run", "double-slit", "--trials", "100", "--tolerance", "1e-9"}, "1e6").code,
              kExitPass);
    EXPECT_EQ(run({"run", "stern-gerlach", "--trials", "100"}, "abc").code, kExitUsage);
    EXPECT_EQ(run({"run", "stern-gerlach", "--tolerance", "-1"}).code, kExitUsage);
}

TEST(Errors, UsageFailuresExitTwo) {
    EXPECT_EQ(run({"run", "no-such"}).code, kExitUsage);
    EXPECT_EQ(run({"run"}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"run", "hardy", "--trials", "0"}).code, kExitUsage);
    EXPECT_EQ(run({"run", "--file", temp("absent.json").string()}).code, kExitUsage);
}

TEST(Errors, CorruptedFileExitsTwoWithDiagnostic) {
    const std::string p = write("corrupt.json", "{\"name\": ");
    const CliRun r = run({"run", "--file", p});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("corrupt.json"), std::string::npos);
}

TEST(Check, NamesStateTraceAndLabel) {
    const std::string trace = write(
        "trace.json",
        R"({"name":"t","state":[[[1,0],[0,0]],[[0,0],[1,0]]],"observables":{},"relations":[]})");
    const CliRun a = run({"check", "--file", trace});
    EXPECT_EQ(a.code, kExitUsage);
    EXPECT_NE(a.err.find("state trace"), std::string::npos);
    const std::string herm = write(
        "herm.json",
        R"({"name":"h","state":[[[1,0],[0,0]],[[0,0],[0,0]]],"observables":{"L":[[[0,0],[1,0]],[[0,0],[0,0]]]},"relations":[]})");
    const CliRun b = run({"check", "--file", herm});
    EXPECT_EQ(b.code, kExitUsage);
    EXPECT_NE(b.err.find("'L'"), std::string::npos);
    EXPECT_EQ(run({"check"}).code, kExitUsage);
}

TEST(Export, RoundTripGivesSameVerdicts) {
    for (const BuiltinInfo &b : builtin_scenarios()) {
        const std::string file = temp(b.name + ".json").string();
        ASSERT_EQ(run({"export", b.name, "--out", file}).code, kExitPass);
        EXPECT_EQ(run({"check", "--file", file}).code, kExitPass) << b.name;
        const CliRun direct = run({"run", b.name, "--trials", "2000"});
        const CliRun via = run({"run", "--file", file, "--trials", "2000"});
        ASSERT_EQ(via.code, kExitPass) << b.name << via.err;
        const Json jd = Json::parse(direct.out);
        const Json jv = Json::parse(via.out);
        ASSERT_EQ(jd.at("relations").size(), jv.at("relations").size());
        for (std::size_t k = 0; k < jd.at("relations").size(); ++k) {
            EXPECT_EQ(jd["relations"][k]["kind"], jv["relations"][k]["kind"]);
            EXPECT_EQ(jd["relations"][k]["operands"], jv["relations"][k]["operands"]);
            EXPECT_EQ(jd["relations"][k]["pass"], jv["relations"][k]["pass"]);
        }
    }
}

TEST(Export, OutputFileWritten) {
    const fs::path out = temp("report.json");
    fs::remove(out);
    EXPECT_EQ(run({"run", "hardy", "--trials", "100", "--out", out.string()}).code, kExitPass);
    EXPECT_TRUE(fs::exists(out));
    EXPECT_EQ(run({"export", "hardy", "--out", (temp("no_dir") / "x" / "y.json").string()}).code,
              kExitUsage);
}

} // namespace
} // namespace qeval
