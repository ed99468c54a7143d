// Copyright 2026 The qht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end exercises of the installed binary: every subcommand, the JSON
// and CSV output shapes, the instance-file path, and the exit-code contract
// (0 ok, 1 bad input, 2 audit violations, 3 numeric failure).

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef QHT_CLI_PATH
#error "QHT_CLI_PATH must point at the qht binary"
#endif

namespace {

using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string &args) {
    const std::string err_file = std::string(::testing::TempDir()) + "qht_cli_stderr.txt";
    const std::string cmd = std::string(QHT_CLI_PATH) + " " + args + " 2>" + err_file;

    RunResult r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        ADD_FAILURE() << "popen failed for: " << cmd;
        return r;
    }
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    std::ifstream err_in(err_file);
    std::stringstream err_stream;
    err_stream << err_in.rdbuf();
    r.err = err_stream.str();
    return r;
}

json run_json(const std::string &args, int expected_code = 0) {
    const RunResult r = run_cli(args);
    EXPECT_EQ(r.exit_code, expected_code) << "args: " << args << "\nstderr: " << r.err;
    return json::parse(r.out);
}

std::string write_temp(const std::string &name, const std::string &content) {
    const std::string path = std::string(::testing::TempDir()) + name;
    std::ofstream out(path);
    out << content;
    return path;
}

TEST(Cli, SingleBaseline) {
    const json j = run_json("single --x1 1 --x2 0.5 --z 0");
    EXPECT_NEAR(j["error"].get<double>(), 0.25, 1e-12);
    EXPECT_EQ(j["instance"]["kind"], "single");
    ASSERT_TRUE(j.contains("measurement"));
    ASSERT_TRUE(j.contains("outcomes"));
    const auto &pi2 = j["measurement"]["pi2"];
    EXPECT_NEAR(pi2[1][1][0].get<double>(), 1.0, 1e-12);  // [row][col][re, im]
}

TEST(Cli, SingleHonorsPriors) {
    // prior1 = 3/4: weighted difference diag(5/8, -1/8), error 1/4 - 1/8.
    const json j = run_json("single --x1 1 --x2 0.5 --z 0 --prior1 0.75");
    EXPECT_NEAR(j["error"].get<double>(), 0.125, 1e-12);
}

TEST(Cli, SingleTrivialCaseWarns) {
    const RunResult r = run_cli("single --x1 0.5 --x2 0.5 --z 0.1");
    EXPECT_EQ(r.exit_code, 0);
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["trivial_case"].get<bool>());
    EXPECT_NE(r.err.find("always reports the same outcome"), std::string::npos);
}

TEST(Cli, PairBenchmark) {
    const json j = run_json("pair --x1 0.9 --x2 0.3 --z 0.2");
    EXPECT_NEAR(j["comparison"]["p_global"].get<double>(), 0.11689011157192969, 1e-12);
    EXPECT_NEAR(j["comparison"]["p_sequential"].get<double>(), 0.1315967033215844, 1e-12);
    EXPECT_NEAR(j["comparison"]["gap"].get<double>(), 0.014706591749654718, 1e-12);
    EXPECT_EQ(j["comparison"]["equality_class"], "strict_inequality");
    ASSERT_TRUE(j.contains("sequential"));
    EXPECT_NEAR(j["sequential"]["total_error"].get<double>(), 0.1315967033215844, 1e-10);
}

TEST(Cli, PairEqualityClassOnManifold) {
    const json j = run_json("pair --x1 0.8 --x2 0.2 --z 0.1 0.3");
    EXPECT_EQ(j["comparison"]["equality_class"], "same_eigenvalues");
}

TEST(Cli, PairFromInstanceFile) {
    const std::string path = write_temp("pair_instance.json", R"({
        "kind": "independent",
        "x1": 0.9,
        "x2": 0.3,
        "z": 0.2
    })");
    const json j = run_json("pair --instance " + path);
    EXPECT_NEAR(j["comparison"]["p_global"].get<double>(), 0.11689011157192969, 1e-12);
}

TEST(Cli, InstanceFileWithComplexCoherence) {
    const std::string path = write_temp("pair_complex.json", R"({
        "kind": "independent",
        "x1": 0.8,
        "x2": 0.2,
        "z": [0.1, 0.3]
    })");
    const json j = run_json("pair --instance " + path);
    EXPECT_EQ(j["comparison"]["equality_class"], "same_eigenvalues");
}

TEST(Cli, EntangledAnchor) {
    const json j = run_json(
        "entangled --alpha1 1 --beta1 0 --gamma1 0 --alpha2 0.6 --beta2 0 --gamma2 0.8");
    EXPECT_NEAR(j["p_global"].get<double>(), 0.1, 1e-12);
    EXPECT_NEAR(j["p_sequential"].get<double>(), 0.18, 1e-12);
    EXPECT_NEAR(j["gap"]["gap_expression"].get<double>(), -0.2304, 1e-9);
    EXPECT_NEAR(j["overlap"][0].get<double>(), 0.6, 1e-12);
    ASSERT_TRUE(j.contains("equality"));
    EXPECT_FALSE(j["equality"]["parametric_equality"].get<bool>());
}

TEST(Cli, EntangledInstanceFileValidateModeRejectsRotatedInput) {
    const std::string path = write_temp("ent_bad.json", R"({
        "kind": "entangled",
        "state1": {"alpha": 0.6, "beta": 0.4, "gamma": 0.565685424949238},
        "state2": {"alpha": 1.0, "beta": 0.0, "gamma": 0.0},
        "mode": "validate"
    })");
    const RunResult r = run_cli("entangled --instance " + path);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, ScanCsvShape) {
    // Scans default to CSV; --format csv just makes it explicit.
    const RunResult r = run_cli("scan --sweep x1=0.1:0.9:5 --x2 0.3 --z 0.2 --format csv");
    EXPECT_EQ(r.exit_code, 0);
    std::stringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "index,x1,x2,z_re,z_im,p_global,p_sequential,gap,equality_class,status");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) {
        if (!row.empty()) {
            ++rows;
        }
    }
    EXPECT_EQ(rows, 5);
}

TEST(Cli, ScanJsonMarksInvalidPoints) {
    // x1 sweeps to extremes where |z| = 0.45 breaks positivity.
    const json j = run_json("scan --sweep x1=0:1:3 --x2 0.5 --z 0.45 --format json");
    ASSERT_EQ(j["rows"].size(), 3u);
    EXPECT_EQ(j["rows"][0]["status"], "invalid");
    EXPECT_EQ(j["rows"][1]["status"], "ok");
    EXPECT_EQ(j["rows"][2]["status"], "invalid");
}

TEST(Cli, ScanGridIsRowMajorLastFastest) {
    const json j = run_json("scan --sweep x1=0.2:0.4:2 --sweep x2=0.3:0.6:2 --z 0 --format json");
    ASSERT_EQ(j["rows"].size(), 4u);
    EXPECT_NEAR(j["rows"][0]["x1"].get<double>(), 0.2, 1e-15);
    EXPECT_NEAR(j["rows"][0]["x2"].get<double>(), 0.3, 1e-15);
    EXPECT_NEAR(j["rows"][1]["x1"].get<double>(), 0.2, 1e-15);
    EXPECT_NEAR(j["rows"][1]["x2"].get<double>(), 0.6, 1e-15);
    EXPECT_NEAR(j["rows"][3]["x1"].get<double>(), 0.4, 1e-15);
}

TEST(Cli, AuditIndependentCleanExitsZero) {
    const json j = run_json("audit independent --count 2000 --seed 42");
    EXPECT_EQ(j["violations"].get<std::uint64_t>(), 0u);
    EXPECT_GE(j["min_gap"].get<double>(), -1e-12);
}

TEST(Cli, AuditCrossFormsCleanExitsZero) {
    const json j = run_json("audit cross-forms --count 500 --seed 42");
    EXPECT_EQ(j["violations"].get<std::uint64_t>(), 0u);
    EXPECT_LE(j["worst_independent_bound_excess"].get<double>(), 1e-10);
}

TEST(Cli, OracleSingleNeverBeatsTheOptimum) {
    const json j = run_json(
        "oracle --kind single --x1 1 --x2 0.5 --z 0 --grid-density 10000 --seed 42");
    EXPECT_NEAR(j["helstrom_error"].get<double>(), 0.25, 1e-12);
    EXPECT_GE(j["excess"].get<double>(), -1e-10);
    EXPECT_LE(j["excess"].get<double>(), 1e-3);
}

TEST(Cli, SimulateIndependentWithinNoise) {
    const json j = run_json("simulate --kind independent --x1 0.9 --x2 0.3 --z 0.2 "
                            "--trials 100000 --seed 12345");
    EXPECT_LE(std::abs(j["deviation_sigma"].get<double>()), 4.0);
    EXPECT_EQ(j["simulation"]["trials"].get<std::uint64_t>(), 100000u);
}

TEST(Cli, OutputFlagWritesFile) {
    const std::string path = std::string(::testing::TempDir()) + "pair_report.json";
    const RunResult r = run_cli("pair --x1 0.9 --x2 0.3 --z 0.2 --output " + path);
    EXPECT_EQ(r.exit_code, 0);
    std::ifstream in(path);
    ASSERT_TRUE(in.good());
    const json j = json::parse(in);
    EXPECT_NEAR(j["comparison"]["gap"].get<double>(), 0.014706591749654718, 1e-12);
}

TEST(Cli, ExitCodeOneOnBadParameters) {
    // Positivity violation: |z|^2 > x(1-x).
    const RunResult r = run_cli("pair --x1 0.5 --x2 0.5 --z 0.6");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, ExitCodeOneOnMalformedInstanceFile) {
    const std::string path = write_temp("broken.json", "{ not json");
    const RunResult r = run_cli("pair --instance " + path);
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, ExitCodeOneOnMissingField) {
    const std::string path = write_temp("missing_field.json", R"({"kind": "independent", "x1": 0.5})");
    const RunResult r = run_cli("pair --instance " + path);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("x2"), std::string::npos);  // names the missing field
}

TEST(Cli, ExitCodeOneOnWrongKindForSubcommand) {
    const std::string path = write_temp("kind_mismatch.json", R"({
        "kind": "entangled",
        "state1": {"alpha": 1.0, "beta": 0.0, "gamma": 0.0},
        "state2": {"alpha": 0.6, "beta": 0.0, "gamma": 0.8}
    })");
    const RunResult r = run_cli("pair --instance " + path);
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, CsvRejectedOffScan) {
    const RunResult r = run_cli("pair --x1 0.9 --x2 0.3 --z 0.2 --format csv");
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, UnknownSubcommandFails) {
    const RunResult r = run_cli("frobnicate");
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, HelpExitsZero) {
    const RunResult r = run_cli("--help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("single"), std::string::npos);
    EXPECT_NE(r.out.find("audit"), std::string::npos);
}

}  // namespace
