// Copyright 2026 The loqc Authors
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

#include "loqc/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using namespace loqc;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "loqc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("loqc_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST(ParseGrid, Forms) {
    EXPECT_EQ(cli::parse_grid("0.1,0.2,0.5"), (std::vector<double>{0.1, 0.2, 0.5}));
    auto lin = cli::parse_grid("0:0.2:5");
    ASSERT_EQ(lin.size(), 5u);
    EXPECT_DOUBLE_EQ(lin[0], 0.0);
    EXPECT_DOUBLE_EQ(lin[2], 0.1);
    EXPECT_DOUBLE_EQ(lin[4], 0.2);
    auto lg = cli::parse_grid("log:0.001:0.1:3");
    ASSERT_EQ(lg.size(), 3u);
    EXPECT_NEAR(lg[1], 0.01, 1e-15);
    EXPECT_EQ(cli::parse_grid("0.3:0.5:1"), std::vector<double>{0.3});
    EXPECT_EQ(cli::parse_grid("0.25"), std::vector<double>{0.25});
}

TEST(ParseGrid, Errors) {
    for (const char* bad : {"", "a,b", "0:1", "0:1:0", "0:1:2.5", "log:0:1:3", "log:0.1,0.2", "0.1,,0.2", "1:2:3:4"})
        EXPECT_THROW(cli::parse_grid(bad), std::invalid_argument) << bad;
}

TEST(ParseInput, Protocols) {
    auto ns = cli::parse_input("ns", "0+2");
    ASSERT_EQ(ns.size(), 1u);
    EXPECT_NEAR(std::abs(ns[0].amplitude({2})), 1.0 / std::sqrt(2.0), 1e-15);
    auto t = cli::parse_input("teleportn", "+");
    EXPECT_EQ(t[0].size(), 2u);
    auto two = cli::parse_input("cz16", "1-");
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].amplitude({1, 0}), Complex(1.0));
    EXPECT_LT(two[1].amplitude({1, 0}).real(), 0.0);
    EXPECT_THROW(cli::parse_input("ns", "3"), std::invalid_argument);
    EXPECT_THROW(cli::parse_input("ns", "1+1"), std::invalid_argument);
    EXPECT_THROW(cli::parse_input("teleport1", "2"), std::invalid_argument);
    EXPECT_THROW(cli::parse_input("cz4", "1"), std::invalid_argument);
    EXPECT_THROW(cli::parse_input("bogus", "1"), std::invalid_argument);
    EXPECT_TRUE(cli::is_simulated_protocol("czn"));
    EXPECT_FALSE(cli::is_simulated_protocol("cz-nc"));
}

TEST(FormatNumber, Precision) {
    EXPECT_EQ(cli::format_number(0.25), "0.25");
    EXPECT_EQ(cli::format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(cli::format_number(1e-5), "1e-05");
}

TEST_F(CliTest, RunReportsStatsAndWritesOutcomeTable) {
    const std::string out = path("cz16.json");
    Result r = invoke({"run", "--protocol", "cz16", "--input", "11", "--l", "0.1", "--g", "0.1", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["p_s"].get<double>(), 0.034693, 5e-6);
    EXPECT_NEAR(j["p_f"].get<double>(), 0.35127, 5e-5);
    EXPECT_NEAR(j["ideal_probability"].get<double>(), 1.0 / 16.0, 1e-12);
    EXPECT_EQ(j["protocol"], "cz16");
    EXPECT_EQ(json::parse(slurp(out)), j);
    const std::string table = j["outcome_table_path"];
    EXPECT_EQ(fs::path(table).filename(), "cz16.outcomes.csv");
    EXPECT_TRUE(slurp(table).starts_with("pattern,probability,collapsed_state\n"));
}

TEST_F(CliTest, RunCompositeReportsStages) {
    const std::string out = path("cz4.json");
    Result r = invoke({"run", "--protocol", "cz4", "--l", "0.1", "--g", "0.1", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["p_s"].get<double>(), 0.0048145, 5e-7);
    EXPECT_NEAR(j["stages"]["preparation"]["ideal_probability"].get<double>(), 1.0 / 16.0, 1e-12);
    EXPECT_NEAR(j["stages"]["teleport"]["ideal_probability"].get<double>(), 0.25, 1e-12);
    EXPECT_TRUE(fs::exists(j["preparation_outcome_table_path"].get<std::string>()));
    EXPECT_TRUE(fs::exists(j["outcome_table_path"].get<std::string>()));
}

TEST_F(CliTest, RunWithoutOutPrintsOnly) {
    Result r = invoke({"run", "--protocol", "ns", "--input", "0+1+2"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["ideal_probability"].get<double>(), 0.25, 1e-12);
    EXPECT_TRUE(j["outcome_table_path"].is_null());
}

TEST_F(CliTest, VerboseDescribesModes) {
    Result r = invoke({"run", "--protocol", "teleport1", "--input", "+", "--verbose"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("heralded branches"), std::string::npos);
    EXPECT_NE(r.err.find("phase"), std::string::npos);
}

TEST_F(CliTest, SweepSimulatedGridIsDeterministic) {
    const std::string a = path("a.csv"), b = path("b.csv");
    std::vector<std::string> args{"sweep", "--protocol", "teleportn", "--n", "2", "--l-grid", "0,0.1", "--g-grid",
                                  "0:0.1:3"};
    auto with = [&](const std::string& out, const char* threads) {
        auto v = args;
        v.insert(v.end(), {"--out", out, "--threads", threads});
        return invoke(v);
    };
    ASSERT_EQ(with(a, "1").code, 0);
    ASSERT_EQ(with(b, "3").code, 0);
    const std::string text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "l,g,p_s,p_d,p_f");
    std::getline(lines, line);
    EXPECT_EQ(line, "0,0,0.666666666667,0.666666666667,0");
    int rows = 1;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, SweepAnalysisForms) {
    const std::string nc = path("nc.csv");
    ASSERT_EQ(invoke({"sweep", "--protocol", "cz-nc", "--l-grid", "0.1", "--out", nc}).code, 0);
    EXPECT_TRUE(slurp(nc).starts_with("l,n_c,p_s_max,p_f,converged\n0.1,4,"));

    const std::string pf = path("pf.csv");
    ASSERT_EQ(invoke({"sweep", "--protocol", "pf-vs-n", "--mode", "cz", "--l", "0.1", "--out", pf}).code, 0);
    std::istringstream lines(slurp(pf));
    std::string line;
    int rows = -1;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 4);  // up to n_c
}

TEST_F(CliTest, ThresholdReport) {
    const std::string out = path("thr.json");
    Result r = invoke({"threshold", "--target", "0.9", "--mode", "cz", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["l_required"].get<double>(), 0.0014);
    EXPECT_EQ(j["n_required"].get<int>(), 37);
    EXPECT_EQ(j["mode"], "cz");
    EXPECT_EQ(json::parse(slurp(out)), j);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"run"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"run", "--protocol", "nope"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"run", "--protocol", "ns", "--l", "1.5"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"run", "--protocol", "teleportn", "--n", "0"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"sweep", "--protocol", "ns", "--out", path("x.csv"), "--l-grid", "a"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"sweep", "--protocol", "ns"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"threshold", "--mode", "sideways"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"run", "--protocol", "ns", "--out", path("missing/dir/r.json")}).code, cli::kExitOutput);
    EXPECT_EQ(invoke({"sweep", "--protocol", "ns", "--l-grid", "0", "--g-grid", "0", "--out", path("no/such.csv")}).code,
              cli::kExitOutput);
    Result unreachable = invoke({"threshold", "--target", "0.999", "--mode", "teleport", "--n-max", "100"});
    EXPECT_EQ(unreachable.code, cli::kExitUnreachable);
    EXPECT_NE(unreachable.err.find("unreachable"), std::string::npos);
    EXPECT_EQ(invoke({"run", "--protocol", "ns", "--config", path("absent.json")}).code, cli::kExitUsage);
}

TEST_F(CliTest, ConfigSitsBetweenDefaultsAndFlags) {
    const std::string cfg = path("cfg.json");
    std::ofstream(cfg) << R"({"protocol": "teleportn", "n": 3, "l": 0.1, "input": "0"})";
    Result from_cfg = invoke({"run", "--config", cfg});
    ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
    json a = json::parse(from_cfg.out);
    EXPECT_EQ(a["n"], 3);
    EXPECT_EQ(a["input"], "0");
    EXPECT_DOUBLE_EQ(a["l"].get<double>(), 0.1);

    Result overridden = invoke({"run", "--config", cfg, "--n", "2", "--l", "0"});
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    json b = json::parse(overridden.out);
    EXPECT_EQ(b["n"], 2);
    EXPECT_DOUBLE_EQ(b["l"].get<double>(), 0.0);
    EXPECT_NEAR(b["p_s"].get<double>(), 2.0 / 3.0, 1e-12);

    std::ofstream(path("bad.json")) << "[1, 2";
    EXPECT_EQ(invoke({"run", "--config", path("bad.json")}).code, cli::kExitUsage);
}

TEST_F(CliTest, InstalledBinaryMatchesLibraryEntryPoint) {
    const std::string out = path("bin.json");
    const std::string cmd = std::string(LOQC_CLI_PATH) + " run --protocol ns --input 2 --l 0.05 --g 0.02 --out " + out +
                            " > " + path("stdout.txt");
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    Result lib = invoke({"run", "--protocol", "ns", "--input", "2", "--l", "0.05", "--g", "0.02", "--out", out});
    ASSERT_EQ(lib.code, 0);
    EXPECT_EQ(slurp(path("stdout.txt")), lib.out);
}
