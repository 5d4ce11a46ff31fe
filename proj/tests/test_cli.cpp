// Copyright 2026 The noon-forge Authors
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
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cli_io.hpp"
#include "commands.hpp"

using namespace noon;
namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
};

Result run_cli(const std::string &args) {
    const std::string cmd = std::string(NOON_FORGE_CLI_PATH) + " " + args + " 2>&1";
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string &name) {
    auto d = fs::temp_directory_path() / ("noon_forge_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}

}  // namespace

TEST(ParseAngle, Forms) {
    EXPECT_DOUBLE_EQ(cli::parse_angle("pi/2"), M_PI / 2);
    EXPECT_DOUBLE_EQ(cli::parse_angle("-pi/2"), -M_PI / 2);
    EXPECT_DOUBLE_EQ(cli::parse_angle("3pi/4"), 3 * M_PI / 4);
    EXPECT_DOUBLE_EQ(cli::parse_angle("0.3"), 0.3);
    EXPECT_DOUBLE_EQ(cli::parse_angle("pi"), M_PI);
    EXPECT_THROW(cli::parse_angle("half"), InvalidInput);
    EXPECT_THROW(cli::parse_angle("pi/0"), InvalidInput);
}

TEST(ParseTransmission, ExactWhenPossible) {
    EXPECT_EQ(cli::parse_transmission("19/51").exact(), num::make_rational(19, 51));
    EXPECT_EQ(cli::parse_transmission("0.25").exact(), num::make_rational(1, 4));
    EXPECT_EQ(cli::parse_transmission("07/10").exact(), num::make_rational(7, 10));
    EXPECT_THROW(cli::parse_transmission("3/2"), InvalidInput);
    EXPECT_THROW(cli::parse_transmission("x"), InvalidInput);
}

TEST(Csv, Layout) {
    cli::CsvTable t({"a", "b"});
    t.add({"1", "2"});
    EXPECT_EQ(t.str(), "a,b\n1,2\n");
    EXPECT_THROW(t.add({"1"}), std::logic_error);
    EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
}

TEST(Cli, VersionAndBadInput) {
    EXPECT_EQ(run_cli("--version").status, 0);
    EXPECT_EQ(run_cli("dist --na 2 --nb 2 --m1 3 --m2 3").status, 2);
    EXPECT_EQ(run_cli("dist --na 2 --nb 2 --m1 1 --m2 1 --T 5/4").status, 2);
    EXPECT_EQ(run_cli("dist --na 2 --nb 2 --m1 1 --m2 1 --engine magic").status, 2);
    EXPECT_NE(run_cli("no-such-command").status, 0);
}

TEST(Cli, DistWritesDataAndManifest) {
    const auto out = scratch("dist.csv");
    auto r = run_cli("dist --na 35 --nb 35 --m1 22 --m2 8 --m9 18 --T 19/51 --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto csv = slurp(out);
    EXPECT_EQ(csv.substr(0, csv.find('\n')).find("m7"), 0u);
    auto manifest = cli::json::parse(slurp(cli::manifest_path(out)));
    EXPECT_EQ(manifest["subcommand"], "dist");
    EXPECT_EQ(manifest["engine"], "exact");
}

TEST(Cli, EstimateIsReproducible) {
    const auto a = scratch("a.json"), b = scratch("b.json");
    const std::string args = "estimate --source noon --n 4 --chi 0.3 --prior 0.05,0.7 --t 50 --nu 40 --seed 7 --out ";
    ASSERT_EQ(run_cli(args + a.string()).status, 0);
    ASSERT_EQ(run_cli("--threads 1 " + args + b.string()).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    auto report = cli::json::parse(slurp(a));
    EXPECT_TRUE(report.contains("rms_error"));
}

TEST(Cli, TableQualityRuns) {
    auto r = run_cli("table-quality");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("45"), std::string::npos);
}
