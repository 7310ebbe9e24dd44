//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tomolens/service.hpp"

namespace tl = tomolens;
using tl::Json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("tomolens_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CliResult cli(const std::string &args) {
  static int counter = 0;
  const auto err_path = scratch_dir() / ("stderr_" + std::to_string(counter++));
  const std::string cmd =
      std::string("'") + TOMOLENS_CLI_PATH + "' " + args + " 2>'" + err_path.string() + "'";
  CliResult r;
  FILE *pipe = ::popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

} // namespace

TEST(CliRun, ReportsHighFidelity) {
  const auto r = cli("run --qubits 1 --theta 60 --phi 30 --angle-unit deg --shots 1000 --seed 7");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json rep = Json::parse(r.out);
  EXPECT_GE(rep["fidelity"].get<double>(), 0.98);
  EXPECT_EQ(rep["spec"]["seed"], 7);
}

TEST(CliRun, ZOnlyWarnsAndRecoversTheta) {
  const auto r = cli("run --qubits 1 --settings Z --theta 60 --phi 150 --shots 100000");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("phi unconstrained"), std::string::npos);
  const Json rep = Json::parse(r.out);
  EXPECT_EQ(rep["warnings"], (Json{"phi unconstrained"}));
  const double theta = rep["result"]["estimated_params"]["thetas"][0].get<double>();
  EXPECT_LE(std::abs(tl::rad_to_deg(theta) - 60.0), 2.0);
}

TEST(CliRun, XZRegimeOverFiftySeeds) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto r = cli("run --qubits 1 --settings X,Z --phi 330 --theta 60 --shots 5000 --seed " +
                       std::to_string(seed));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const double phi =
        Json::parse(r.out)["result"]["estimated_params"]["phis"][0].get<double>();
    const double d = std::min(tl::circular_distance(phi, tl::deg_to_rad(30)),
                              tl::circular_distance(phi, tl::deg_to_rad(330)));
    EXPECT_LE(d, tl::deg_to_rad(5)) << "seed " << seed;
  }
}

TEST(CliRun, ByteIdenticalAcrossRunsAndMatchesService) {
  const std::string flags = "run --qubits 1 --theta 60 --phi 30 --shots 1000 --seed 42";
  const auto a = cli(flags), b = cli(flags);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);

  const Json req{{"angle_unit", "deg"}, {"n_qubits", 1}, {"thetas", {60}},
                 {"phis", {30}},        {"shots", 1000}, {"seed", 42}};
  const auto reply = tl::handle_run(req.dump());
  ASSERT_EQ(reply.status, 200);
  EXPECT_EQ(a.out, reply.body["report"].dump(2) + "\n");
  // The service puts the report on the wire compactly; reparsing must not
  // perturb any value.
  EXPECT_EQ(a.out, Json::parse(reply.body.dump())["report"].dump(2) + "\n");
}

TEST(CliRun, TwoQubitRadiansAndOutFile) {
  const auto path = scratch_dir() / "report.json";
  const auto r = cli("run --qubits 2 --angle-unit rad --theta 1,2,0.5 --phi 1,3,5 --shots 500 "
                     "--seed 3 --out '" + path.string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const Json rep = Json::parse(slurp(path));
  EXPECT_EQ(rep["spec"]["shot_plan"].size(), 15u);
  EXPECT_EQ(rep["per_qubit_bloch_true"].size(), 2u);
}

TEST(CliRun, TableOutput) {
  const auto r = cli("run --theta 60 --phi 30 --shots 100,0,100 --seed 1 --output table");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("fidelity"), std::string::npos);
  EXPECT_NE(r.out.find("phi sign ambiguous"), std::string::npos);
}

TEST(CliRun, ValidationFailuresExitTwo) {
  EXPECT_EQ(cli("run --bogus").exit_code, 2);
  EXPECT_EQ(cli("run --theta 60 --phi 30 --shots -5").exit_code, 2);
  EXPECT_EQ(cli("run --theta 60 --phi 30 --shots 0").exit_code, 2);
  EXPECT_EQ(cli("run --theta 200 --phi 30").exit_code, 2);
  EXPECT_EQ(cli("run --theta 60 --phi 30 --angle-unit grad").exit_code, 2);
  EXPECT_EQ(cli("run --theta 60 --phi 30 --settings Q").exit_code, 2);
  EXPECT_EQ(cli("run --qubits 2 --theta 60 --phi 30").exit_code, 2);
  EXPECT_EQ(cli("run --theta 60 --phi 30 --output xml").exit_code, 2);
  EXPECT_EQ(cli("frobnicate").exit_code, 2);
}

TEST(CliHelp, ListsEveryFlag) {
  const auto run = cli("run --help");
  for (const char *flag : {"--qubits", "--theta", "--phi", "--angle-unit", "--shots", "--settings",
                           "--seed", "--restarts", "--output", "--out"})
    EXPECT_NE(run.out.find(flag), std::string::npos) << flag;
  const auto sweep = cli("sweep --help");
  for (const char *flag : {"--qubits", "--trials", "--shots-grid", "--seed", "--restarts", "--out"})
    EXPECT_NE(sweep.out.find(flag), std::string::npos) << flag;
  const auto serve = cli("serve --help");
  for (const char *flag : {"--addr", "--port"})
    EXPECT_NE(serve.out.find(flag), std::string::npos) << flag;
  const auto top = cli("--help");
  for (const char *cmd : {"run", "sweep", "serve"})
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
}

TEST(CliSweep, HeaderAndMedianMonotone) {
  const auto r = cli("sweep --qubits 1 --trials 20 --shots-grid 100,10000 --seed 5");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 41u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"shots", "trial", "seed", "fidelity", "theta_error",
                                               "phi_error"}));
  std::map<long, std::vector<double>> by_shots;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 6u);
    by_shots[std::stol(rows[i][0])].push_back(std::stod(rows[i][3]));
    EXPECT_GE(std::stod(rows[i][5]), 0.0);
    EXPECT_LE(std::stod(rows[i][5]), tl::kPi);
  }
  ASSERT_EQ(by_shots.size(), 2u);
  EXPECT_GE(oracle::median(by_shots[10000]), oracle::median(by_shots[100]));
  EXPECT_EQ(r.out, cli("sweep --qubits 1 --trials 20 --shots-grid 100,10000 --seed 5").out);
}

TEST(CliSweep, InvalidGridExitsTwo) {
  EXPECT_EQ(cli("sweep --trials 1 --shots-grid 0").exit_code, 2);
  EXPECT_EQ(cli("sweep --trials 0 --shots-grid 10").exit_code, 2);
  EXPECT_EQ(cli("sweep --trials 1").exit_code, 2);
}
