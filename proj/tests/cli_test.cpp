//------------------------------------------------------------------------------
//
//   Copyright 2026 The offload Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "offload/cli.hpp"
#include "offload/outputs.hpp"
#include "offload/scenario_io.hpp"
#include "test_support.hpp"

#include "gtest/gtest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace {

using namespace offload;
using namespace offload::testing;
namespace fs = std::filesystem;
using nlohmann::json;

class TempDir
{
public:
  TempDir()
  {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("offload_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path const &path() const
  {
    return path_;
  }

private:
  fs::path path_;
};

std::string slurp(fs::path const &p)
{
  std::ifstream      in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(fs::path const &p, std::string const &text)
{
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::vector<std::vector<std::string>> read_csv(fs::path const &p)
{
  std::vector<std::vector<std::string>> rows;
  std::ifstream                         in(p);
  std::string                           line;
  while (std::getline(in, line))
  {
    std::vector<std::string> cells;
    std::stringstream        ss(line);
    std::string              cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
      cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// A short scenario so CLI tests stay fast.
fs::path short_scenario(fs::path const &dir, double duration = 900.0)
{
  return write(dir / "scenario.json", json{{"duration_s", duration}, {"seed", 3}}.dump());
}

TEST(ScenarioIoTest, EmptyFileGivesDefaultsAndLogsThem)
{
  TempDir            tmp;
  std::ostringstream log;
  auto const         s = load_scenario(write(tmp.path() / "empty.json", ""), &log);
  EXPECT_EQ(s, Scenario{});
  EXPECT_NE(log.str().find("default: field 'arrival_rate_per_s'"), std::string::npos);
  EXPECT_EQ(scenario_from_json(json::object()), Scenario{});
}

TEST(ScenarioIoTest, RatesAreConvertedFromHourly)
{
  auto const s = scenario_from_json(json{{"arrival_rate_per_s", 0.5}, {"duration_s", 60}});
  EXPECT_EQ(s.arrival_rate, 0.5);
  EXPECT_EQ(s.duration, 60.0);
  auto const topo = draw_topology(s);
  EXPECT_DOUBLE_EQ(topo.cloudlets[0].alpha, 50.0 / 3600.0);
}

TEST(ScenarioIoTest, RejectsBadInput)
{
  auto message = [](json const &j) {
    try
    {
      scenario_from_json(j);
    }
    catch (ScenarioError const &e)
    {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(json{{"arrival_rate_per_s", -1.0}}).find("validation failed"), std::string::npos);
  EXPECT_NE(message(json{{"arival_rate_per_s", 1.0}}).find("arival_rate_per_s"), std::string::npos);
  EXPECT_NE(message(json{{"seed", "seven"}}).find("seed"), std::string::npos);
  EXPECT_NE(message(json{{"cloudlets", {{"count", "x"}}}}).find("cloudlets.count"),
            std::string::npos);

  TempDir tmp;
  try
  {
    load_scenario(write(tmp.path() / "broken.json", "{\n  \"seed\": 1,\n  oops\n}"));
    ADD_FAILURE() << "expected a parse error";
  }
  catch (ScenarioError const &e)
  {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_scenario(tmp.path() / "missing.json"), ScenarioError);
}

TEST(ScenarioIoTest, RoundTrips)
{
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k)
  {
    Scenario s;
    s.seed          = rng();
    s.arrival_rate  = 0.1 + (rng() % 1000) / 997.0;
    s.duration      = 100.0 + static_cast<double>(rng() % 10000);
    s.data_mb_min   = 1.0 + (rng() % 10);
    s.data_mb_max   = s.data_mb_min + 1.0 + (rng() % 50);
    s.urgency_mix   = {0.2, 0.5, 0.3};
    s.rates.alpha   = 1.0 + (rng() % 100);
    s.strategy      = static_cast<Strategy>(k % 3);
    s.cloudlets.count = 1 + k % 9;
    s.cloudlets.grid_columns = 1 + k % 4;
    if (k % 2 == 0)
      s.topology = draw_topology(s);
    EXPECT_EQ(scenario_from_json(json::parse(scenario_to_json(s).dump())), s);
  }
}

TEST(OutputsTest, GoldenHeaders)
{
  EXPECT_STREQ(kEventsHeader, "time,kind,user,i,j,lt,lf,lc,ltotal,payment,fallback");
  EXPECT_STREQ(kWorkloadHeader, "time,id,count");
  EXPECT_STREQ(kUsersHeader, "user,Tk,Tkmin,ltotal,ratio,payment,valuation,cost");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST(OutputsTest, EmptyRunWritesHeadersOnly)
{
  TempDir  tmp;
  Scenario s;
  s.duration     = 1.0;
  s.arrival_rate = 1e-9;
  auto const result = run(s);
  ASSERT_TRUE(result.log.empty());
  emit_outputs(result, s, tmp.path());
  EXPECT_EQ(slurp(tmp.path() / "events.csv"), std::string(kEventsHeader) + "\n");
  EXPECT_EQ(slurp(tmp.path() / "users.csv"), std::string(kUsersHeader) + "\n");
  EXPECT_EQ(slurp(tmp.path() / "workload_ap.csv"), std::string(kWorkloadHeader) + "\n");
  auto const summary = json::parse(slurp(tmp.path() / "summary.json"));
  EXPECT_EQ(summary["aggregates"]["arrivals"], 0);
  EXPECT_EQ(summary["aggregates"]["mean_latency_s"], 0.0);
}

TEST(RunCommandTest, OutputsAreByteIdenticalOnRepeat)
{
  TempDir tmp;
  RunConfig c;
  c.scenario_path = short_scenario(tmp.path());
  std::ostringstream out, err;
  c.output_dir = tmp.path() / "a";
  ASSERT_EQ(run_command(c, out, err), kExitOk) << err.str();
  c.output_dir = tmp.path() / "b";
  ASSERT_EQ(run_command(c, out, err), kExitOk) << err.str();
  for (auto const *f : {"events.csv", "users.csv", "workload_ap.csv", "workload_server.csv",
                        "summary.json"})
    EXPECT_EQ(slurp(tmp.path() / "a" / f), slurp(tmp.path() / "b" / f)) << f;
  EXPECT_GT(slurp(tmp.path() / "a" / "events.csv").size(), 1000u);
}

TEST(RunCommandTest, OracleAndInvariantChecksPass)
{
  TempDir   tmp;
  RunConfig c;
  c.scenario_path    = short_scenario(tmp.path());
  c.output_dir       = tmp.path() / "out";
  c.oracle_check     = true;
  c.check_invariants = true;
  std::ostringstream out, err;
  ASSERT_EQ(run_command(c, out, err), kExitOk) << err.str();
  auto const agg = json::parse(slurp(c.output_dir / "summary.json"))["aggregates"];
  EXPECT_GT(agg["oracle_checks"].get<int>(), 0);
  EXPECT_EQ(agg["oracle_agreements"], agg["oracle_checks"]);
  EXPECT_EQ(agg["invariant_violations"], 0);
}

TEST(RunCommandTest, UsersCsvIsConsistent)
{
  TempDir   tmp;
  RunConfig c;
  c.scenario_path = short_scenario(tmp.path());
  c.output_dir    = tmp.path() / "out";
  std::ostringstream out, err;
  ASSERT_EQ(run_command(c, out, err), kExitOk);
  auto const rows = read_csv(c.output_dir / "users.csv");
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t k = 1; k < rows.size(); ++k)
  {
    double const tk    = std::stod(rows[k][1]);
    double const lat   = std::stod(rows[k][3]);
    double const ratio = std::stod(rows[k][4]);
    EXPECT_NEAR(ratio, lat / tk, 1e-11);
    EXPECT_LE(lat, tk);
    EXPECT_NEAR(std::stod(rows[k][7]), std::stod(rows[k][5]) - std::stod(rows[k][6]), 1e-11);
  }
}

TEST(RunCommandTest, SummaryMatchesEventLog)
{
  TempDir   tmp;
  RunConfig c;
  c.scenario_path = short_scenario(tmp.path());
  c.output_dir    = tmp.path() / "out";
  std::ostringstream out, err;
  ASSERT_EQ(run_command(c, out, err), kExitOk);

  int    arrivals = 0, admitted = 0, fallbacks = 0;
  double latency = 0.0, price = 0.0;
  auto const rows = read_csv(c.output_dir / "events.csv");
  for (std::size_t k = 1; k < rows.size(); ++k)
  {
    if (rows[k][1] != "join")
      continue;
    ++arrivals;
    if (!rows[k][10].empty())
    {
      ++fallbacks;
      continue;
    }
    ++admitted;
    latency += std::stod(rows[k][8]);
    price += std::stod(rows[k][9]);
  }
  auto const agg = json::parse(slurp(c.output_dir / "summary.json"))["aggregates"];
  EXPECT_EQ(agg["arrivals"], arrivals);
  EXPECT_EQ(agg["admitted"], admitted);
  EXPECT_EQ(agg["fallbacks"], fallbacks);
  EXPECT_NEAR(agg["mean_latency_s"].get<double>(), latency / admitted, 1e-9);
  EXPECT_NEAR(agg["mean_payment"].get<double>(), price / admitted, 1e-9);
}

TEST(RunCommandTest, ExitCodes)
{
  TempDir tmp;
  std::ostringstream out, err;

  RunConfig bad;
  bad.scenario_path = write(tmp.path() / "bad.json", R"({"arrival_rate_per_s": -2})");
  bad.output_dir    = tmp.path() / "o1";
  EXPECT_EQ(run_command(bad, out, err), kExitConfigError);
  EXPECT_NE(err.str().find("config error"), std::string::npos);

  RunConfig missing;
  missing.scenario_path = tmp.path() / "nope.json";
  EXPECT_EQ(run_command(missing, out, err), kExitConfigError);

  RunConfig blocked;
  blocked.scenario_path = short_scenario(tmp.path(), 60.0);
  blocked.output_dir    = write(tmp.path() / "a_file", "x");
  EXPECT_EQ(run_command(blocked, out, err), kExitIoError);
}

TEST(CompareCommandTest, SharedStreamAndSubdirectories)
{
  TempDir   tmp;
  RunConfig c;
  c.scenario_path = short_scenario(tmp.path());
  c.output_dir    = tmp.path() / "cmp";
  std::ostringstream out, err;
  ASSERT_EQ(compare_command(c, {Strategy::Dapa, Strategy::UserEquilibrium,
                                Strategy::RandomSelection},
                            out, err),
            kExitOk)
      << err.str();
  EXPECT_NE(out.str().find("shared arrival stream: yes"), std::string::npos);
  std::string digest;
  for (auto const *name : {"dapa", "ue", "rs"})
  {
    auto const summary = json::parse(slurp(c.output_dir / name / "summary.json"));
    EXPECT_EQ(summary["strategy"], name);
    if (digest.empty())
      digest = summary["arrival_digest"];
    EXPECT_EQ(summary["arrival_digest"], digest);
  }
}

TEST(ProbeCommandTest, NoProfitableMisreports)
{
  TempDir   tmp;
  RunConfig c;
  c.scenario_path = short_scenario(tmp.path());
  c.output_dir    = tmp.path() / "probe";
  std::ostringstream out, err;
  EXPECT_EQ(probe_command(c, 10, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("profitable misreports    0"), std::string::npos);
  EXPECT_GT(read_csv(c.output_dir / "truthfulness.csv").size(), 10u);
}

TEST(MisreportGridTest, ContainsTruthAndBoundaries)
{
  auto const grid = misreport_grid(300.0, 20.0);
  EXPECT_NE(std::find(grid.begin(), grid.end(), 300.0), grid.end());
  EXPECT_NE(std::find(grid.begin(), grid.end(), 20.0), grid.end());
  EXPECT_NE(std::find(grid.begin(), grid.end(), 10.0), grid.end());
}

}  // namespace
