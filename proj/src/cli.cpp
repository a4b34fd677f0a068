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
#include "offload/simulator.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace offload {
namespace {

struct Loaded
{
  Scenario scenario;
  int      status = kExitOk;
};

Loaded load(RunConfig const &config, std::ostream &err)
{
  Loaded l;
  try
  {
    if (config.scenario_path.empty())
      err << "no scenario file given; using built-in defaults\n";
    else
      l.scenario = load_scenario(config.scenario_path, &err);
    if (config.strategy)
      l.scenario.strategy = *config.strategy;
    if (config.seed)
      l.scenario.seed = *config.seed;
    l.scenario.validate();
    if (config.stride < 1)
      throw ScenarioError("stride must be >= 1");
  }
  catch (std::exception const &e)
  {
    err << "config error: " << e.what() << '\n';
    l.status = kExitConfigError;
  }
  return l;
}

std::string fmt(double v, int precision = 4)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void print_summary(std::ostream &out, RunResult const &r, Scenario const &s)
{
  auto const sum = summarize(r, s);
  auto const &m  = r.metrics;
  out << "strategy            " << to_string(s.strategy) << "  (seed " << s.seed << ")\n"
      << "arrivals            " << sum.arrivals << '\n'
      << "admitted            " << sum.admitted << '\n'
      << "cloud fallbacks     " << sum.fallbacks << "  (no coverage "
      << m.fallback_count(FallbackReason::NoCoverage) << ", no feasible pair "
      << m.fallback_count(FallbackReason::NoFeasiblePair) << ", deadline "
      << m.fallback_count(FallbackReason::DeadlineViolated) << ")\n"
      << "mean latency        " << fmt(sum.mean_latency, 3) << " s  (final hour "
      << fmt(sum.final_hour_mean_latency, 3) << " s)\n"
      << "mean payment        " << fmt(sum.mean_payment, 6) << '\n'
      << "AP load spread      " << fmt(sum.ap_spread) << '\n'
      << "server load spread  " << fmt(sum.server_spread) << '\n';
  if (m.invariant_checks > 0)
    out << "invariant checks    " << m.invariant_checks << "  violations "
        << m.invariant_violations.size() << '\n';
  if (m.oracle_checks > 0 || s.strategy == Strategy::Dapa)
    out << "oracle agreement    " << m.oracle_agreements << " / " << m.oracle_checks << '\n';
}

// Runs, writes outputs, and maps failures to exit codes.
int execute(Scenario const &scenario, RunConfig const &config, std::filesystem::path const &dir,
            std::ostream &out, std::ostream &err, RunResult *result_out = nullptr)
{
  RunOptions options;
  options.check_invariants = config.check_invariants;
  options.oracle_check     = config.oracle_check;

  RunResult result;
  try
  {
    result = run(scenario, options);
  }
  catch (std::logic_error const &e)
  {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariantViolation;
  }
  try
  {
    emit_outputs(result, scenario, dir, config.stride);
  }
  catch (OutputError const &e)
  {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  }
  print_summary(out, result, scenario);

  int status = kExitOk;
  auto const &m = result.metrics;
  if (!m.invariant_violations.empty())
  {
    err << "invariant violation: " << m.invariant_violations.front() << '\n';
    status = kExitInvariantViolation;
  }
  if (m.oracle_agreements != m.oracle_checks)
  {
    err << "oracle disagreement on " << (m.oracle_checks - m.oracle_agreements) << " decisions\n";
    status = kExitInvariantViolation;
  }
  if (result_out != nullptr)
    *result_out = std::move(result);
  return status;
}

std::vector<Strategy> parse_strategy_list(std::string const &csv)
{
  std::vector<Strategy> out;
  std::stringstream     in(csv);
  std::string           item;
  while (std::getline(in, item, ','))
  {
    auto s = parse_strategy(item);
    if (!s)
      throw CLI::ValidationError("--strategies", "unknown strategy '" + item + "'");
    out.push_back(*s);
  }
  return out;
}

}  // namespace

int run_command(RunConfig const &config, std::ostream &out, std::ostream &err)
{
  auto loaded = load(config, err);
  if (loaded.status != kExitOk)
    return loaded.status;
  return execute(loaded.scenario, config, config.output_dir, out, err);
}

int compare_command(RunConfig const &config, std::vector<Strategy> const &strategies,
                    std::ostream &out, std::ostream &err)
{
  auto loaded = load(config, err);
  if (loaded.status != kExitOk)
    return loaded.status;

  struct Row
  {
    Strategy      strategy;
    RunSummary    summary;
    std::uint64_t digest;
  };
  std::vector<Row> rows;
  int              status = kExitOk;
  for (auto strategy : strategies)
  {
    Scenario scenario = loaded.scenario;
    scenario.strategy = strategy;
    RunResult result;
    std::ostringstream quiet;
    int const code =
        execute(scenario, config, config.output_dir / std::string(to_string(strategy)), quiet, err,
                &result);
    if (code == kExitIoError || code == kExitConfigError)
      return code;
    status = std::max(status, code);
    rows.push_back({strategy, summarize(result, scenario), arrival_digest(result.requests)});
  }

  out << "strategy  arrivals  admitted  fallbacks  mean_latency_s  final_hour_latency_s  "
         "mean_payment  ap_spread  server_spread\n";
  for (auto const &r : rows)
  {
    char line[256];
    std::snprintf(line, sizeof line, "%-8s  %8d  %8d  %9d  %14.3f  %20.3f  %12.6f  %9.4f  %13.4f\n",
                  std::string(to_string(r.strategy)).c_str(), r.summary.arrivals, r.summary.admitted,
                  r.summary.fallbacks, r.summary.mean_latency, r.summary.final_hour_mean_latency,
                  r.summary.mean_payment, r.summary.ap_spread, r.summary.server_spread);
    out << line;
  }
  for (auto const &r : rows)
  {
    if (r.digest != rows.front().digest)
    {
      err << "arrival streams differ between strategies\n";
      return kExitInvariantViolation;
    }
  }
  out << "shared arrival stream: yes\n";
  return status;
}

std::vector<double> misreport_grid(double true_deadline, double min_latency)
{
  std::vector<double> grid;
  for (double f : {0.05, 0.25, 0.5, 0.75, 0.9, 0.99, 1.01, 1.1, 1.5, 2.0, 5.0})
    grid.push_back(true_deadline * f);
  if (min_latency > 0)
  {
    for (double f : {0.5, 0.999, 1.0, 1.001, 1.5})
      grid.push_back(min_latency * f);
  }
  grid.push_back(true_deadline);
  return grid;
}

int probe_command(RunConfig const &config, int every, std::ostream &out, std::ostream &err)
{
  if (every < 1)
  {
    err << "config error: --every must be >= 1\n";
    return kExitConfigError;
  }
  auto loaded = load(config, err);
  if (loaded.status != kExitOk)
    return loaded.status;
  loaded.scenario.strategy = Strategy::Dapa;

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  std::ofstream csv(config.output_dir / "truthfulness.csv", std::ios::binary);
  if (ec || !csv)
  {
    err << "io error: cannot write " << (config.output_dir / "truthfulness.csv").string() << '\n';
    return kExitIoError;
  }
  csv << "user,true_deadline,declared,admitted,i,j,true_utility,truthful_utility,comparable\n";

  int    probes = 0, comparisons = 0, violations = 0;
  double worst  = 0.0;
  bool   any    = false;

  RunOptions options;
  options.before_decision = [&](SystemState const &state, Topology const &topo, Rates const &rates,
                                TaskRequest const &req) {
    if (req.user_id % every != 0)
      return;
    auto const tmin = min_latency(topo, req);
    if (!tmin)
      return;
    auto const report =
        truthfulness_probe(state, topo, rates, req, misreport_grid(req.deadline, *tmin));
    ++probes;
    comparisons += report.comparisons;
    if (!report.truthful_dominates)
      ++violations;
    if (report.comparisons > 0)
    {
      worst = any ? std::max(worst, report.max_profitable_deviation)
                  : report.max_profitable_deviation;
      any   = true;
    }
    for (auto const &row : report.rows)
    {
      csv << req.user_id << ',' << format_number(req.deadline) << ',' << format_number(row.declared)
          << ',' << (row.admitted ? 1 : 0) << ',';
      if (row.pair)
        csv << row.pair->ap << ',' << row.pair->server;
      else
        csv << ',';
      csv << ',' << format_number(row.true_utility) << ',' << format_number(report.truthful_utility)
          << ',' << (row.comparable ? 1 : 0) << '\n';
    }
  };

  try
  {
    run(loaded.scenario, options);
  }
  catch (std::logic_error const &e)
  {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariantViolation;
  }
  csv.flush();
  if (!csv)
  {
    err << "io error: write failed\n";
    return kExitIoError;
  }

  out << "probed arrivals          " << probes << '\n'
      << "comparable misreports    " << comparisons << '\n'
      << "max profitable deviation " << (any ? format_number(worst) : std::string("n/a")) << '\n'
      << "profitable misreports    " << violations << '\n';
  return violations == 0 ? kExitOk : kExitInvariantViolation;
}

int cli_main(int argc, char **argv)
{
  CLI::App app{"Edge computation offloading simulator with marginal-cost pricing"};
  app.require_subcommand(1);

  RunConfig   config;
  std::string strategy;
  std::string strategies = "dapa,ue,rs";
  int         every      = 50;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--scenario", config.scenario_path, "Scenario JSON file (defaults if omitted)");
    cmd->add_option("--seed", config.seed, "Override the scenario seed");
    cmd->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
  };
  auto add_run_flags = [&](CLI::App *cmd) {
    cmd->add_option("--stride", config.stride, "Sample stride for workload series")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--check-invariants", config.check_invariants,
                  "Recheck state invariants after every event");
    cmd->add_flag("--oracle-check", config.oracle_check,
                  "Cross-check every DAPA decision against the surplus oracle");
  };

  auto *run_cmd = app.add_subcommand("run", "Simulate one strategy");
  add_common(run_cmd);
  add_run_flags(run_cmd);
  run_cmd->add_option("--strategy", strategy, "dapa | ue | rs")
      ->check(CLI::IsMember({"dapa", "ue", "rs"}));

  auto *compare_cmd = app.add_subcommand("compare", "Simulate several strategies on one stream");
  add_common(compare_cmd);
  add_run_flags(compare_cmd);
  compare_cmd->add_option("--strategies", strategies, "Comma-separated list")
      ->capture_default_str();

  auto *probe_cmd =
      app.add_subcommand("probe-truthfulness", "Check that misreporting deadlines never pays");
  add_common(probe_cmd);
  probe_cmd->add_option("--every", every, "Probe every N-th arrival")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (!strategy.empty())
    config.strategy = parse_strategy(strategy);

  if (*run_cmd)
    return run_command(config, std::cout, std::cerr);
  if (*compare_cmd)
  {
    std::vector<Strategy> list;
    try
    {
      list = parse_strategy_list(strategies);
    }
    catch (CLI::ValidationError const &e)
    {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfigError;
    }
    return compare_command(config, list, std::cout, std::cerr);
  }
  return probe_command(config, every, std::cout, std::cerr);
}

}  // namespace offload
