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

#include "offload/outputs.hpp"

#include "offload/scenario_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace offload {
namespace {

using nlohmann::json;

double rounded(double value)
{
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string hex(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename Writer>
void write_file(std::filesystem::path const &path, Writer &&writer)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw OutputError("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out)
    throw OutputError("write failed: " + path.string());
}

}  // namespace

std::string format_number(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_events_csv(std::ostream &out, EventLog const &log)
{
  out << kEventsHeader << '\n';
  for (auto const &ev : log)
  {
    out << format_number(ev.time) << ',' << (ev.kind == EventKind::Join ? "join" : "leave") << ','
        << ev.user << ',';
    if (ev.pair)
    {
      out << ev.pair->ap << ',' << ev.pair->server << ',' << format_number(ev.delay.transmission)
          << ',' << format_number(ev.delay.transfer) << ',' << format_number(ev.delay.computation)
          << ',' << format_number(ev.delay.total) << ',' << format_number(ev.payment) << ',';
    }
    else
    {
      out << ",,,,,,,";
    }
    if (ev.fallback)
      out << to_string(*ev.fallback);
    out << '\n';
  }
}

void write_workload_csv(std::ostream &out, std::vector<WorkloadSample> const &samples,
                        bool servers, int stride)
{
  out << kWorkloadHeader << '\n';
  for (std::size_t k = 0; k < samples.size(); k += static_cast<std::size_t>(stride))
  {
    auto const &counts = servers ? samples[k].server_tasks : samples[k].ap_users;
    for (Eigen::Index id = 0; id < counts.size(); ++id)
      out << format_number(samples[k].time) << ',' << id << ',' << counts(id) << '\n';
  }
}

void write_users_csv(std::ostream &out, std::vector<UserRow> const &users)
{
  out << kUsersHeader << '\n';
  for (auto const &u : users)
  {
    out << u.user << ',' << format_number(u.deadline) << ',' << format_number(u.min_latency) << ','
        << format_number(u.latency) << ',' << format_number(u.ratio()) << ','
        << format_number(u.payment) << ',' << format_number(u.valuation) << ','
        << format_number(u.cost()) << '\n';
  }
}

json summary_json(RunResult const &result, Scenario const &scenario)
{
  auto const  s = summarize(result, scenario);
  auto const &m = result.metrics;

  // The echo pins the drawn topology so the run can be replayed exactly.
  Scenario resolved = scenario;
  resolved.topology = result.topology;

  json aggregates = {
      {"arrivals", s.arrivals},
      {"admitted", s.admitted},
      {"fallbacks", s.fallbacks},
      {"fallback_no_coverage", m.fallback_count(FallbackReason::NoCoverage)},
      {"fallback_no_feasible_pair", m.fallback_count(FallbackReason::NoFeasiblePair)},
      {"fallback_deadline_violated", m.fallback_count(FallbackReason::DeadlineViolated)},
      {"deadline_misses_with_alternative", m.deadline_misses_with_alternative},
      {"post_admission_violations", m.post_admission_violations},
      {"mean_latency_s", rounded(s.mean_latency)},
      {"mean_payment", rounded(s.mean_payment)},
      {"final_hour_mean_latency_s", rounded(s.final_hour_mean_latency)},
      {"final_hour_admitted", s.final_hour_admitted},
      {"ap_load_spread", rounded(s.ap_spread)},
      {"server_load_spread", rounded(s.server_spread)},
      {"invariant_checks", m.invariant_checks},
      {"invariant_violations", m.invariant_violations.size()},
      {"oracle_checks", m.oracle_checks},
      {"oracle_agreements", m.oracle_agreements},
  };
  return {{"strategy", std::string(to_string(scenario.strategy))},
          {"seed", scenario.seed},
          {"arrival_digest", hex(arrival_digest(result.requests))},
          {"aggregates", aggregates},
          {"scenario", scenario_to_json(resolved)}};
}

void emit_outputs(RunResult const &result, Scenario const &scenario,
                  std::filesystem::path const &dir, int stride)
{
  if (stride < 1)
    throw OutputError("stride must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw OutputError("cannot create " + dir.string() + ": " + ec.message());

  write_file(dir / "events.csv", [&](std::ostream &o) { write_events_csv(o, result.log); });
  write_file(dir / "workload_ap.csv",
             [&](std::ostream &o) { write_workload_csv(o, result.metrics.samples, false, stride); });
  write_file(dir / "workload_server.csv",
             [&](std::ostream &o) { write_workload_csv(o, result.metrics.samples, true, stride); });
  write_file(dir / "users.csv", [&](std::ostream &o) { write_users_csv(o, result.metrics.users); });
  write_file(dir / "summary.json",
             [&](std::ostream &o) { o << summary_json(result, scenario).dump(2) << '\n'; });
}

}  // namespace offload
