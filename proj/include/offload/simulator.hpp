#pragma once
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

#include "offload/mechanism.hpp"
#include "offload/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace offload {

/// Ranges the cloudlet topology is drawn from when a scenario does not pin one.
struct TopologyParams
{
  int                 count        = 8;
  int                 grid_columns = 4;
  std::vector<double> radius_choices{75.0, 100.0, 125.0};  // m
  double              bandwidth_mean_mbps  = 100.0;
  double              bandwidth_sd_mbps    = 25.0;
  double              bandwidth_floor_mbps = 1.0;
  int                 ap_capacity_min      = 10;
  int                 ap_capacity_max      = 30;
  double              compute_min_ghz      = 5.0;
  double              compute_max_ghz      = 10.0;
  double              transfer_min_s       = 0.1;
  double              transfer_max_s       = 0.5;
  double              memory_mb            = 8000.0;

  bool operator==(TopologyParams const &) const = default;
};

/// Monetary preferences as configured, in money per hour.
struct HourlyRates
{
  double psi   = 1.0;
  double alpha = 50.0;
  double gamma = 50.0;
  double beta  = 50.0;

  bool operator==(HourlyRates const &) const = default;
};

inline constexpr std::size_t kUrgencyClasses = 3;

struct Scenario
{
  double         area_width  = 500.0;
  double         area_height = 500.0;
  TopologyParams cloudlets;
  // Pinned topology (rates per second). When absent it is drawn from the seed.
  std::optional<Topology> topology;

  double arrival_rate = 1200.0 / 3600.0;  // users per second
  double duration     = 3.0 * 3600.0;     // s

  std::array<double, kUrgencyClasses> urgency_mix{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::array<double, kUrgencyClasses> urgency_slack{100.0, 200.0, 300.0};  // s beyond t_k

  double      data_mb_min    = 5.0;
  double      data_mb_max    = 60.0;
  double      cycles_per_bit = 1000.0;
  HourlyRates rates;

  std::uint64_t seed     = 1;
  Strategy      strategy = Strategy::Dapa;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  bool operator==(Scenario const &) const = default;
};

// Independent generator streams derived from one scenario seed.
enum class Stream : std::uint64_t
{
  Topology = 1,
  Arrivals = 2,
  Strategy = 3,
};

std::uint64_t derive_seed(std::uint64_t seed, Stream stream);

Topology draw_topology(Scenario const &scenario);
Topology resolved_topology(Scenario const &scenario);

/// Smallest total delay the user could get alone in the system, over all
/// covering APs and all servers. Empty when no AP covers the user.
std::optional<double> min_latency(Topology const &topo, TaskRequest const &req);

std::vector<TaskRequest> generate_arrivals(Scenario const &scenario, Topology const &topo,
                                           std::mt19937_64 &rng);

/// Arrival stream for the scenario's seed; independent of the strategy.
std::vector<TaskRequest> arrival_stream(Scenario const &scenario, Topology const &topo);

std::uint64_t arrival_digest(std::vector<TaskRequest> const &requests);

enum class EventKind
{
  Join,
  Leave,
};

struct EventRecord
{
  double                        time = 0.0;
  EventKind                     kind = EventKind::Join;
  UserId                        user = 0;
  Strategy                      strategy = Strategy::Dapa;
  std::optional<DecisionPair>   pair;
  DelayBreakdown                delay;
  double                        payment = 0.0;
  Eigen::VectorXi               ap_users;
  Eigen::VectorXi               server_tasks;
  std::optional<FallbackReason> fallback;
};

using EventLog = std::vector<EventRecord>;

struct WorkloadSample
{
  double          time = 0.0;
  Eigen::VectorXi ap_users;
  Eigen::VectorXi server_tasks;
};

struct UserRow
{
  UserId       user         = 0;
  double       arrival_time = 0.0;
  DecisionPair pair;
  double       deadline    = 0.0;
  double       min_latency = 0.0;
  double       latency     = 0.0;
  double       payment     = 0.0;
  double       valuation   = 0.0;
  double       system_valuation_before = 0.0;
  double       system_valuation_after  = 0.0;

  double ratio() const
  {
    return latency / deadline;
  }
  double min_ratio() const
  {
    return min_latency / deadline;
  }
  double cost() const
  {
    return payment - valuation;
  }
};

struct RunMetrics
{
  std::vector<WorkloadSample> samples;
  std::vector<UserRow>        users;  // admitted users, in admission order
  int                         joins = 0;
  std::array<int, 3>          fallbacks{0, 0, 0};  // indexed by FallbackReason
  int                         deadline_misses_with_alternative = 0;
  int                         post_admission_violations        = 0;
  int                         invariant_checks                 = 0;
  std::vector<std::string>    invariant_violations;
  int                         oracle_checks     = 0;
  int                         oracle_agreements = 0;

  int fallback_count(FallbackReason r) const
  {
    return fallbacks[static_cast<std::size_t>(r)];
  }
  int total_fallbacks() const
  {
    return fallbacks[0] + fallbacks[1] + fallbacks[2];
  }
};

struct RunOptions
{
  bool check_invariants = false;
  bool oracle_check     = false;
  // Called with the state every decision is made against.
  std::function<void(SystemState const &, Topology const &, Rates const &, TaskRequest const &)>
      before_decision;
};

struct RunResult
{
  Topology                 topology;
  std::vector<TaskRequest> requests;
  EventLog                 log;
  RunMetrics               metrics;
};

RunResult run(Scenario const &scenario, RunOptions const &options = {});

/// Scalar aggregates reported in the summary.
struct RunSummary
{
  int    arrivals  = 0;
  int    admitted  = 0;
  int    fallbacks = 0;
  double mean_latency            = 0.0;
  double mean_payment            = 0.0;
  double final_hour_mean_latency = 0.0;
  int    final_hour_admitted     = 0;
  double ap_spread               = 0.0;  // time-averaged std of u across APs
  double server_spread           = 0.0;  // time-averaged std of v across servers
};

RunSummary summarize(RunResult const &result, Scenario const &scenario);

/// Population standard deviation across entities, averaged over [t0, t1]
/// treating each sample as holding until the next one.
double time_averaged_spread(std::vector<WorkloadSample> const &samples, bool servers, double t0,
                            double t1);

}  // namespace offload
