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

#include "offload/latency.hpp"
#include "offload/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace offload {

/// Monetary value of time, per second, for each resource the system owns.
struct Rates
{
  Eigen::VectorXd alpha;  // per AP
  Eigen::MatrixXd beta;   // per (AP, server) transfer
  Eigen::VectorXd gamma;  // per server
};

Rates rates_of(Topology const &topo);

enum class Strategy
{
  Dapa,
  UserEquilibrium,
  RandomSelection,
};

std::string_view      to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

enum class FallbackReason
{
  NoCoverage,
  NoFeasiblePair,
  DeadlineViolated,
};

std::string_view to_string(FallbackReason r);

struct Admission
{
  DecisionPair   pair;
  DelayBreakdown delay;
  double         payment       = 0.0;  // charged to the user
  double         system_income = 0.0;  // credited to the system
  double         user_valuation          = 0.0;
  double         user_utility            = 0.0;
  double         system_valuation_before = 0.0;
  double         system_valuation_after  = 0.0;
  double         surplus                 = 0.0;
};

struct CloudFallback
{
  FallbackReason reason = FallbackReason::NoCoverage;
  // Set when the chosen pair missed the deadline.
  std::optional<DecisionPair> rejected_pair;
  DelayBreakdown              rejected_delay;
  bool                        other_pair_met_deadline = false;
};

struct AdmissionOutcome
{
  std::variant<Admission, CloudFallback> decision;

  bool admitted() const
  {
    return std::holds_alternative<Admission>(decision);
  }
  Admission const &admission() const
  {
    return std::get<Admission>(decision);
  }
  CloudFallback const &fallback() const
  {
    return std::get<CloudFallback>(decision);
  }
};

/// psi_k * (T_k - total). Negative when the delay exceeds the deadline.
double user_valuation(TaskRequest const &req, DelayBreakdown const &delay);

/// Monetized delay of every user in the roster at the current counts.
double system_valuation(SystemState const &state, Topology const &topo, Rates const &rates);

/// As above, leaving one user out of both the per-user terms and x.
double system_valuation_excluding(SystemState const &state, Topology const &topo,
                                  Rates const &rates, UserId excluded);

/// Externality of the new user on its AP and server co-tenants plus its own
/// monetized delay. DAPA minimizes this over feasible pairs.
double miss2_value(SystemState const &state, Topology const &topo, Rates const &rates,
                   TaskRequest const &req, DecisionPair pair);

/// Instant social surplus evaluated by simulating the join on a copy.
/// Reference implementation; the allocation rule never calls it.
double miss_value(SystemState const &state, Topology const &topo, Rates const &rates,
                  TaskRequest const &req, DecisionPair pair);

/// Marginal-cost price: the increase in the monetized delay of existing users.
double payment(SystemState const &state_before, Topology const &topo, Rates const &rates,
               DecisionPair pair);

AdmissionOutcome dapa_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                             TaskRequest const &req);
AdmissionOutcome ue_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                           TaskRequest const &req);
AdmissionOutcome rs_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                           TaskRequest const &req, std::mt19937_64 &rng);

struct ProbeRow
{
  double                      declared = 0.0;
  bool                        admitted = false;
  std::optional<DecisionPair> pair;
  double                      true_utility = 0.0;
  // Admitted on a pair that also meets the true deadline.
  bool comparable = false;
};

struct ProbeReport
{
  double                true_deadline    = 0.0;
  double                truthful_utility = 0.0;
  std::optional<DecisionPair> truthful_pair;
  std::vector<ProbeRow> rows;
  int                   comparisons              = 0;
  double                max_profitable_deviation = 0.0;  // only meaningful if comparisons > 0
  bool                  truthful_dominates       = true;
};

/// Replays the DAPA decision under each declared deadline and scores every
/// outcome with the user's true valuation. Fallback scores zero.
ProbeReport truthfulness_probe(SystemState const &state, Topology const &topo, Rates const &rates,
                               TaskRequest const &req, std::vector<double> const &misreports,
                               double tolerance = 1e-9);

}  // namespace offload
