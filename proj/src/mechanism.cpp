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

#include <algorithm>
#include <cmath>
#include <limits>

namespace offload {
namespace {

Cloudlet const &at(Topology const &topo, int index)
{
  return topo.cloudlets[static_cast<std::size_t>(index)];
}

// Data on each AP (Mb) and cycles on each server, summed over the roster.
struct LoadSums
{
  Eigen::VectorXd megabits_on_ap;
  Eigen::VectorXd cycles_on_server;
};

LoadSums load_sums(SystemState const &state)
{
  LoadSums sums{Eigen::VectorXd::Zero(state.size()), Eigen::VectorXd::Zero(state.size())};
  for (auto const &r : state.roster())
  {
    sums.megabits_on_ap(r.pair.ap) += r.data_mb * kMegabitsPerMegabyte;
    sums.cycles_on_server(r.pair.server) += r.cycles;
  }
  return sums;
}

// One more user on AP i adds D_n / B_i to each co-tenant's uplink time; one
// more task on server j adds C_n / F_j to each co-tenant's execution time.
double externality(LoadSums const &sums, Topology const &topo, Rates const &rates,
                   DecisionPair pair)
{
  auto const [i, j] = pair;
  return rates.alpha(i) * sums.megabits_on_ap(i) / at(topo, i).bandwidth_mbps +
         rates.gamma(j) * sums.cycles_on_server(j) / at(topo, j).compute_hz;
}

double miss2_from_sums(LoadSums const &sums, SystemState const &state, Topology const &topo,
                       Rates const &rates, TaskRequest const &req, DecisionPair pair)
{
  return externality(sums, topo, rates, pair) + req.psi * total_delay(state, topo, req, pair).total;
}

Admission admit(SystemState const &state, Topology const &topo, Rates const &rates,
                TaskRequest const &req, DecisionPair pair, DelayBreakdown const &delay,
                double price)
{
  Admission a;
  a.pair                    = pair;
  a.delay                   = delay;
  a.payment                 = price;
  a.system_income           = price;
  a.user_valuation          = user_valuation(req, delay);
  a.user_utility            = a.user_valuation - a.payment;
  a.system_valuation_before = system_valuation(state, topo, rates);
  auto const after = apply_join(state, topo, make_record(req, pair, delay, price));
  a.system_valuation_after = system_valuation_excluding(after, topo, rates, req.user_id);
  a.surplus                = a.user_valuation - a.system_valuation_after;
  return a;
}

// Deadline check on the chosen pair only; an unmet deadline sends the task to the cloud.
AdmissionOutcome settle(SystemState const &state, Topology const &topo, Rates const &rates,
                        TaskRequest const &req, std::vector<DecisionPair> const &pairs,
                        DecisionPair chosen, double price)
{
  auto const delay = total_delay(state, topo, req, chosen);
  if (meets_deadline(delay, req.deadline))
  {
    return {admit(state, topo, rates, req, chosen, delay, price)};
  }
  CloudFallback fb;
  fb.reason         = FallbackReason::DeadlineViolated;
  fb.rejected_pair  = chosen;
  fb.rejected_delay = delay;
  fb.other_pair_met_deadline =
      std::any_of(pairs.begin(), pairs.end(), [&](DecisionPair p) {
        return p != chosen && meets_deadline(total_delay(state, topo, req, p), req.deadline);
      });
  return {fb};
}

std::optional<AdmissionOutcome> no_candidates(Topology const &topo, TaskRequest const &req,
                                              std::vector<DecisionPair> const &pairs)
{
  if (!pairs.empty())
    return std::nullopt;
  CloudFallback fb;
  fb.reason = covering_aps(topo, req.position).empty() ? FallbackReason::NoCoverage
                                                       : FallbackReason::NoFeasiblePair;
  return AdmissionOutcome{fb};
}

}  // namespace

Rates rates_of(Topology const &topo)
{
  Rates r{Eigen::VectorXd(topo.size()), topo.beta, Eigen::VectorXd(topo.size())};
  for (int i = 0; i < topo.size(); ++i)
  {
    r.alpha(i) = at(topo, i).alpha;
    r.gamma(i) = at(topo, i).gamma;
  }
  return r;
}

std::string_view to_string(Strategy s)
{
  switch (s)
  {
  case Strategy::Dapa:
    return "dapa";
  case Strategy::UserEquilibrium:
    return "ue";
  case Strategy::RandomSelection:
    return "rs";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name)
{
  for (auto s : {Strategy::Dapa, Strategy::UserEquilibrium, Strategy::RandomSelection})
  {
    if (to_string(s) == name)
      return s;
  }
  return std::nullopt;
}

std::string_view to_string(FallbackReason r)
{
  switch (r)
  {
  case FallbackReason::NoCoverage:
    return "no_coverage";
  case FallbackReason::NoFeasiblePair:
    return "no_feasible_pair";
  case FallbackReason::DeadlineViolated:
    return "deadline_violated";
  }
  return "?";
}

double user_valuation(TaskRequest const &req, DelayBreakdown const &delay)
{
  return req.psi * (req.deadline - delay.total);
}

double system_valuation(SystemState const &state, Topology const &topo, Rates const &rates)
{
  double value = 0.0;
  for (auto const &r : state.roster())
  {
    auto const d = current_delay(state, topo, r);
    value += rates.alpha(r.pair.ap) * d.transmission + rates.gamma(r.pair.server) * d.computation;
  }
  Eigen::MatrixXd transfer = topo.transfer_delay;
  transfer.diagonal().setZero();
  value += 2.0 * rates.beta.cwiseProduct(state.pair_counts().cast<double>())
                     .cwiseProduct(transfer)
                     .sum();
  return value;
}

double system_valuation_excluding(SystemState const &state, Topology const &topo,
                                  Rates const &rates, UserId excluded)
{
  double          value  = 0.0;
  Eigen::MatrixXd counts = state.pair_counts().cast<double>();
  for (auto const &r : state.roster())
  {
    if (r.user_id == excluded)
    {
      counts(r.pair.ap, r.pair.server) -= 1.0;
      continue;
    }
    auto const d = current_delay(state, topo, r);
    value += rates.alpha(r.pair.ap) * d.transmission + rates.gamma(r.pair.server) * d.computation;
  }
  Eigen::MatrixXd transfer = topo.transfer_delay;
  transfer.diagonal().setZero();
  value += 2.0 * rates.beta.cwiseProduct(counts).cwiseProduct(transfer).sum();
  return value;
}

double miss2_value(SystemState const &state, Topology const &topo, Rates const &rates,
                   TaskRequest const &req, DecisionPair pair)
{
  return miss2_from_sums(load_sums(state), state, topo, rates, req, pair);
}

double miss_value(SystemState const &state, Topology const &topo, Rates const &rates,
                  TaskRequest const &req, DecisionPair pair)
{
  auto const delay = total_delay(state, topo, req, pair);
  SystemState after = state;
  after.join(topo, make_record(req, pair, delay, 0.0));
  return user_valuation(req, delay) - system_valuation_excluding(after, topo, rates, req.user_id);
}

double payment(SystemState const &state_before, Topology const &topo, Rates const &rates,
               DecisionPair pair)
{
  return externality(load_sums(state_before), topo, rates, pair);
}

AdmissionOutcome dapa_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                             TaskRequest const &req)
{
  auto const pairs = feasible_pairs(state, topo, req);
  if (auto fb = no_candidates(topo, req, pairs))
    return *fb;

  auto const   sums = load_sums(state);
  DecisionPair best = pairs.front();
  double       best_value = std::numeric_limits<double>::infinity();
  for (auto const p : pairs)  // lexicographic, so strict < keeps the smallest (i, j) on ties
  {
    double const value = miss2_from_sums(sums, state, topo, rates, req, p);
    if (value < best_value)
    {
      best_value = value;
      best       = p;
    }
  }
  return settle(state, topo, rates, req, pairs, best, externality(sums, topo, rates, best));
}

AdmissionOutcome ue_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                           TaskRequest const &req)
{
  auto const pairs = feasible_pairs(state, topo, req);
  if (auto fb = no_candidates(topo, req, pairs))
    return *fb;

  DecisionPair best = pairs.front();
  double       best_delay = std::numeric_limits<double>::infinity();
  for (auto const p : pairs)
  {
    double const d = total_delay(state, topo, req, p).total;
    if (d < best_delay)
    {
      best_delay = d;
      best       = p;
    }
  }
  return settle(state, topo, rates, req, pairs, best, 0.0);
}

AdmissionOutcome rs_decide(SystemState const &state, Topology const &topo, Rates const &rates,
                           TaskRequest const &req, std::mt19937_64 &rng)
{
  auto const pairs = feasible_pairs(state, topo, req);
  if (auto fb = no_candidates(topo, req, pairs))
    return *fb;

  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  return settle(state, topo, rates, req, pairs, pairs[pick(rng)], 0.0);
}

ProbeReport truthfulness_probe(SystemState const &state, Topology const &topo, Rates const &rates,
                               TaskRequest const &req, std::vector<double> const &misreports,
                               double tolerance)
{
  ProbeReport report;
  report.true_deadline = req.deadline;

  auto const truthful = dapa_decide(state, topo, rates, req);
  if (truthful.admitted())
  {
    report.truthful_utility = truthful.admission().user_utility;
    report.truthful_pair    = truthful.admission().pair;
  }

  report.max_profitable_deviation = -std::numeric_limits<double>::infinity();
  for (double declared : misreports)
  {
    TaskRequest lied = req;
    lied.deadline    = declared;
    auto const outcome = dapa_decide(state, topo, rates, lied);

    ProbeRow row;
    row.declared = declared;
    row.admitted = outcome.admitted();
    if (outcome.admitted())
    {
      auto const &a    = outcome.admission();
      row.pair         = a.pair;
      row.true_utility = user_valuation(req, a.delay) - a.payment;
      row.comparable   = meets_deadline(a.delay, req.deadline);
    }
    if (row.comparable)
    {
      ++report.comparisons;
      double const gain = row.true_utility - report.truthful_utility;
      report.max_profitable_deviation = std::max(report.max_profitable_deviation, gain);
      double const scale = std::max({1.0, std::abs(report.truthful_utility),
                                     std::abs(row.true_utility)});
      if (gain > tolerance * scale)
        report.truthful_dominates = false;
    }
    report.rows.push_back(row);
  }
  if (report.comparisons == 0)
    report.max_profitable_deviation = 0.0;
  return report;
}

}  // namespace offload
