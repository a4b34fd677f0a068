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

#include "offload/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace offload {
namespace {

[[noreturn]] void invalid(std::string const &msg)
{
  throw std::invalid_argument("scenario: " + msg);
}

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::uint64_t hash, void const *data, std::size_t n)
{
  auto const *bytes = static_cast<unsigned char const *>(data);
  for (std::size_t k = 0; k < n; ++k)
  {
    hash ^= bytes[k];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

template <typename T>
std::uint64_t fnv1a(std::uint64_t hash, T const &value)
{
  return fnv1a(hash, &value, sizeof(T));
}

AdmissionOutcome decide(Strategy strategy, SystemState const &state, Topology const &topo,
                        Rates const &rates, TaskRequest const &req, std::mt19937_64 &rng)
{
  switch (strategy)
  {
  case Strategy::Dapa:
    return dapa_decide(state, topo, rates, req);
  case Strategy::UserEquilibrium:
    return ue_decide(state, topo, rates, req);
  case Strategy::RandomSelection:
    return rs_decide(state, topo, rates, req, rng);
  }
  throw std::logic_error("unknown strategy");
}

// Cross-checks the closed-form objective against the state-copy oracle.
bool oracle_agrees(SystemState const &state, Topology const &topo, Rates const &rates,
                   TaskRequest const &req, DecisionPair chosen)
{
  auto const pairs = feasible_pairs(state, topo, req);
  DecisionPair best       = pairs.front();
  double       best_value = -std::numeric_limits<double>::infinity();
  double       lo = std::numeric_limits<double>::infinity();
  double       hi = -std::numeric_limits<double>::infinity();
  double       scale = 0.0;
  for (auto const p : pairs)
  {
    double const surplus = miss_value(state, topo, rates, req, p);
    double const sum     = surplus + miss2_value(state, topo, rates, req, p);
    lo    = std::min(lo, sum);
    hi    = std::max(hi, sum);
    scale = std::max(scale, std::abs(sum));
    if (surplus > best_value)
    {
      best_value = surplus;
      best       = p;
    }
  }
  return best == chosen && hi - lo <= 1e-9 * std::max(scale, 1e-12);
}

}  // namespace

void Scenario::validate() const
{
  if (!(area_width > 0) || !(area_height > 0))
    invalid("area dimensions must be > 0");
  if (!(arrival_rate > 0))
    invalid("arrival_rate must be > 0");
  if (!(duration > 0))
    invalid("duration must be > 0");
  double mix = 0.0;
  for (std::size_t k = 0; k < kUrgencyClasses; ++k)
  {
    if (!(urgency_mix[k] >= 0))
      invalid("urgency mix probabilities must be >= 0");
    if (!(urgency_slack[k] >= 0))
      invalid("urgency slacks must be >= 0");
    mix += urgency_mix[k];
  }
  if (std::abs(mix - 1.0) > 1e-9)
    invalid("urgency mix must sum to 1");
  if (!(data_mb_min > 0) || !(data_mb_max > data_mb_min))
    invalid("data size range must satisfy 0 < min < max");
  if (!(cycles_per_bit > 0))
    invalid("cycles_per_bit must be > 0");
  if (!(rates.psi >= 0) || !(rates.alpha >= 0) || !(rates.gamma >= 0) || !(rates.beta >= 0))
    invalid("rates must be >= 0");

  auto const &c = cloudlets;
  if (c.count < 1)
    invalid("cloudlet count must be >= 1");
  if (c.grid_columns < 1)
    invalid("grid_columns must be >= 1");
  if (c.radius_choices.empty() ||
      std::any_of(c.radius_choices.begin(), c.radius_choices.end(), [](double r) { return !(r > 0); }))
    invalid("radius choices must be non-empty and > 0");
  if (!(c.bandwidth_mean_mbps > 0) || !(c.bandwidth_sd_mbps >= 0) || !(c.bandwidth_floor_mbps > 0))
    invalid("bandwidth parameters must be positive");
  if (c.ap_capacity_min < 1 || c.ap_capacity_max < c.ap_capacity_min)
    invalid("AP capacity range must satisfy 1 <= min <= max");
  if (!(c.compute_min_ghz > 0) || !(c.compute_max_ghz >= c.compute_min_ghz))
    invalid("compute range must satisfy 0 < min <= max");
  if (!(c.transfer_min_s >= 0) || !(c.transfer_max_s >= c.transfer_min_s))
    invalid("transfer delay range must satisfy 0 <= min <= max");
  if (!(c.memory_mb > 0))
    invalid("memory must be > 0");

  if (topology)
    topology->validate();
}

std::uint64_t derive_seed(std::uint64_t seed, Stream stream)
{
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(stream));
}

Topology draw_topology(Scenario const &scenario)
{
  auto const &p = scenario.cloudlets;
  std::mt19937_64 rng(derive_seed(scenario.seed, Stream::Topology));

  std::uniform_int_distribution<std::size_t> radius(0, p.radius_choices.size() - 1);
  std::normal_distribution<double>           bandwidth(p.bandwidth_mean_mbps, p.bandwidth_sd_mbps);
  std::uniform_int_distribution<int>         capacity(p.ap_capacity_min, p.ap_capacity_max);
  std::uniform_real_distribution<double>     compute(p.compute_min_ghz, p.compute_max_ghz);
  std::uniform_real_distribution<double>     transfer(p.transfer_min_s, p.transfer_max_s);

  int const rows = (p.count + p.grid_columns - 1) / p.grid_columns;
  int const cols = std::min(p.count, p.grid_columns);

  Topology topo;
  for (int k = 0; k < p.count; ++k)
  {
    Cloudlet c;
    c.id       = k;
    c.position = {(k % cols + 0.5) * scenario.area_width / cols,
                  (k / cols + 0.5) * scenario.area_height / rows};
    c.coverage_radius = p.radius_choices[radius(rng)];
    c.bandwidth_mbps  = std::max(p.bandwidth_floor_mbps, bandwidth(rng));
    c.ap_capacity     = capacity(rng);
    c.compute_hz      = compute(rng) * 1e9;
    c.memory_mb       = p.memory_mb;
    c.alpha           = per_second(scenario.rates.alpha);
    c.gamma           = per_second(scenario.rates.gamma);
    topo.cloudlets.push_back(c);
  }
  topo.transfer_delay = Eigen::MatrixXd::Zero(p.count, p.count);
  for (int i = 0; i < p.count; ++i)
  {
    for (int j = i + 1; j < p.count; ++j)
    {
      topo.transfer_delay(i, j) = topo.transfer_delay(j, i) = transfer(rng);
    }
  }
  topo.beta = Eigen::MatrixXd::Constant(p.count, p.count, per_second(scenario.rates.beta));
  return topo;
}

Topology resolved_topology(Scenario const &scenario)
{
  return scenario.topology ? *scenario.topology : draw_topology(scenario);
}

std::optional<double> min_latency(Topology const &topo, TaskRequest const &req)
{
  SystemState const     empty(topo);
  std::optional<double> best;
  for (int i : covering_aps(topo, req.position))
  {
    for (int j = 0; j < topo.size(); ++j)
    {
      double const d = total_delay(empty, topo, req, {i, j}).total;
      if (!best || d < *best)
        best = d;
    }
  }
  return best;
}

std::vector<TaskRequest> generate_arrivals(Scenario const &scenario, Topology const &topo,
                                           std::mt19937_64 &rng)
{
  std::exponential_distribution<double>  gap(scenario.arrival_rate);
  std::uniform_real_distribution<double> x(0.0, scenario.area_width);
  std::uniform_real_distribution<double> y(0.0, scenario.area_height);
  std::uniform_real_distribution<double> size(scenario.data_mb_min, scenario.data_mb_max);
  std::discrete_distribution<std::size_t> urgency(scenario.urgency_mix.begin(),
                                                  scenario.urgency_mix.end());

  std::vector<TaskRequest> out;
  double                   t = 0.0;
  for (UserId id = 0;; ++id)
  {
    t += gap(rng);
    if (t > scenario.duration)
      break;
    TaskRequest req;
    req.user_id      = id;
    req.arrival_time = t;
    req.position.x() = x(rng);
    req.position.y() = y(rng);
    req.data_mb      = size(rng);
    req.cycles       = cycles_for(req.data_mb, scenario.cycles_per_bit);
    req.psi          = per_second(scenario.rates.psi);
    double const slack = scenario.urgency_slack[urgency(rng)];
    // Uncovered users go to the cloud anyway; their deadline is just the slack.
    req.deadline = min_latency(topo, req).value_or(0.0) + slack;
    out.push_back(req);
  }
  return out;
}

std::vector<TaskRequest> arrival_stream(Scenario const &scenario, Topology const &topo)
{
  std::mt19937_64 rng(derive_seed(scenario.seed, Stream::Arrivals));
  return generate_arrivals(scenario, topo, rng);
}

std::uint64_t arrival_digest(std::vector<TaskRequest> const &requests)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto const &r : requests)
  {
    h = fnv1a(h, r.user_id);
    h = fnv1a(h, r.arrival_time);
    h = fnv1a(h, r.position.x());
    h = fnv1a(h, r.position.y());
    h = fnv1a(h, r.cycles);
    h = fnv1a(h, r.data_mb);
    h = fnv1a(h, r.deadline);
    h = fnv1a(h, r.psi);
  }
  return h;
}

RunResult run(Scenario const &scenario, RunOptions const &options)
{
  scenario.validate();

  RunResult result;
  result.topology = resolved_topology(scenario);
  result.topology.validate();
  result.requests = arrival_stream(scenario, result.topology);

  auto const &topo  = result.topology;
  auto const  rates = rates_of(topo);
  auto       &log     = result.log;
  auto       &metrics = result.metrics;

  std::mt19937_64 strategy_rng(derive_seed(scenario.seed, Stream::Strategy));
  SystemState     state(topo);

  using Departure = std::pair<double, UserId>;
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
  std::unordered_set<UserId> violated;

  auto record_event = [&](EventRecord ev) {
    ev.ap_users     = state.ap_users();
    ev.server_tasks = state.server_tasks();
    metrics.samples.push_back({ev.time, ev.ap_users, ev.server_tasks});
    log.push_back(std::move(ev));
    if (options.check_invariants)
    {
      ++metrics.invariant_checks;
      for (auto const &v : check_invariants(state, topo))
        metrics.invariant_violations.push_back(v.what);
    }
  };

  auto depart_until = [&](double t) {
    while (!departures.empty() && departures.top().first <= t)
    {
      auto const [when, user] = departures.top();
      departures.pop();
      state.set_time(when);
      auto const rec = state.leave(user);

      EventRecord ev;
      ev.time     = when;
      ev.kind     = EventKind::Leave;
      ev.user     = user;
      ev.strategy = scenario.strategy;
      ev.pair     = rec.pair;
      ev.delay    = rec.delay;
      ev.payment  = rec.payment;
      record_event(std::move(ev));
    }
  };

  for (auto const &req : result.requests)
  {
    depart_until(req.arrival_time);
    state.set_time(req.arrival_time);
    ++metrics.joins;

    if (options.before_decision)
      options.before_decision(state, topo, rates, req);

    auto const outcome = decide(scenario.strategy, state, topo, rates, req, strategy_rng);

    if (options.oracle_check && scenario.strategy == Strategy::Dapa)
    {
      std::optional<DecisionPair> chosen;
      if (outcome.admitted())
        chosen = outcome.admission().pair;
      else
        chosen = outcome.fallback().rejected_pair;
      if (chosen)
      {
        ++metrics.oracle_checks;
        if (oracle_agrees(state, topo, rates, req, *chosen))
          ++metrics.oracle_agreements;
      }
    }

    EventRecord ev;
    ev.time     = req.arrival_time;
    ev.kind     = EventKind::Join;
    ev.user     = req.user_id;
    ev.strategy = scenario.strategy;

    if (outcome.admitted())
    {
      auto const &a = outcome.admission();
      state.join(topo, make_record(req, a.pair, a.delay, a.payment));
      departures.push({req.arrival_time + a.delay.total, req.user_id});

      // Co-tenants on the same AP or server are the only ones whose delay moved.
      for (auto const &r : state.roster())
      {
        if (r.user_id == req.user_id || violated.count(r.user_id) != 0)
          continue;
        if (r.pair.ap != a.pair.ap && r.pair.server != a.pair.server)
          continue;
        if (!meets_deadline(current_delay(state, topo, r), r.deadline))
          violated.insert(r.user_id);
      }

      UserRow row;
      row.user         = req.user_id;
      row.arrival_time = req.arrival_time;
      row.pair         = a.pair;
      row.deadline     = req.deadline;
      row.min_latency  = min_latency(topo, req).value_or(0.0);
      row.latency      = a.delay.total;
      row.payment      = a.payment;
      row.valuation    = a.user_valuation;
      row.system_valuation_before = a.system_valuation_before;
      row.system_valuation_after  = a.system_valuation_after;
      metrics.users.push_back(row);

      ev.pair    = a.pair;
      ev.delay   = a.delay;
      ev.payment = a.payment;
    }
    else
    {
      auto const &fb = outcome.fallback();
      ++metrics.fallbacks[static_cast<std::size_t>(fb.reason)];
      if (fb.other_pair_met_deadline)
        ++metrics.deadline_misses_with_alternative;
      ev.fallback = fb.reason;
    }
    record_event(std::move(ev));
  }
  depart_until(std::numeric_limits<double>::infinity());

  metrics.post_admission_violations = static_cast<int>(violated.size());
  return result;
}

double time_averaged_spread(std::vector<WorkloadSample> const &samples, bool servers, double t0,
                            double t1)
{
  if (!(t1 > t0))
    return 0.0;
  auto spread = [servers](WorkloadSample const &s) {
    Eigen::ArrayXd const counts = (servers ? s.server_tasks : s.ap_users).cast<double>().array();
    if (counts.size() == 0)
      return 0.0;
    return std::sqrt((counts - counts.mean()).square().mean());
  };

  // Before the first event the system is empty: zero spread.
  double area = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k)
  {
    double const start = std::max(samples[k].time, t0);
    double const end   = std::min(k + 1 < samples.size() ? samples[k + 1].time : t1, t1);
    if (end > start)
      area += spread(samples[k]) * (end - start);
  }
  return area / (t1 - t0);
}

RunSummary summarize(RunResult const &result, Scenario const &scenario)
{
  auto const &m = result.metrics;
  RunSummary  s;
  s.arrivals  = m.joins;
  s.admitted  = static_cast<int>(m.users.size());
  s.fallbacks = m.total_fallbacks();

  double latency = 0.0, price = 0.0, late = 0.0;
  double const final_hour = std::max(0.0, scenario.duration - kSecondsPerHour);
  for (auto const &u : m.users)
  {
    latency += u.latency;
    price += u.payment;
    if (u.arrival_time >= final_hour)
    {
      late += u.latency;
      ++s.final_hour_admitted;
    }
  }
  if (s.admitted > 0)
  {
    s.mean_latency = latency / s.admitted;
    s.mean_payment = price / s.admitted;
  }
  if (s.final_hour_admitted > 0)
    s.final_hour_mean_latency = late / s.final_hour_admitted;

  s.ap_spread     = time_averaged_spread(m.samples, false, 0.0, scenario.duration);
  s.server_spread = time_averaged_spread(m.samples, true, 0.0, scenario.duration);
  return s;
}

}  // namespace offload
