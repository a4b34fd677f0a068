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
#include "offload/simulator.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace offload::testing {

/// `m` cloudlets on a line, 1 km apart, each covering only itself.
inline Topology line_topology(int m, double radius = 50.0)
{
  Topology topo;
  for (int k = 0; k < m; ++k)
  {
    Cloudlet c;
    c.id              = k;
    c.position        = {1000.0 * k, 0.0};
    c.coverage_radius = radius;
    c.ap_capacity     = 10;
    c.bandwidth_mbps  = 100.0;
    c.compute_hz      = 8.0e9;
    c.memory_mb       = 8000.0;
    c.alpha           = 50.0 / 3600.0;
    c.gamma           = 50.0 / 3600.0;
    topo.cloudlets.push_back(c);
  }
  topo.transfer_delay = Eigen::MatrixXd::Constant(m, m, 0.3);
  topo.transfer_delay.diagonal().setZero();
  topo.beta = Eigen::MatrixXd::Constant(m, m, 50.0 / 3600.0);
  return topo;
}

inline Topology default_topology(std::uint64_t seed)
{
  Scenario s;
  s.seed = seed;
  return draw_topology(s);
}

inline TaskRequest make_request(UserId id, Eigen::Vector2d position, double data_mb,
                                double slack = 300.0)
{
  TaskRequest r;
  r.user_id  = id;
  r.position = position;
  r.data_mb  = data_mb;
  r.cycles   = data_mb * 8.0e6 * 1000.0;
  r.deadline = slack;
  r.psi      = 1.0 / 3600.0;
  return r;
}

inline TaskRequest random_request(std::mt19937_64 &rng, Topology const &topo, UserId id)
{
  std::uniform_real_distribution<double> pos(0.0, 500.0);
  std::uniform_real_distribution<double> size(5.0, 60.0);
  std::uniform_real_distribution<double> slack(0.0, 400.0);
  auto req = make_request(id, {pos(rng), pos(rng)}, size(rng));
  req.deadline = min_latency(topo, req).value_or(0.0) + slack(rng) + 1.0;
  return req;
}

/// Random reachable state: `joins` arrivals each placed on a uniformly drawn
/// feasible pair, with random departures mixed in.
inline SystemState random_state(std::mt19937_64 &rng, Topology const &topo, int joins,
                                UserId first_id = 1000000)
{
  SystemState state(topo);
  std::bernoulli_distribution leave(0.2);
  for (int k = 0; k < joins; ++k)
  {
    if (!state.roster().empty() && leave(rng))
    {
      std::uniform_int_distribution<std::size_t> who(0, state.roster().size() - 1);
      state.leave(state.roster()[who(rng)].user_id);
      continue;
    }
    auto req   = random_request(rng, topo, first_id + k);
    auto pairs = feasible_pairs(state, topo, req);
    if (pairs.empty())
      continue;
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    auto const pair = pairs[pick(rng)];
    state.join(topo, make_record(req, pair, total_delay(state, topo, req, pair), 0.0));
  }
  return state;
}

// ---- independent oracles -------------------------------------------------

inline bool oracle_covers(Cloudlet const &c, Eigen::Vector2d const &p)
{
  return std::hypot(p.x() - c.position.x(), p.y() - c.position.y()) <= c.coverage_radius;
}

/// All M^2 pairs filtered by coverage, AP capacity and memory, recomputing
/// used memory from the roster.
inline std::vector<DecisionPair> brute_force_feasible(SystemState const &state,
                                                      Topology const &topo, TaskRequest const &req)
{
  std::vector<DecisionPair> out;
  int const m = topo.size();
  for (int i = 0; i < m; ++i)
  {
    for (int j = 0; j < m; ++j)
    {
      auto const &ap = topo.cloudlets[static_cast<std::size_t>(i)];
      int users = 0;
      double used = 0.0;
      for (auto const &r : state.roster())
      {
        users += r.pair.ap == i;
        if (r.pair.server == j)
          used += r.data_mb;
      }
      double const free = topo.cloudlets[static_cast<std::size_t>(j)].memory_mb - used;
      if (oracle_covers(ap, req.position) && users + 1 <= ap.ap_capacity &&
          req.data_mb <= free + 1e-9)
        out.push_back({i, j});
    }
  }
  return out;
}

struct Recount
{
  Eigen::VectorXi u, v;
  Eigen::MatrixXi x;
  Eigen::VectorXd remaining;
};

inline Recount recount(SystemState const &state, Topology const &topo)
{
  int const m = topo.size();
  Recount   c{Eigen::VectorXi::Zero(m), Eigen::VectorXi::Zero(m), Eigen::MatrixXi::Zero(m, m),
            Eigen::VectorXd(m)};
  for (int j = 0; j < m; ++j)
    c.remaining(j) = topo.cloudlets[static_cast<std::size_t>(j)].memory_mb;
  for (auto const &r : state.roster())
  {
    c.u(r.pair.ap) += 1;
    c.v(r.pair.server) += 1;
    c.x(r.pair.ap, r.pair.server) += 1;
    c.remaining(r.pair.server) -= r.data_mb;
  }
  return c;
}

/// Term by term: each user's uplink and execution time at recounted loads,
/// plus the per-user transfer term, optionally skipping one user.
inline double oracle_system_valuation(SystemState const &state, Topology const &topo,
                                      UserId skip = -1)
{
  auto const c = recount(state, topo);
  double total = 0.0;
  for (auto const &r : state.roster())
  {
    if (r.user_id == skip)
      continue;
    auto const &ap  = topo.cloudlets[static_cast<std::size_t>(r.pair.ap)];
    auto const &srv = topo.cloudlets[static_cast<std::size_t>(r.pair.server)];
    double const lt = r.data_mb * 8.0 * c.u(r.pair.ap) / ap.bandwidth_mbps;
    double const lc = r.cycles * c.v(r.pair.server) / srv.compute_hz;
    double const lf = r.pair.ap == r.pair.server ? 0.0 : topo.transfer_delay(r.pair.ap, r.pair.server);
    total += ap.alpha * lt + srv.gamma * lc + topo.beta(r.pair.ap, r.pair.server) * 2.0 * lf;
  }
  return total;
}

inline double rel_diff(double a, double b)
{
  double const scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace offload::testing
