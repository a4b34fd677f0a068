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

#include "offload/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace offload {
namespace {

[[noreturn]] void invalid(std::string const &msg)
{
  throw std::invalid_argument(msg);
}

bool same_matrix(Eigen::MatrixXd const &a, Eigen::MatrixXd const &b)
{
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

}  // namespace

void Topology::validate() const
{
  auto const m = size();
  if (m == 0)
  {
    invalid("topology: at least one cloudlet is required");
  }
  for (int i = 0; i < m; ++i)
  {
    auto const &c   = cloudlets[static_cast<std::size_t>(i)];
    auto const  tag = "cloudlet " + std::to_string(i) + ": ";
    if (c.id != i)
      invalid(tag + "id must equal its index");
    if (c.ap_capacity < 1)
      invalid(tag + "ap_capacity must be >= 1");
    if (!(c.bandwidth_mbps > 0))
      invalid(tag + "bandwidth must be > 0");
    if (!(c.compute_hz > 0))
      invalid(tag + "compute must be > 0");
    if (!(c.memory_mb > 0))
      invalid(tag + "memory capacity must be > 0");
    if (!(c.coverage_radius > 0))
      invalid(tag + "coverage radius must be > 0");
    if (!(c.alpha >= 0) || !(c.gamma >= 0))
      invalid(tag + "alpha and gamma must be >= 0");
  }
  if (transfer_delay.rows() != m || transfer_delay.cols() != m)
    invalid("topology: transfer_delay must be M x M");
  if (beta.rows() != m || beta.cols() != m)
    invalid("topology: beta must be M x M");
  for (int i = 0; i < m; ++i)
  {
    if (transfer_delay(i, i) != 0.0)
      invalid("topology: transfer_delay diagonal must be zero");
    for (int j = 0; j < m; ++j)
    {
      if (!(transfer_delay(i, j) >= 0) || transfer_delay(i, j) != transfer_delay(j, i))
        invalid("topology: transfer_delay must be symmetric and non-negative");
      if (!(beta(i, j) >= 0))
        invalid("topology: beta entries must be >= 0");
    }
  }
}

bool operator==(Topology const &a, Topology const &b)
{
  if (a.cloudlets.size() != b.cloudlets.size())
    return false;
  for (std::size_t k = 0; k < a.cloudlets.size(); ++k)
  {
    auto const &x = a.cloudlets[k];
    auto const &y = b.cloudlets[k];
    if (x.id != y.id || x.position != y.position || x.coverage_radius != y.coverage_radius ||
        x.ap_capacity != y.ap_capacity || x.bandwidth_mbps != y.bandwidth_mbps ||
        x.compute_hz != y.compute_hz || x.memory_mb != y.memory_mb || x.alpha != y.alpha ||
        x.gamma != y.gamma)
    {
      return false;
    }
  }
  return same_matrix(a.transfer_delay, b.transfer_delay) && same_matrix(a.beta, b.beta);
}

void TaskRequest::validate() const
{
  if (!(cycles > 0))
    invalid("request: cycles must be > 0");
  if (!(data_mb > 0))
    invalid("request: data size must be > 0");
  if (!(deadline > 0))
    invalid("request: deadline must be > 0");
  if (!(psi >= 0))
    invalid("request: psi must be >= 0");
}

std::string to_string(DecisionPair const &pair)
{
  std::ostringstream out;
  out << '(' << pair.ap << ", " << pair.server << ')';
  return out.str();
}

ActiveUserRecord make_record(TaskRequest const &req, DecisionPair pair, DelayBreakdown const &delay,
                             double payment)
{
  ActiveUserRecord rec;
  rec.user_id    = req.user_id;
  rec.pair       = pair;
  rec.start_time = req.arrival_time;
  rec.end_time   = req.arrival_time + delay.total;
  rec.delay      = delay;
  rec.payment    = payment;
  rec.data_mb    = req.data_mb;
  rec.cycles     = req.cycles;
  rec.deadline   = req.deadline;
  return rec;
}

SystemState::SystemState(Topology const &topo)
  : ap_users_(Eigen::VectorXi::Zero(topo.size()))
  , server_tasks_(Eigen::VectorXi::Zero(topo.size()))
  , pair_counts_(Eigen::MatrixXi::Zero(topo.size(), topo.size()))
  , memory_capacity_(topo.size())
  , remaining_memory_(topo.size())
{
  for (int j = 0; j < topo.size(); ++j)
  {
    memory_capacity_(j) = topo.cloudlets[static_cast<std::size_t>(j)].memory_mb;
  }
  remaining_memory_ = memory_capacity_;
}

ActiveUserRecord const *SystemState::find(UserId user) const
{
  auto it = std::find_if(roster_.begin(), roster_.end(),
                         [user](auto const &r) { return r.user_id == user; });
  return it == roster_.end() ? nullptr : &*it;
}

void SystemState::recompute_memory(int server)
{
  double used = 0.0;
  for (auto const &r : roster_)
  {
    if (r.pair.server == server)
      used += r.data_mb;
  }
  remaining_memory_(server) = memory_capacity_(server) - used;
}

void SystemState::join(Topology const &topo, ActiveUserRecord record)
{
  auto const [i, j] = record.pair;
  if (i < 0 || j < 0 || i >= size() || j >= size())
  {
    throw std::logic_error("join: decision pair " + to_string(record.pair) + " out of range");
  }
  if (find(record.user_id) != nullptr)
  {
    throw std::logic_error("join: user " + std::to_string(record.user_id) + " already active");
  }
  if (ap_users_(i) + 1 > topo.cloudlets[static_cast<std::size_t>(i)].ap_capacity)
  {
    throw std::logic_error("join: AP " + std::to_string(i) + " at capacity");
  }
  if (record.data_mb > remaining_memory_(j))
  {
    throw std::logic_error("join: server " + std::to_string(j) + " out of memory");
  }
  ++ap_users_(i);
  ++server_tasks_(j);
  ++pair_counts_(i, j);
  roster_.push_back(std::move(record));
  recompute_memory(j);
}

ActiveUserRecord SystemState::leave(UserId user)
{
  auto it = std::find_if(roster_.begin(), roster_.end(),
                         [user](auto const &r) { return r.user_id == user; });
  if (it == roster_.end())
  {
    throw std::logic_error("leave: user " + std::to_string(user) + " is not active");
  }
  ActiveUserRecord rec = *it;
  roster_.erase(it);
  --ap_users_(rec.pair.ap);
  --server_tasks_(rec.pair.server);
  --pair_counts_(rec.pair.ap, rec.pair.server);
  recompute_memory(rec.pair.server);
  return rec;
}

bool SystemState::operator==(SystemState const &other) const
{
  if (size() != other.size() || time_ != other.time_ || ap_users_ != other.ap_users_ ||
      server_tasks_ != other.server_tasks_ || pair_counts_ != other.pair_counts_ ||
      remaining_memory_ != other.remaining_memory_ || memory_capacity_ != other.memory_capacity_ ||
      roster_.size() != other.roster_.size())
  {
    return false;
  }
  // Roster order is not part of the state's identity.
  return std::all_of(roster_.begin(), roster_.end(), [&](auto const &r) {
    auto const *o = other.find(r.user_id);
    return o != nullptr && *o == r;
  });
}

std::vector<int> covering_aps(Topology const &topo, Eigen::Vector2d const &position)
{
  std::vector<int> aps;
  for (auto const &c : topo.cloudlets)
  {
    if (c.covers(position))
      aps.push_back(c.id);
  }
  return aps;
}

std::vector<DecisionPair> feasible_pairs(SystemState const &state, Topology const &topo,
                                         TaskRequest const &req)
{
  std::vector<DecisionPair> pairs;
  for (int i : covering_aps(topo, req.position))
  {
    if (state.ap_users()(i) + 1 > topo.cloudlets[static_cast<std::size_t>(i)].ap_capacity)
      continue;
    for (int j = 0; j < topo.size(); ++j)
    {
      if (req.data_mb <= state.remaining_memory()(j))
        pairs.push_back({i, j});
    }
  }
  return pairs;
}

SystemState apply_join(SystemState state, Topology const &topo, ActiveUserRecord const &record)
{
  state.join(topo, record);
  return state;
}

SystemState apply_leave(SystemState state, UserId user)
{
  state.leave(user);
  return state;
}

std::vector<InvariantViolation> check_invariants(SystemState const &state, Topology const &topo)
{
  std::vector<InvariantViolation> out;
  auto const      m = topo.size();
  Eigen::VectorXi u = Eigen::VectorXi::Zero(m);
  Eigen::VectorXi v = Eigen::VectorXi::Zero(m);
  Eigen::MatrixXi x = Eigen::MatrixXi::Zero(m, m);
  Eigen::VectorXd used = Eigen::VectorXd::Zero(m);
  for (auto const &r : state.roster())
  {
    ++u(r.pair.ap);
    ++v(r.pair.server);
    ++x(r.pair.ap, r.pair.server);
    used(r.pair.server) += r.data_mb;
  }
  if (state.ap_users().sum() != state.server_tasks().sum())
    out.push_back({"flow conservation: sum(u) != sum(v)"});
  if (u != state.ap_users() || v != state.server_tasks() || x != state.pair_counts())
    out.push_back({"roster consistency: counters differ from roster recount"});
  for (int i = 0; i < m; ++i)
  {
    auto const &c = topo.cloudlets[static_cast<std::size_t>(i)];
    if (state.ap_users()(i) > c.ap_capacity)
      out.push_back({"AP capacity exceeded at " + std::to_string(i)});
    if (state.remaining_memory()(i) < 0)
      out.push_back({"memory capacity exceeded at " + std::to_string(i)});
    if (std::abs(c.memory_mb - used(i) - state.remaining_memory()(i)) > 1e-9 * c.memory_mb)
      out.push_back({"memory accounting differs from roster at " + std::to_string(i)});
  }
  return out;
}

}  // namespace offload
