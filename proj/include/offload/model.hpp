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

#include "offload/delay.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace offload {

using UserId = std::int64_t;

/// A co-located access point and edge server.
struct Cloudlet
{
  int             id = 0;
  Eigen::Vector2d position{0.0, 0.0};
  double          coverage_radius = 100.0;  // m
  int             ap_capacity     = 1;      // simultaneous users
  double          bandwidth_mbps  = 100.0;
  double          compute_hz      = 5.0e9;
  double          memory_mb       = 8000.0;
  double          alpha           = 0.0;  // money/s of AP time
  double          gamma           = 0.0;  // money/s of server time

  bool covers(Eigen::Vector2d const &point) const
  {
    return (point - position).norm() <= coverage_radius;
  }
};

struct Topology
{
  std::vector<Cloudlet> cloudlets;
  Eigen::MatrixXd       transfer_delay;  // one-way seconds, zero diagonal
  Eigen::MatrixXd       beta;            // money/s of transfer time

  int size() const
  {
    return static_cast<int>(cloudlets.size());
  }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

bool operator==(Topology const &a, Topology const &b);

struct TaskRequest
{
  UserId          user_id      = 0;
  double          arrival_time = 0.0;
  Eigen::Vector2d position{0.0, 0.0};
  double          cycles   = 0.0;
  double          data_mb  = 0.0;
  double          deadline = 0.0;  // declared T_k, seconds
  double          psi      = 0.0;  // money/s

  void validate() const;
};

struct DecisionPair
{
  int ap     = 0;
  int server = 0;

  auto operator<=>(DecisionPair const &) const = default;
};

std::string to_string(DecisionPair const &pair);

struct ActiveUserRecord
{
  UserId         user_id = 0;
  DecisionPair   pair;
  double         start_time = 0.0;
  double         end_time   = 0.0;
  DelayBreakdown delay;  // frozen at admission
  double         payment  = 0.0;
  double         data_mb  = 0.0;
  double         cycles   = 0.0;
  double         deadline = 0.0;

  bool operator==(ActiveUserRecord const &) const = default;
};

ActiveUserRecord make_record(TaskRequest const &req, DecisionPair pair, DelayBreakdown const &delay,
                             double payment);

/// Live counters and the roster of admitted users. The counters are a cache
/// of the roster; join/leave keep them in step.
class SystemState
{
public:
  SystemState() = default;
  explicit SystemState(Topology const &topo);

  int size() const
  {
    return static_cast<int>(ap_users_.size());
  }

  double time() const
  {
    return time_;
  }
  void set_time(double t)
  {
    time_ = t;
  }

  Eigen::VectorXi const &ap_users() const
  {
    return ap_users_;
  }
  Eigen::VectorXi const &server_tasks() const
  {
    return server_tasks_;
  }
  Eigen::MatrixXi const &pair_counts() const
  {
    return pair_counts_;
  }
  Eigen::VectorXd const &remaining_memory() const
  {
    return remaining_memory_;
  }
  std::vector<ActiveUserRecord> const &roster() const
  {
    return roster_;
  }

  ActiveUserRecord const *find(UserId user) const;

  /// Throws std::logic_error on capacity violations or duplicate users.
  void join(Topology const &topo, ActiveUserRecord record);

  /// Throws std::logic_error if the user is not present.
  ActiveUserRecord leave(UserId user);

  bool operator==(SystemState const &other) const;

private:
  double                        time_ = 0.0;
  Eigen::VectorXi               ap_users_;
  Eigen::VectorXi               server_tasks_;
  Eigen::MatrixXi               pair_counts_;
  Eigen::VectorXd               memory_capacity_;
  Eigen::VectorXd               remaining_memory_;
  std::vector<ActiveUserRecord> roster_;

  void recompute_memory(int server);
};

std::vector<int>          covering_aps(Topology const &topo, Eigen::Vector2d const &position);
std::vector<DecisionPair> feasible_pairs(SystemState const &state, Topology const &topo,
                                         TaskRequest const &req);

SystemState apply_join(SystemState state, Topology const &topo, ActiveUserRecord const &record);
SystemState apply_leave(SystemState state, UserId user);

struct InvariantViolation
{
  std::string what;
};

/// Recounts everything from the roster and checks flow conservation,
/// AP capacity and memory capacity.
std::vector<InvariantViolation> check_invariants(SystemState const &state, Topology const &topo);

}  // namespace offload
