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

#include <stdexcept>

namespace offload {
namespace {

Cloudlet const &at(Topology const &topo, int index)
{
  return topo.cloudlets[static_cast<std::size_t>(index)];
}

}  // namespace

double transmission_delay(TaskRequest const &req, Cloudlet const &ap, int users_after)
{
  if (users_after < 1)
    throw std::invalid_argument("transmission_delay: users_after must be >= 1");
  return transmission_seconds(req.data_mb, users_after, ap.bandwidth_mbps);
}

double computation_delay(TaskRequest const &req, Cloudlet const &server, int tasks_after)
{
  if (tasks_after < 1)
    throw std::invalid_argument("computation_delay: tasks_after must be >= 1");
  return computation_seconds(req.cycles, tasks_after, server.compute_hz);
}

DelayBreakdown total_delay(SystemState const &state, Topology const &topo, TaskRequest const &req,
                           DecisionPair pair)
{
  auto const [i, j] = pair;
  double const transfer = i == j ? 0.0 : topo.transfer_delay(i, j);
  return DelayBreakdown::compose(transmission_delay(req, at(topo, i), state.ap_users()(i) + 1),
                                 transfer,
                                 computation_delay(req, at(topo, j), state.server_tasks()(j) + 1));
}

DelayBreakdown current_delay(SystemState const &state, Topology const &topo,
                             ActiveUserRecord const &user)
{
  auto const [i, j] = user.pair;
  double const transfer = i == j ? 0.0 : topo.transfer_delay(i, j);
  return DelayBreakdown::compose(
      transmission_seconds(user.data_mb, state.ap_users()(i), at(topo, i).bandwidth_mbps),
      transfer, computation_seconds(user.cycles, state.server_tasks()(j), at(topo, j).compute_hz));
}

}  // namespace offload
