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
#include "offload/model.hpp"

namespace offload {

/// Uplink time for `req` on AP `ap` shared by `users_after` users (the user included).
double transmission_delay(TaskRequest const &req, Cloudlet const &ap, int users_after);

/// Execution time for `req` on a server running `tasks_after` tasks (the task included).
double computation_delay(TaskRequest const &req, Cloudlet const &server, int tasks_after);

/// Delay the new user would see on `pair`, using post-join counts u_i + 1 and v_j + 1.
DelayBreakdown total_delay(SystemState const &state, Topology const &topo, TaskRequest const &req,
                           DecisionPair pair);

/// Delay an already-admitted user sees at the state's current counts.
DelayBreakdown current_delay(SystemState const &state, Topology const &topo,
                             ActiveUserRecord const &user);

inline bool meets_deadline(DelayBreakdown const &delay, double deadline)
{
  return delay.total <= deadline;
}

}  // namespace offload
