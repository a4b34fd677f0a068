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

#include "offload/simulator.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace offload {

class OutputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Twelve significant digits, shortest form.
std::string format_number(double value);

// Column sets are fixed; see README for the schema.
inline constexpr char const *kEventsHeader   = "time,kind,user,i,j,lt,lf,lc,ltotal,payment,fallback";
inline constexpr char const *kWorkloadHeader = "time,id,count";
inline constexpr char const *kUsersHeader =
    "user,Tk,Tkmin,ltotal,ratio,payment,valuation,cost";

void write_events_csv(std::ostream &out, EventLog const &log);
void write_workload_csv(std::ostream &out, std::vector<WorkloadSample> const &samples,
                        bool servers, int stride);
void write_users_csv(std::ostream &out, std::vector<UserRow> const &users);

nlohmann::json summary_json(RunResult const &result, Scenario const &scenario);

/// Writes events.csv, workload_ap.csv, workload_server.csv, users.csv and
/// summary.json into `dir`, creating it if needed. Throws OutputError.
void emit_outputs(RunResult const &result, Scenario const &scenario,
                  std::filesystem::path const &dir, int stride = 1);

}  // namespace offload
