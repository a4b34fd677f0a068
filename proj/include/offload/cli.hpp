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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace offload {

enum ExitCode : int
{
  kExitOk                 = 0,
  kExitConfigError        = 2,
  kExitIoError            = 3,
  kExitInvariantViolation = 4,
};

struct RunConfig
{
  std::filesystem::path        scenario_path;  // empty: built-in defaults
  std::optional<Strategy>      strategy;
  std::optional<std::uint64_t> seed;
  std::filesystem::path        output_dir = "out";
  int                          stride     = 1;
  bool                         check_invariants = false;
  bool                         oracle_check     = false;
};

int run_command(RunConfig const &config, std::ostream &out, std::ostream &err);

/// One run per strategy over the same arrival stream, each into
/// `output_dir/<strategy>`.
int compare_command(RunConfig const &config, std::vector<Strategy> const &strategies,
                    std::ostream &out, std::ostream &err);

/// Probes every `every`-th arrival of a DAPA run with a grid of misreported
/// deadlines and writes truthfulness.csv.
int probe_command(RunConfig const &config, int every, std::ostream &out, std::ostream &err);

/// Deadlines to try instead of the true one: scaled copies of it, values
/// around the minimum latency, and values around the true deadline.
std::vector<double> misreport_grid(double true_deadline, double min_latency);

int cli_main(int argc, char **argv);

}  // namespace offload
