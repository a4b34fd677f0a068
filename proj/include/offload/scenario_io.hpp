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

namespace offload {

/// Parse or validation failure in a scenario file.
class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

nlohmann::json topology_to_json(Topology const &topo);
Topology       topology_from_json(nlohmann::json const &j);

/// Every field, with the pinned topology when present.
nlohmann::json scenario_to_json(Scenario const &scenario);

/// Missing fields take the built-in defaults; each default used is written
/// to `log` when given. Unknown fields are rejected.
Scenario scenario_from_json(nlohmann::json const &j, std::ostream *log = nullptr);

/// An empty file is the all-defaults scenario.
Scenario load_scenario(std::filesystem::path const &path, std::ostream *log = nullptr);

}  // namespace offload
