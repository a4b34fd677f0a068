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

#include "offload/scenario_io.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace offload {
namespace {

using nlohmann::json;

// Reads one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Fields
{
public:
  Fields(json const &obj, std::string prefix, std::ostream *log)
    : obj_(obj)
    , prefix_(std::move(prefix))
    , log_(log)
  {
    if (!obj_.is_object())
      throw ScenarioError(where("") + "expected an object");
  }

  template <typename T>
  void read(std::string const &key, T &value)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end())
    {
      if (log_ != nullptr)
        *log_ << "default: " << where(key) << " = " << json(value).dump() << '\n';
      return;
    }
    try
    {
      value = it->template get<T>();
    }
    catch (json::exception const &e)
    {
      throw ScenarioError(where(key) + "wrong type (" + e.what() + ")");
    }
  }

  json const *child(std::string const &key)
  {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const
  {
    for (auto const &item : obj_.items())
    {
      if (seen_.count(item.key()) == 0)
        throw ScenarioError(where(item.key()) + "unknown field");
    }
  }

  std::string where(std::string const &key) const
  {
    auto path = prefix_.empty() ? key : (key.empty() ? prefix_ : prefix_ + "." + key);
    return "field '" + path + "': ";
  }

private:
  json const           &obj_;
  std::string           prefix_;
  std::ostream         *log_;
  std::set<std::string> seen_;
};

json matrix_to_json(Eigen::MatrixXd const &m)
{
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
  {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(json const &j, Eigen::Index n, std::string const &name)
{
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw ScenarioError("field 'topology." + name + "': expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
  {
    auto const &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ScenarioError("field 'topology." + name + "': expected " + std::to_string(n) +
                          " columns in row " + std::to_string(r));
    for (Eigen::Index c = 0; c < n; ++c)
    {
      if (!row[static_cast<std::size_t>(c)].is_number())
        throw ScenarioError("field 'topology." + name + "': non-numeric entry");
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

}  // namespace

json topology_to_json(Topology const &topo)
{
  json cloudlets = json::array();
  for (auto const &c : topo.cloudlets)
  {
    cloudlets.push_back({{"id", c.id},
                         {"x_m", c.position.x()},
                         {"y_m", c.position.y()},
                         {"radius_m", c.coverage_radius},
                         {"ap_capacity", c.ap_capacity},
                         {"bandwidth_mbps", c.bandwidth_mbps},
                         {"compute_hz", c.compute_hz},
                         {"memory_mb", c.memory_mb},
                         {"alpha_per_s", c.alpha},
                         {"gamma_per_s", c.gamma}});
  }
  return {{"cloudlets", cloudlets},
          {"transfer_delay_s", matrix_to_json(topo.transfer_delay)},
          {"beta_per_s", matrix_to_json(topo.beta)}};
}

Topology topology_from_json(json const &j)
{
  Fields   top(j, "topology", nullptr);
  Topology topo;
  auto const *list = top.child("cloudlets");
  if (list == nullptr || !list->is_array() || list->empty())
    throw ScenarioError("field 'topology.cloudlets': expected a non-empty array");
  for (std::size_t k = 0; k < list->size(); ++k)
  {
    Fields   f((*list)[k], "topology.cloudlets[" + std::to_string(k) + "]", nullptr);
    Cloudlet c;
    c.id = -1;
    double x = 0.0, y = 0.0;
    f.read("id", c.id);
    f.read("x_m", x);
    f.read("y_m", y);
    f.read("radius_m", c.coverage_radius);
    f.read("ap_capacity", c.ap_capacity);
    f.read("bandwidth_mbps", c.bandwidth_mbps);
    f.read("compute_hz", c.compute_hz);
    f.read("memory_mb", c.memory_mb);
    f.read("alpha_per_s", c.alpha);
    f.read("gamma_per_s", c.gamma);
    f.finish();
    c.position = {x, y};
    topo.cloudlets.push_back(c);
  }
  auto const n = static_cast<Eigen::Index>(topo.cloudlets.size());
  auto const *transfer = top.child("transfer_delay_s");
  auto const *beta     = top.child("beta_per_s");
  if (transfer == nullptr || beta == nullptr)
    throw ScenarioError("field 'topology': transfer_delay_s and beta_per_s are required");
  topo.transfer_delay = matrix_from_json(*transfer, n, "transfer_delay_s");
  topo.beta           = matrix_from_json(*beta, n, "beta_per_s");
  top.finish();
  return topo;
}

json scenario_to_json(Scenario const &s)
{
  auto const &c = s.cloudlets;
  json out      = {
      {"area_width_m", s.area_width},
      {"area_height_m", s.area_height},
      {"cloudlets",
       {{"count", c.count},
        {"grid_columns", c.grid_columns},
        {"radius_choices_m", c.radius_choices},
        {"bandwidth_mean_mbps", c.bandwidth_mean_mbps},
        {"bandwidth_sd_mbps", c.bandwidth_sd_mbps},
        {"bandwidth_floor_mbps", c.bandwidth_floor_mbps},
        {"ap_capacity_min", c.ap_capacity_min},
        {"ap_capacity_max", c.ap_capacity_max},
        {"compute_min_ghz", c.compute_min_ghz},
        {"compute_max_ghz", c.compute_max_ghz},
        {"transfer_min_s", c.transfer_min_s},
        {"transfer_max_s", c.transfer_max_s},
        {"memory_mb", c.memory_mb}}},
      {"arrival_rate_per_s", s.arrival_rate},
      {"duration_s", s.duration},
      {"urgency_mix", s.urgency_mix},
      {"urgency_slack_s", s.urgency_slack},
      {"data_mb_min", s.data_mb_min},
      {"data_mb_max", s.data_mb_max},
      {"cycles_per_bit", s.cycles_per_bit},
      {"rates_per_hour",
       {{"psi", s.rates.psi}, {"alpha", s.rates.alpha}, {"gamma", s.rates.gamma}, {"beta", s.rates.beta}}},
      {"seed", s.seed},
      {"strategy", std::string(to_string(s.strategy))},
  };
  if (s.topology)
    out["topology"] = topology_to_json(*s.topology);
  return out;
}

Scenario scenario_from_json(json const &j, std::ostream *log)
{
  Scenario s;
  Fields   top(j, "", log);
  top.read("area_width_m", s.area_width);
  top.read("area_height_m", s.area_height);

  json const empty = json::object();
  auto const *cl   = top.child("cloudlets");
  {
    Fields f(cl != nullptr ? *cl : empty, "cloudlets", log);
    auto  &c = s.cloudlets;
    f.read("count", c.count);
    f.read("grid_columns", c.grid_columns);
    f.read("radius_choices_m", c.radius_choices);
    f.read("bandwidth_mean_mbps", c.bandwidth_mean_mbps);
    f.read("bandwidth_sd_mbps", c.bandwidth_sd_mbps);
    f.read("bandwidth_floor_mbps", c.bandwidth_floor_mbps);
    f.read("ap_capacity_min", c.ap_capacity_min);
    f.read("ap_capacity_max", c.ap_capacity_max);
    f.read("compute_min_ghz", c.compute_min_ghz);
    f.read("compute_max_ghz", c.compute_max_ghz);
    f.read("transfer_min_s", c.transfer_min_s);
    f.read("transfer_max_s", c.transfer_max_s);
    f.read("memory_mb", c.memory_mb);
    f.finish();
  }

  top.read("arrival_rate_per_s", s.arrival_rate);
  top.read("duration_s", s.duration);
  top.read("urgency_mix", s.urgency_mix);
  top.read("urgency_slack_s", s.urgency_slack);
  top.read("data_mb_min", s.data_mb_min);
  top.read("data_mb_max", s.data_mb_max);
  top.read("cycles_per_bit", s.cycles_per_bit);

  auto const *rates = top.child("rates_per_hour");
  {
    Fields f(rates != nullptr ? *rates : empty, "rates_per_hour", log);
    f.read("psi", s.rates.psi);
    f.read("alpha", s.rates.alpha);
    f.read("gamma", s.rates.gamma);
    f.read("beta", s.rates.beta);
    f.finish();
  }

  top.read("seed", s.seed);
  std::string strategy(to_string(s.strategy));
  top.read("strategy", strategy);
  auto parsed = parse_strategy(strategy);
  if (!parsed)
    throw ScenarioError(top.where("strategy") + "expected one of dapa, ue, rs");
  s.strategy = *parsed;

  if (auto const *topo = top.child("topology"))
    s.topology = topology_from_json(*topo);
  top.finish();

  try
  {
    s.validate();
  }
  catch (std::invalid_argument const &e)
  {
    throw ScenarioError(std::string("validation failed: ") + e.what());
  }
  return s;
}

Scenario load_scenario(std::filesystem::path const &path, std::ostream *log)
{
  std::ifstream in(path);
  if (!in)
    throw ScenarioError(path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto const text = buffer.str();

  json j = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos)
  {
    try
    {
      j = json::parse(text);
    }
    catch (json::parse_error const &e)
    {
      throw ScenarioError(path.string() + ": " + e.what());
    }
  }
  try
  {
    return scenario_from_json(j, log);
  }
  catch (ScenarioError const &e)
  {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

}  // namespace offload
