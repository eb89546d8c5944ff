// Copyright 2026 The Corridor Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "corridor/scenario.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "corridor/ckm_io.h"

namespace corridor {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& Section(const json& root, const std::string& name) {
  const auto it = root.find(name);
  if (it == root.end()) Fail(name, "missing section");
  if (!it->is_object()) Fail(name, "expected an object");
  return *it;
}

const json* Find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double AsNumber(const json& v, const std::string& path) {
  if (!v.is_number()) Fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Fail(path, "must be finite");
  return d;
}

double Number(const json& obj, const std::string& section,
              const std::string& key) {
  const std::string path = section + "." + key;
  const json* v = Find(obj, key);
  if (!v) Fail(path, "missing field");
  return AsNumber(*v, path);
}

double Number(const json& obj, const std::string& section,
              const std::string& key, double fallback) {
  const json* v = Find(obj, key);
  return v ? AsNumber(*v, section + "." + key) : fallback;
}

int64_t AsInteger(const json& v, const std::string& path) {
  if (!v.is_number_integer()) Fail(path, "expected an integer");
  return v.get<int64_t>();
}

int64_t Integer(const json& obj, const std::string& section,
                const std::string& key) {
  const std::string path = section + "." + key;
  const json* v = Find(obj, key);
  if (!v) Fail(path, "missing field");
  return AsInteger(*v, path);
}

int64_t Integer(const json& obj, const std::string& section,
                const std::string& key, int64_t fallback) {
  const json* v = Find(obj, key);
  return v ? AsInteger(*v, section + "." + key) : fallback;
}

int SmallInt(int64_t v, const std::string& path) {
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    Fail(path, "out of range");
  }
  return static_cast<int>(v);
}

std::vector<double> NumberArray(const json& obj, const std::string& section,
                                const std::string& key, size_t count,
                                bool required) {
  const std::string path = section + "." + key;
  const json* v = Find(obj, key);
  if (!v) {
    if (required) Fail(path, "missing field");
    return {};
  }
  if (!v->is_array() || v->size() != count) {
    Fail(path, "expected an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  for (size_t n = 0; n < count; ++n) {
    out.push_back(AsNumber((*v)[n], path + "[" + std::to_string(n) + "]"));
  }
  return out;
}

template <typename Fn>
void Checked(const std::string& context, Fn fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    // Messages from the validators already carry a field path.
    if (what.find('.') != std::string::npos &&
        what.find(' ') > what.find('.')) {
      throw ConfigError(what);
    }
    throw ConfigError(context + ": " + what);
  }
}

}  // namespace

RadioParams RadioConfig::ToParams() const {
  RadioParams p;
  p.tx_power = DbmToWatts(tx_power_dbm);
  p.tx_gain = DbToLinear(tx_gain_db);
  p.noise = DbmToWatts(noise_dbm);
  p.wavelength = kSpeedOfLight / carrier_hz;
  p.rcs = rcs_m2;
  p.sense_threshold = DbmToWatts(sense_threshold_dbm);
  p.sinr_threshold = DbToLinear(sinr_threshold_db);
  p.big_m = big_m;
  return p;
}

GainModel ScenarioConfig::gain_model() const {
  GainModel model;
  model.wavelength = kSpeedOfLight / radio.carrier_hz;
  model.nlos_base_db = nlos_base_db;
  model.nlos_per_wall_db = nlos_per_wall_db;
  return model;
}

PlanConfig ScenarioConfig::plan_config() const {
  PlanConfig p = plan;
  p.radio = radio.ToParams();
  return p;
}

ScenarioConfig ParseScenarioConfig(const json& root) {
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  ScenarioConfig c;

  const json& scene = Section(root, "scene");
  {
    const auto b = NumberArray(scene, "scene", "bounds", 4, true);
    c.scene.bounds = {b[0], b[1], b[2], b[3]};
    c.scene.site_count =
        SmallInt(Integer(scene, "scene", "site_count"), "scene.site_count");
    const int64_t seed = Integer(scene, "scene", "seed");
    if (seed < 0) Fail("scene.seed", "must be >= 0");
    c.scene.seed = static_cast<uint64_t>(seed);
    c.scene.building_count = SmallInt(
        Integer(scene, "scene", "building_count", c.scene.building_count),
        "scene.building_count");
    if (auto f = NumberArray(scene, "scene", "footprint", 2, false);
        !f.empty()) {
      c.scene.min_footprint = f[0];
      c.scene.max_footprint = f[1];
    }
    if (auto h = NumberArray(scene, "scene", "height", 2, false); !h.empty()) {
      c.scene.min_height = h[0];
      c.scene.max_height = h[1];
    }
    c.scene.building_gap =
        Number(scene, "scene", "building_gap", c.scene.building_gap);
    c.scene.bs_height = Number(scene, "scene", "bs_height", c.scene.bs_height);
    c.scene.max_attempts = SmallInt(
        Integer(scene, "scene", "max_attempts", c.scene.max_attempts),
        "scene.max_attempts");
    if (c.scene.site_count < 1) Fail("scene.site_count", "must be >= 1");
    if (c.scene.site_count > 64) {
      Fail("scene.site_count", "at most 64 candidate sites are supported");
    }
  }

  const json& grid = Section(root, "grid");
  {
    c.grid.n = SmallInt(Integer(grid, "grid", "n"), "grid.n");
    const double cell = Number(grid, "grid", "cell_size");
    c.grid.dx = c.grid.dy = c.grid.dz = cell;
    c.grid.altitude = Number(grid, "grid", "altitude");
    if (auto o = NumberArray(grid, "grid", "origin", 2, false); !o.empty()) {
      c.grid.origin_x = o[0];
      c.grid.origin_y = o[1];
    } else {
      c.grid.origin_x = c.scene.bounds.x_min;
      c.grid.origin_y = c.scene.bounds.y_min;
    }
    Checked("grid", [&] { c.grid.Validate(); });
  }

  const json& coarse = Section(root, "coarse");
  c.coarse_m = SmallInt(Integer(coarse, "coarse", "m"), "coarse.m");
  if (c.coarse_m < 2) Fail("coarse.m", "must be >= 2");
  if (c.grid.n % c.coarse_m != 0) {
    Fail("coarse.m", "grid.n = " + std::to_string(c.grid.n) +
                         " is not divisible by coarse.m = " +
                         std::to_string(c.coarse_m));
  }

  if (const json* ckm = Find(root, "ckm")) {
    if (!ckm->is_object()) Fail("ckm", "expected an object");
    c.lattice.samples_per_edge = SmallInt(
        Integer(*ckm, "ckm", "samples_per_edge", c.lattice.samples_per_edge),
        "ckm.samples_per_edge");
    c.lattice.vertical_levels = SmallInt(
        Integer(*ckm, "ckm", "vertical_levels", c.lattice.vertical_levels),
        "ckm.vertical_levels");
    c.nlos_base_db = Number(*ckm, "ckm", "nlos_base_db", c.nlos_base_db);
    c.nlos_per_wall_db =
        Number(*ckm, "ckm", "nlos_per_wall_db", c.nlos_per_wall_db);
    if (const json* rule = Find(*ckm, "los_rule")) {
      if (*rule == "all") {
        c.los_rule = LosRule::kAllSamples;
      } else if (*rule == "any") {
        c.los_rule = LosRule::kAnySample;
      } else {
        Fail("ckm.los_rule", "expected \"all\" or \"any\"");
      }
    }
    if (c.lattice.samples_per_edge < 1) {
      Fail("ckm.samples_per_edge", "must be >= 1");
    }
    if (c.lattice.vertical_levels < 1) {
      Fail("ckm.vertical_levels", "must be >= 1");
    }
    if (c.nlos_base_db < 0.0) Fail("ckm.nlos_base_db", "must be >= 0");
    if (c.nlos_per_wall_db < 0.0) Fail("ckm.nlos_per_wall_db", "must be >= 0");
  }

  const json& radio = Section(root, "radio");
  {
    c.radio.tx_power_dbm = Number(radio, "radio", "tx_power_dbm");
    c.radio.tx_gain_db = Number(radio, "radio", "tx_gain_db");
    c.radio.noise_dbm = Number(radio, "radio", "noise_dbm");
    c.radio.carrier_hz = Number(radio, "radio", "carrier_hz");
    c.radio.rcs_m2 = Number(radio, "radio", "rcs_m2");
    c.radio.sense_threshold_dbm =
        Number(radio, "radio", "sense_threshold_dbm");
    c.radio.sinr_threshold_db = Number(radio, "radio", "sinr_threshold_db");
    if (const json* m = Find(radio, "big_m")) {
      if (m->is_string()) {
        if (*m != "auto") Fail("radio.big_m", "expected a number or \"auto\"");
      } else {
        c.radio.big_m = AsNumber(*m, "radio.big_m");
      }
    }
    if (!(c.radio.carrier_hz > 0.0)) Fail("radio.carrier_hz", "must be > 0");
    Checked("radio", [&] { c.radio.ToParams().Validate(); });
  }

  const json& plan = Section(root, "plan");
  {
    PlanConfig& p = c.plan;
    p.weights.alpha1 = Number(plan, "plan", "alpha1");
    p.weights.alpha2 = Number(plan, "plan", "alpha2");
    p.trim_fraction = Number(plan, "plan", "trim_fraction", p.trim_fraction);
    p.fine_trim_fraction =
        Number(plan, "plan", "fine_trim_fraction", p.fine_trim_fraction);
    p.max_ao_iterations = SmallInt(
        Integer(plan, "plan", "max_ao_iterations", p.max_ao_iterations),
        "plan.max_ao_iterations");
    p.coarse_node_budget =
        Integer(plan, "plan", "coarse_node_budget", p.coarse_node_budget);
    p.block_node_budget =
        Integer(plan, "plan", "block_node_budget", p.block_node_budget);
    p.deployment_node_budget = Integer(plan, "plan", "deployment_node_budget",
                                       p.deployment_node_budget);
    p.path_node_budget =
        Integer(plan, "plan", "path_node_budget", p.path_node_budget);
    p.max_cut_rounds = SmallInt(
        Integer(plan, "plan", "max_cut_rounds", p.max_cut_rounds),
        "plan.max_cut_rounds");
    p.baseline_trials = SmallInt(
        Integer(plan, "plan", "baseline_trials", p.baseline_trials),
        "plan.baseline_trials");
    Checked("plan", [&] { c.plan_config().Validate(); });
  }
  return c;
}

json ScenarioConfigToJson(const ScenarioConfig& c) {
  json j;
  j["scene"] = {
      {"bounds", {c.scene.bounds.x_min, c.scene.bounds.y_min,
                  c.scene.bounds.x_max, c.scene.bounds.y_max}},
      {"building_count", c.scene.building_count},
      {"footprint", {c.scene.min_footprint, c.scene.max_footprint}},
      {"height", {c.scene.min_height, c.scene.max_height}},
      {"building_gap", c.scene.building_gap},
      {"site_count", c.scene.site_count},
      {"bs_height", c.scene.bs_height},
      {"seed", c.scene.seed},
      {"max_attempts", c.scene.max_attempts},
  };
  j["grid"] = {
      {"n", c.grid.n},
      {"cell_size", c.grid.dx},
      {"altitude", c.grid.altitude},
      {"origin", {c.grid.origin_x, c.grid.origin_y}},
  };
  j["coarse"] = {{"m", c.coarse_m}};
  j["ckm"] = {
      {"samples_per_edge", c.lattice.samples_per_edge},
      {"vertical_levels", c.lattice.vertical_levels},
      {"nlos_base_db", c.nlos_base_db},
      {"nlos_per_wall_db", c.nlos_per_wall_db},
      {"los_rule", c.los_rule == LosRule::kAllSamples ? "all" : "any"},
  };
  j["radio"] = {
      {"tx_power_dbm", c.radio.tx_power_dbm},
      {"tx_gain_db", c.radio.tx_gain_db},
      {"noise_dbm", c.radio.noise_dbm},
      {"carrier_hz", c.radio.carrier_hz},
      {"rcs_m2", c.radio.rcs_m2},
      {"sense_threshold_dbm", c.radio.sense_threshold_dbm},
      {"sinr_threshold_db", c.radio.sinr_threshold_db},
  };
  if (c.radio.big_m) {
    j["radio"]["big_m"] = *c.radio.big_m;
  } else {
    j["radio"]["big_m"] = "auto";
  }
  const PlanConfig& p = c.plan;
  j["plan"] = {
      {"alpha1", p.weights.alpha1},
      {"alpha2", p.weights.alpha2},
      {"trim_fraction", p.trim_fraction},
      {"fine_trim_fraction", p.fine_trim_fraction},
      {"max_ao_iterations", p.max_ao_iterations},
      {"coarse_node_budget", p.coarse_node_budget},
      {"block_node_budget", p.block_node_budget},
      {"deployment_node_budget", p.deployment_node_budget},
      {"path_node_budget", p.path_node_budget},
      {"max_cut_rounds", p.max_cut_rounds},
      {"baseline_trials", p.baseline_trials},
  };
  return j;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

void WriteJsonFile(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ScenarioConfig LoadScenarioConfig(const std::filesystem::path& path) {
  const json j = ReadJsonFile(path);
  if (j.is_object() && j.contains("config") && j.contains("version")) {
    return ParseScenarioConfig(j["config"]);
  }
  return ParseScenarioConfig(j);
}

std::vector<ChannelMap> BuildChannelMaps(const Scene& scene,
                                         const ScenarioConfig& config) {
  const GainModel model = config.gain_model();
  std::vector<std::future<ChannelMap>> pending;
  for (int k = 0; k < scene.site_count(); ++k) {
    pending.push_back(std::async(std::launch::async, [&, k] {
      return BuildChannelMap(k, scene, config.grid, config.lattice, model);
    }));
  }
  std::vector<ChannelMap> maps;
  for (auto& f : pending) maps.push_back(f.get());
  return maps;
}

json WriteCkmDirectory(const std::vector<ChannelMap>& maps, const Scene& scene,
                       const ScenarioConfig& config,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string scene_text = SceneToJson(scene).dump();
  json manifest;
  manifest["version"] = kToolVersion;
  manifest["format"] = "CKM1";
  manifest["scene_sha256"] = Sha256Hex(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(scene_text.data()),
      scene_text.size()));
  const LatticeGeometry g = MakeLattice(config.grid, config.lattice);
  manifest["lattice"] = {{"nx", g.nx}, {"ny", g.ny}, {"nz", g.nz},
                         {"origin", {g.origin_x, g.origin_y, g.origin_z}},
                         {"step", {g.step_x, g.step_y, g.step_z}}};
  json sites = json::array();
  for (const ChannelMap& map : maps) {
    const std::string name = CkmFileName(map.site_index);
    WriteCkmFile(map, dir / name);
    sites.push_back({{"site", map.site_index},
                     {"file", name},
                     {"sha256", Sha256File(dir / name)}});
  }
  manifest["sites"] = sites;
  WriteJsonFile(manifest, dir / "manifest.json");
  return manifest;
}

std::vector<ChannelMap> LoadCkmDirectory(const std::filesystem::path& dir,
                                         const Scene& scene,
                                         const ScenarioConfig& config) {
  std::map<int, std::string> checksums;
  if (std::filesystem::exists(dir / "manifest.json")) {
    const json manifest = ReadJsonFile(dir / "manifest.json");
    for (const json& entry : manifest.value("sites", json::array())) {
      checksums[entry.at("site").get<int>()] =
          entry.at("sha256").get<std::string>();
    }
  }
  const LatticeGeometry expected = MakeLattice(config.grid, config.lattice);
  std::vector<ChannelMap> maps;
  for (int k = 0; k < scene.site_count(); ++k) {
    const std::filesystem::path path = dir / CkmFileName(k);
    if (const auto it = checksums.find(k);
        it != checksums.end() && Sha256File(path) != it->second) {
      throw CkmFormatError(path.string() + ": checksum does not match manifest");
    }
    ChannelMap map = ReadCkmFile(path);
    if (map.site_index != k) {
      throw CkmFormatError(path.string() + ": holds site " +
                           std::to_string(map.site_index));
    }
    if (!(map.lattice == expected)) {
      throw CkmFormatError(path.string() +
                           ": lattice does not match the grid config");
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

ScenarioStats ComputeScenarioStats(const std::vector<ChannelMap>& maps,
                                   const Scene& scene,
                                   const ScenarioConfig& config) {
  const RadioParams radio = config.radio.ToParams();
  ScenarioStats stats;
  StatsOptions coarse_options{config.plan.trim_fraction, config.los_rule};
  StatsOptions fine_options{config.plan.fine_trim_fraction, config.los_rule};
  stats.coarse = ComputeCoarseStats(maps, scene, config.grid,
                                    MakeCoarseSpec(config.grid, config.coarse_m),
                                    coarse_options, radio);
  stats.fine = ComputeFineStats(maps, scene, config.grid, fine_options, radio);
  return stats;
}

PlanMethod ParsePlanMethod(const std::string& name) {
  if (name == "joint") return PlanMethod::kJoint;
  if (name == "astar") return PlanMethod::kAstar;
  if (name == "random") return PlanMethod::kRandom;
  throw ConfigError("method: expected joint, astar or random, got \"" + name +
                    "\"");
}

const char* PlanMethodName(PlanMethod method) {
  switch (method) {
    case PlanMethod::kJoint:
      return "joint";
    case PlanMethod::kAstar:
      return "astar";
    case PlanMethod::kRandom:
      return "random";
  }
  return "unknown";
}

PlanResult RunPlan(const ScenarioStats& stats, const PlanConfig& plan,
                   PlanMethod method, uint64_t seed) {
  switch (method) {
    case PlanMethod::kJoint:
      return PlanJoint(stats.coarse, stats.fine, plan);
    case PlanMethod::kAstar:
      return BaselineAstar(stats.fine, plan);
    case PlanMethod::kRandom:
      return BaselineRandom(stats.fine, plan, seed);
  }
  throw std::logic_error("unknown plan method");
}

int ExitCodeFor(PlanStatus status) {
  switch (status) {
    case PlanStatus::kFeasible:
      return 0;
    case PlanStatus::kInfeasible:
      return 2;
    case PlanStatus::kBudgetExhausted:
      return 3;
  }
  return 1;
}

std::vector<SweepRow> RunSweep(const ScenarioStats& stats,
                               const ScenarioConfig& config, SweepParam param,
                               const std::vector<double>& values,
                               const std::vector<PlanMethod>& methods,
                               uint64_t seed) {
  std::vector<SweepRow> rows;
  for (double value : values) {
    ScenarioConfig swept = config;
    if (param == SweepParam::kSenseThreshold) {
      swept.radio.sense_threshold_dbm = value;
    } else {
      swept.radio.sinr_threshold_db = value;
    }
    const PlanConfig plan = swept.plan_config();
    for (PlanMethod method : methods) {
      rows.push_back({value, method, RunPlan(stats, plan, method, seed)});
    }
  }
  return rows;
}

std::string SweepCsv(SweepParam param, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << (param == SweepParam::kSenseThreshold ? "eps1_dbm" : "eps2_db")
      << ",method,status,corridor_length,bs_count,cost\n";
  for (const SweepRow& row : rows) {
    char value[32];
    std::snprintf(value, sizeof(value), "%.6g", row.value);
    out << value << "," << PlanMethodName(row.method) << ","
        << PlanStatusName(row.result.status) << ",";
    if (row.result.status == PlanStatus::kFeasible) {
      char cost[32];
      std::snprintf(cost, sizeof(cost), "%.6g", row.result.final_cost);
      out << row.result.fine_mask->ActiveCount() << ","
          << row.result.deployment.Count() << "," << cost;
    } else {
      out << ",,";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace corridor
