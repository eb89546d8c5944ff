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

// Scenario configuration and the scene -> CKM -> statistics -> plan pipeline
// behind the command-line tool, plus result bundles and file exports.
//
// Configs are JSON with dB/dBm values at the boundary. Parse errors name the
// offending field by its dotted path, e.g. "scene.bounds".

#ifndef CORRIDOR_SCENARIO_H_
#define CORRIDOR_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corridor/channel_map.h"
#include "corridor/grid.h"
#include "corridor/metrics.h"
#include "corridor/planner.h"
#include "corridor/radio.h"
#include "corridor/scene.h"

namespace corridor {

inline constexpr char kToolVersion[] = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Radio parameters as written in configs.
struct RadioConfig {
  double tx_power_dbm = 30.0;
  double tx_gain_db = 12.0;
  double noise_dbm = -110.0;
  double carrier_hz = 1e9;
  double rcs_m2 = 1.0;
  double sense_threshold_dbm = -75.0;
  double sinr_threshold_db = 3.0;
  std::optional<double> big_m;  // unset is written as "auto"

  RadioParams ToParams() const;
};

struct ScenarioConfig {
  SceneConfig scene;
  GridSpec grid;
  int coarse_m = 10;
  SampleLattice lattice;
  LosRule los_rule = LosRule::kAllSamples;
  double nlos_base_db = 20.0;
  double nlos_per_wall_db = 10.0;
  RadioConfig radio;
  PlanConfig plan;  // radio and solver hooks are filled by the pipeline

  GainModel gain_model() const;
  // Plan config with the radio parameters resolved.
  PlanConfig plan_config() const;
};

ScenarioConfig ParseScenarioConfig(const nlohmann::json& json);
// Accepts a scenario config or a result bundle (its "config" echo).
ScenarioConfig LoadScenarioConfig(const std::filesystem::path& path);
// Canonical form with every field present. Parsing it yields the same config.
nlohmann::json ScenarioConfigToJson(const ScenarioConfig& config);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
// Two-space indent, trailing newline.
void WriteJsonFile(const nlohmann::json& json,
                   const std::filesystem::path& path);

// Builds one channel map per site; sites are processed concurrently.
std::vector<ChannelMap> BuildChannelMaps(const Scene& scene,
                                         const ScenarioConfig& config);

// Writes site_XXX.ckm files and manifest.json. Returns the manifest.
nlohmann::json WriteCkmDirectory(const std::vector<ChannelMap>& maps,
                                 const Scene& scene,
                                 const ScenarioConfig& config,
                                 const std::filesystem::path& dir);

// Reads the maps listed for `scene`, checking checksums against the manifest
// when present and every lattice against the config.
std::vector<ChannelMap> LoadCkmDirectory(const std::filesystem::path& dir,
                                         const Scene& scene,
                                         const ScenarioConfig& config);

struct ScenarioStats {
  StatsGrid coarse;
  StatsGrid fine;
};

ScenarioStats ComputeScenarioStats(const std::vector<ChannelMap>& maps,
                                   const Scene& scene,
                                   const ScenarioConfig& config);

enum class PlanMethod { kJoint, kAstar, kRandom };

PlanMethod ParsePlanMethod(const std::string& name);
const char* PlanMethodName(PlanMethod method);

PlanResult RunPlan(const ScenarioStats& stats, const PlanConfig& plan,
                   PlanMethod method, uint64_t seed);

struct BundleInputs {
  const ScenarioConfig* config = nullptr;
  const Scene* scene = nullptr;
  const StatsGrid* fine = nullptr;
  PlanMethod method = PlanMethod::kJoint;
  uint64_t seed = 0;
};

// A deterministic function of the inputs: repeated runs give identical bytes.
nlohmann::json MakeBundle(const PlanResult& result, const BundleInputs& in);

// Process exit code for a plan status: 0 feasible, 2 infeasible,
// 3 budget exhausted.
int ExitCodeFor(PlanStatus status);

enum class ExportKind { kCorridorCsv, kDeploymentCsv, kSinrHeatmap,
                        kSensingHeatmap };

ExportKind ParseExportKind(const std::string& name);

struct DbRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Default PGM ranges: SINR -10..30 dB, sensing -130..-70 dBm.
DbRange DefaultRange(ExportKind kind);

// Writes `out` (CSV). Heatmaps also write a PGM next to it with the
// extension replaced by ".pgm". Returns the files written.
std::vector<std::filesystem::path> ExportBundle(
    const nlohmann::json& bundle, ExportKind kind,
    const std::filesystem::path& out, std::optional<DbRange> range = {});

enum class SweepParam { kSenseThreshold, kSinrThreshold };

struct SweepRow {
  double value = 0.0;
  PlanMethod method = PlanMethod::kJoint;
  PlanResult result;
};

// Re-plans with one threshold replaced by each value (dBm for sensing, dB
// for SINR). Statistics do not depend on thresholds and are reused.
std::vector<SweepRow> RunSweep(const ScenarioStats& stats,
                               const ScenarioConfig& config, SweepParam param,
                               const std::vector<double>& values,
                               const std::vector<PlanMethod>& methods,
                               uint64_t seed);

// value,method,status,corridor_length,bs_count,cost
std::string SweepCsv(SweepParam param, const std::vector<SweepRow>& rows);

}  // namespace corridor

#endif  // CORRIDOR_SCENARIO_H_
