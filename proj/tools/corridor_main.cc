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

// corridor: scene generation, channel knowledge maps, planning and exports.
//
// Exit codes: 0 success or feasible plan, 1 usage or input error,
// 2 infeasible plan, 3 solver budget exhausted.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corridor/mps.h"
#include "corridor/scenario.h"

namespace corridor {
namespace {

constexpr int kUsageError = 1;

class Stopwatch {
 public:
  double Lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
};

struct Inputs {
  ScenarioConfig config;
  Scene scene;
  ScenarioStats stats;
  std::map<std::string, double> timings;
};

// Loads config and scene, then the maps from `ckm_dir` or, when empty,
// builds them in memory.
Inputs LoadInputs(const std::string& config_path, const std::string& scene_path,
                  const std::string& ckm_dir) {
  Inputs in;
  Stopwatch clock;
  in.config = LoadScenarioConfig(config_path);
  in.scene = SceneFromJson(ReadJsonFile(scene_path));
  if (in.scene.site_count() != in.config.scene.site_count) {
    throw ConfigError("scene.site_count: scene file has " +
                      std::to_string(in.scene.site_count()) +
                      " sites, config expects " +
                      std::to_string(in.config.scene.site_count));
  }
  const std::vector<ChannelMap> maps =
      ckm_dir.empty() ? BuildChannelMaps(in.scene, in.config)
                      : LoadCkmDirectory(ckm_dir, in.scene, in.config);
  in.timings["ckm_s"] = clock.Lap();
  in.stats = ComputeScenarioStats(maps, in.scene, in.config);
  in.timings["stats_s"] = clock.Lap();
  return in;
}

int SceneGen(const std::string& config_path, const std::string& out) {
  const ScenarioConfig config = LoadScenarioConfig(config_path);
  const Scene scene = GenerateScene(config.scene);
  WriteJsonFile(SceneToJson(scene), out);
  std::printf("scene: %zu buildings, %d sites -> %s\n", scene.buildings.size(),
              scene.site_count(), out.c_str());
  return 0;
}

int CkmBuild(const std::string& config_path, const std::string& scene_path,
             const std::string& out_dir) {
  const ScenarioConfig config = LoadScenarioConfig(config_path);
  const Scene scene = SceneFromJson(ReadJsonFile(scene_path));
  const std::vector<ChannelMap> maps = BuildChannelMaps(scene, config);
  WriteCkmDirectory(maps, scene, config, out_dir);
  std::printf("ckm: %zu maps -> %s\n", maps.size(), out_dir.c_str());
  return 0;
}

struct PlanFlags {
  std::string config;
  std::string scene;
  std::string ckm_dir;
  std::string method = "joint";
  std::string out;
  std::optional<uint64_t> seed;
  std::string dump_mps;
  std::string external_solver;
};

int Plan(const PlanFlags& flags) {
  const PlanMethod method = ParsePlanMethod(flags.method);
  Inputs in = LoadInputs(flags.config, flags.scene, flags.ckm_dir);
  PlanConfig plan = in.config.plan_config();
  if (!flags.dump_mps.empty()) {
    plan.mps_dump_dir = flags.dump_mps;
    std::filesystem::create_directories(plan.mps_dump_dir);
  }
  std::filesystem::path work;
  if (!flags.external_solver.empty()) {
    const std::filesystem::path exe = flags.external_solver;
    work = std::filesystem::temp_directory_path() /
           ("corridor_ext_" + std::to_string(::getpid()));
    std::filesystem::create_directories(work);
    plan.solver = [exe, work](const IlpModel& model, int64_t) {
      return SolveExternal(model, exe, work);
    };
  }
  const uint64_t seed = flags.seed.value_or(in.config.scene.seed);

  Stopwatch clock;
  const PlanResult result = RunPlan(in.stats, plan, method, seed);
  in.timings["plan_s"] = clock.Lap();
  if (!work.empty()) {
    std::error_code ignored;
    std::filesystem::remove_all(work, ignored);
  }

  BundleInputs bundle_in;
  bundle_in.config = &in.config;
  bundle_in.scene = &in.scene;
  bundle_in.fine = &in.stats.fine;
  bundle_in.method = method;
  bundle_in.seed = seed;
  WriteJsonFile(MakeBundle(result, bundle_in), flags.out);
  for (const auto& [name, seconds] : in.timings) {
    std::fprintf(stderr, "%s %.3f\n", name.c_str(), seconds);
  }

  std::printf("method=%s status=%s", PlanMethodName(method),
              PlanStatusName(result.status));
  if (result.status == PlanStatus::kFeasible) {
    std::printf(" length=%d bs=%d cost=%.6g iterations=%d",
                result.fine_mask->ActiveCount(), result.deployment.Count(),
                result.final_cost, result.iterations);
  } else if (!result.message.empty()) {
    std::printf(" (%s)", result.message.c_str());
  }
  std::printf("\n");
  return ExitCodeFor(result.status);
}

int Export(const std::string& bundle_path, const std::string& what,
           const std::string& out, std::optional<double> db_min,
           std::optional<double> db_max) {
  const ExportKind kind = ParseExportKind(what);
  std::optional<DbRange> range;
  if (db_min || db_max) {
    DbRange r = DefaultRange(kind);
    if (db_min) r.lo = *db_min;
    if (db_max) r.hi = *db_max;
    range = r;
  }
  for (const auto& path :
       ExportBundle(ReadJsonFile(bundle_path), kind, out, range)) {
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

struct SweepFlags {
  std::string config;
  std::string scene;
  std::string ckm_dir;
  std::string param;
  std::vector<double> values;
  std::vector<std::string> methods{"joint", "astar", "random"};
  std::string out;
  std::optional<uint64_t> seed;
};

int Sweep(const SweepFlags& flags) {
  SweepParam param;
  if (flags.param == "eps1") {
    param = SweepParam::kSenseThreshold;
  } else if (flags.param == "eps2") {
    param = SweepParam::kSinrThreshold;
  } else {
    throw ConfigError("param: expected eps1 or eps2");
  }
  std::vector<PlanMethod> methods;
  for (const std::string& m : flags.methods) {
    methods.push_back(ParsePlanMethod(m));
  }
  const Inputs in = LoadInputs(flags.config, flags.scene, flags.ckm_dir);
  const std::vector<SweepRow> rows =
      RunSweep(in.stats, in.config, param, flags.values, methods,
               flags.seed.value_or(in.config.scene.seed));
  const std::string csv = SweepCsv(param, rows);
  std::ofstream out(flags.out, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + flags.out);
  out << csv;
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Joint corridor planning and base-station deployment"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, scene_path, out, out_dir;

  auto* scene_gen = app.add_subcommand("scene-gen", "Generate a city scene");
  scene_gen->add_option("--config", config_path, "Scenario config JSON")
      ->required()->check(CLI::ExistingFile);
  scene_gen->add_option("--out", out, "Scene JSON to write")->required();

  auto* ckm = app.add_subcommand("ckm-build", "Build per-site channel maps");
  ckm->add_option("--config", config_path, "Scenario config JSON")
      ->required()->check(CLI::ExistingFile);
  ckm->add_option("--scene", scene_path, "Scene JSON")
      ->required()->check(CLI::ExistingFile);
  ckm->add_option("--out-dir", out_dir, "Output directory")->required();

  PlanFlags plan_flags;
  auto* plan = app.add_subcommand("plan", "Plan a corridor and deployment");
  plan->add_option("--config", plan_flags.config, "Scenario config JSON")
      ->required()->check(CLI::ExistingFile);
  plan->add_option("--scene", plan_flags.scene, "Scene JSON")
      ->required()->check(CLI::ExistingFile);
  plan->add_option("--ckm-dir", plan_flags.ckm_dir,
                   "Channel map directory (built in memory when omitted)")
      ->check(CLI::ExistingDirectory);
  plan->add_option("--method", plan_flags.method, "joint, astar or random")
      ->check(CLI::IsMember({"joint", "astar", "random"}));
  plan->add_option("--out", plan_flags.out, "Result bundle JSON")->required();
  plan->add_option("--seed", plan_flags.seed,
                   "Seed for the random baseline (default: scene seed)");
  plan->add_option("--dump-mps", plan_flags.dump_mps,
                   "Write every ILP as MPS into this directory");
  plan->add_option("--external-solver", plan_flags.external_solver,
                   "Run `exe model.mps solution.txt` instead of the built-in "
                   "solver")
      ->check(CLI::ExistingFile);

  std::string bundle_path, what;
  std::optional<double> db_min, db_max;
  auto* exp = app.add_subcommand("export", "Export a result bundle");
  exp->add_option("--bundle", bundle_path, "Result bundle JSON")
      ->required()->check(CLI::ExistingFile);
  exp->add_option("--what", what,
                  "corridor-csv, deployment-csv, sinr-heatmap or "
                  "sensing-heatmap")
      ->required()
      ->check(CLI::IsMember(
          {"corridor-csv", "deployment-csv", "sinr-heatmap",
           "sensing-heatmap"}));
  exp->add_option("--out", out, "CSV to write")->required();
  exp->add_option("--db-min", db_min, "Heatmap PGM black level");
  exp->add_option("--db-max", db_max, "Heatmap PGM white level");

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Sweep a threshold");
  sweep->add_option("--config", sweep_flags.config, "Scenario config JSON")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--scene", sweep_flags.scene, "Scene JSON")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--ckm-dir", sweep_flags.ckm_dir, "Channel map directory")
      ->check(CLI::ExistingDirectory);
  sweep->add_option("--param", sweep_flags.param,
                    "eps1 (sensing, dBm) or eps2 (SINR, dB)")
      ->required()->check(CLI::IsMember({"eps1", "eps2"}));
  sweep->add_option("--values", sweep_flags.values, "Threshold values")
      ->required()->delimiter(',');
  sweep->add_option("--methods", sweep_flags.methods, "Methods to run")
      ->delimiter(',');
  sweep->add_option("--out", sweep_flags.out, "CSV to write")->required();
  sweep->add_option("--seed", sweep_flags.seed, "Random baseline seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*scene_gen) return SceneGen(config_path, out);
    if (*ckm) return CkmBuild(config_path, scene_path, out_dir);
    if (*plan) return Plan(plan_flags);
    if (*exp) return Export(bundle_path, what, out, db_min, db_max);
    if (*sweep) return Sweep(sweep_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace
}  // namespace corridor

int main(int argc, char** argv) { return corridor::Main(argc, argv); }
