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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "corridor/ckm_io.h"
#include "corridor/scenario.h"

namespace corridor {
namespace {

using nlohmann::json;

json MaskRows(const CorridorMask& mask) {
  json rows = json::array();
  std::istringstream in(mask.ToText());
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

json CellJson(const CellIndex& c) { return json::array({c.i, c.j}); }

json PathJson(const CorridorMask& mask) {
  json path = json::array();
  if (!ValidateCorridor(mask).ok) return path;
  for (const CellIndex& c : ExtractPath(mask)) path.push_back(CellJson(c));
  return path;
}

json SitesJson(const Deployment& deployment) {
  json sites = json::array();
  for (int k = 0; k < deployment.size(); ++k) {
    if (deployment[k]) sites.push_back(k);
  }
  return sites;
}

// dB value, or null for zero power.
json DbOrNull(double linear, double offset_db) {
  if (!(linear > 0.0) || !std::isfinite(linear)) return nullptr;
  return LinearToDb(linear) + offset_db;
}

json Heatmaps(const StatsGrid& fine, const Deployment& deployment,
              const RadioParams& radio) {
  json sinr = json::array();
  json sensing = json::array();
  for (int i = 1; i <= fine.side(); ++i) {
    json sinr_row = json::array();
    json sensing_row = json::array();
    for (int j = 1; j <= fine.side(); ++j) {
      const auto cell = fine.cell({i, j});
      sinr_row.push_back(DbOrNull(
          BestWorstCaseSinr(cell, fine.extrema(), deployment, radio), 0.0));
      sensing_row.push_back(DbOrNull(SensingPower(cell, deployment), 30.0));
    }
    sinr.push_back(sinr_row);
    sensing.push_back(sensing_row);
  }
  return {{"sinr_db", sinr}, {"sensing_dbm", sensing}};
}

json VerificationJson(const PlanResult& result, const StatsGrid* fine,
                      const RadioParams& radio) {
  if (!result.fine_mask || fine == nullptr ||
      result.deployment.size() != fine->sites()) {
    return {{"ok", false}, {"reason", "no fine corridor and deployment"}};
  }
  const SolutionReport report =
      VerifySolution(*result.fine_mask, result.deployment, *fine, radio);
  json corridor_violations = json::array();
  for (const CorridorViolation& v : report.corridor.violations) {
    corridor_violations.push_back(
        {{"rule", RuleName(v.rule)}, {"cell", CellJson(v.cell)}});
  }
  json cells = json::array();
  for (const CellViolation& v : report.cells) {
    cells.push_back(
        {{"cell", CellJson(v.cell)}, {"constraint", v.constraint}});
  }
  return {{"ok", report.ok},
          {"corridor", {{"ok", report.corridor.ok},
                        {"violations", corridor_violations}}},
          {"cell_violations", cells}};
}

std::string Sha256Text(const std::string& text) {
  return Sha256Hex(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

const json& Need(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key) || j[key].is_null()) {
    throw ConfigError(std::string("bundle has no ") + what);
  }
  return j[key];
}

std::set<std::pair<int, int>> CorridorCells(const json& plan) {
  std::set<std::pair<int, int>> cells;
  const json& rows = plan.value("fine_mask", json());
  if (!rows.is_array()) return cells;
  for (size_t r = 0; r < rows.size(); ++r) {
    const std::string line = rows[r].get<std::string>();
    for (size_t c = 0; c < line.size(); ++c) {
      if (line[c] == '1') {
        cells.insert({static_cast<int>(r) + 1, static_cast<int>(c) + 1});
      }
    }
  }
  return cells;
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

void WriteHeatmap(const json& bundle, ExportKind kind,
                  const std::filesystem::path& out, const DbRange& range,
                  std::vector<std::filesystem::path>& written) {
  const json& maps = Need(bundle, "heatmaps", "heatmaps (no deployment)");
  const json& grid = maps.at(kind == ExportKind::kSinrHeatmap ? "sinr_db"
                                                               : "sensing_dbm");
  const auto corridor = CorridorCells(bundle.at("plan"));
  const size_t side = grid.size();

  std::ofstream csv = OpenOut(out);
  std::string pixels;
  for (size_t i = 0; i < side; ++i) {
    for (size_t j = 0; j < grid[i].size(); ++j) {
      const json& v = grid[i][j];
      if (j) csv << ",";
      csv << (v.is_null() ? std::string("-inf")
                          : Fmt("%.3f", v.get<double>()));
      if (corridor.count({static_cast<int>(i) + 1, static_cast<int>(j) + 1})) {
        csv << "*";
      }
      double level = 0.0;
      if (!v.is_null()) {
        level = (v.get<double>() - range.lo) / (range.hi - range.lo);
        level = std::clamp(level, 0.0, 1.0);
      }
      pixels.push_back(static_cast<char>(std::lround(level * 255.0)));
    }
    csv << "\n";
  }
  if (!csv) throw std::runtime_error("failed writing " + out.string());
  written.push_back(out);

  std::filesystem::path pgm = out;
  pgm.replace_extension(".pgm");
  std::ofstream image = OpenOut(pgm);
  image << "P5\n" << side << " " << side << "\n255\n" << pixels;
  if (!image) throw std::runtime_error("failed writing " + pgm.string());
  written.push_back(pgm);
}

}  // namespace

json MakeBundle(const PlanResult& result, const BundleInputs& in) {
  if (in.config == nullptr || in.scene == nullptr) {
    throw std::invalid_argument("bundle needs a config and a scene");
  }
  const RadioParams radio = in.config->radio.ToParams();
  json b;
  b["tool"] = "corridor";
  b["version"] = kToolVersion;
  b["method"] = PlanMethodName(in.method);
  b["seed"] = in.seed;
  b["config"] = ScenarioConfigToJson(*in.config);

  json sites = json::array();
  for (const Point3& p : in.scene->sites) sites.push_back({p.x, p.y, p.z});
  b["scene"] = {{"seed", in.scene->seed},
                {"building_count", in.scene->buildings.size()},
                {"sites", sites},
                {"sha256", Sha256Text(SceneToJson(*in.scene).dump())}};

  json plan;
  plan["status"] = PlanStatusName(result.status);
  plan["message"] = result.message;
  plan["iterations"] = result.iterations;
  plan["converged"] = result.converged;
  if (result.coarse_mask) {
    json coarse = {{"mask", MaskRows(*result.coarse_mask)},
                   {"path", PathJson(*result.coarse_mask)}};
    if (result.coarse_deployment) {
      coarse["deployment"] = SitesJson(*result.coarse_deployment);
    }
    plan["coarse"] = coarse;
  } else {
    plan["coarse"] = nullptr;
  }
  if (result.fine_mask) {
    plan["fine_mask"] = MaskRows(*result.fine_mask);
    plan["path"] = PathJson(*result.fine_mask);
    plan["corridor_length"] = result.fine_mask->ActiveCount();
  } else {
    plan["fine_mask"] = nullptr;
    plan["path"] = json::array();
    plan["corridor_length"] = nullptr;
  }
  plan["deployment"] = SitesJson(result.deployment);
  plan["bs_count"] = result.deployment.Count();
  plan["cost_history"] = result.cost_history;
  plan["final_cost"] = result.final_cost;
  json subproblems = json::array();
  for (const SubproblemRecord& s : result.subproblems) {
    subproblems.push_back({{"name", s.name},
                           {"status", StatusName(s.status)},
                           {"nodes", s.nodes},
                           {"objective", s.objective},
                           {"cut_rounds", s.cut_rounds}});
  }
  plan["subproblems"] = subproblems;
  b["plan"] = plan;

  b["verification"] = VerificationJson(result, in.fine, radio);
  if (in.fine != nullptr && result.deployment.size() == in.fine->sites() &&
      result.deployment.Count() > 0) {
    b["heatmaps"] = Heatmaps(*in.fine, result.deployment, radio);
  }
  return b;
}

ExportKind ParseExportKind(const std::string& name) {
  if (name == "corridor-csv") return ExportKind::kCorridorCsv;
  if (name == "deployment-csv") return ExportKind::kDeploymentCsv;
  if (name == "sinr-heatmap") return ExportKind::kSinrHeatmap;
  if (name == "sensing-heatmap") return ExportKind::kSensingHeatmap;
  throw ConfigError(
      "what: expected corridor-csv, deployment-csv, sinr-heatmap or "
      "sensing-heatmap, got \"" + name + "\"");
}

DbRange DefaultRange(ExportKind kind) {
  if (kind == ExportKind::kSensingHeatmap) return {-130.0, -70.0};
  return {-10.0, 30.0};
}

std::vector<std::filesystem::path> ExportBundle(
    const json& bundle, ExportKind kind, const std::filesystem::path& out,
    std::optional<DbRange> range) {
  const json& plan = Need(bundle, "plan", "plan");
  const ScenarioConfig config =
      ParseScenarioConfig(Need(bundle, "config", "config echo"));
  const GridSpec& grid = config.grid;
  std::vector<std::filesystem::path> written;

  switch (kind) {
    case ExportKind::kCorridorCsv: {
      const json& path = Need(plan, "path", "corridor path");
      if (path.empty()) throw ConfigError("bundle has no corridor path");
      std::ofstream csv = OpenOut(out);
      csv << "step,i,j,x_m,y_m,z_m\n";
      int step = 0;
      for (const json& cell : path) {
        const CellIndex c{cell[0].get<int>(), cell[1].get<int>()};
        const Box3 box = CellRegion(grid, c);
        csv << step++ << "," << c.i << "," << c.j << ","
            << Fmt("%.3f", 0.5 * (box.x_min + box.x_max)) << ","
            << Fmt("%.3f", 0.5 * (box.y_min + box.y_max)) << ","
            << Fmt("%.3f", 0.5 * (box.z_min + box.z_max)) << "\n";
      }
      if (!csv) throw std::runtime_error("failed writing " + out.string());
      written.push_back(out);
      break;
    }
    case ExportKind::kDeploymentCsv: {
      const json& sites = Need(Need(bundle, "scene", "scene"), "sites",
                               "candidate sites");
      std::set<int> deployed;
      for (const json& k : plan.value("deployment", json::array())) {
        deployed.insert(k.get<int>());
      }
      std::ofstream csv = OpenOut(out);
      csv << "site,x_m,y_m,z_m,deployed\n";
      for (size_t k = 0; k < sites.size(); ++k) {
        csv << k << "," << Fmt("%.3f", sites[k][0].get<double>()) << ","
            << Fmt("%.3f", sites[k][1].get<double>()) << ","
            << Fmt("%.3f", sites[k][2].get<double>()) << ","
            << (deployed.count(static_cast<int>(k)) ? 1 : 0) << "\n";
      }
      if (!csv) throw std::runtime_error("failed writing " + out.string());
      written.push_back(out);
      break;
    }
    case ExportKind::kSinrHeatmap:
    case ExportKind::kSensingHeatmap: {
      const DbRange r = range.value_or(DefaultRange(kind));
      if (!(r.hi > r.lo)) throw ConfigError("db range: max must exceed min");
      WriteHeatmap(bundle, kind, out, r, written);
      break;
    }
  }
  return written;
}

}  // namespace corridor
