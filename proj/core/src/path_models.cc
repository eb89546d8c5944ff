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
#include <stdexcept>

#include "corridor/planner.h"
#include "planner_internal.h"

namespace corridor {
namespace {

std::string CellTag(const CellIndex& c) {
  return std::to_string(c.i) + "_" + std::to_string(c.j);
}

// Local edge of `block` that faces the adjacent coarse cell `other`:
// 0 south (i = 1), 1 north (i = F), 2 west (j = 1), 3 east (j = F).
int FacingEdge(const CellIndex& block, const CellIndex& other) {
  if (other.i == block.i - 1 && other.j == block.j) return 0;
  if (other.i == block.i + 1 && other.j == block.j) return 1;
  if (other.j == block.j - 1 && other.i == block.i) return 2;
  if (other.j == block.j + 1 && other.i == block.i) return 3;
  throw GridError("coarse path cells " + ToString(block) + " and " +
                  ToString(other) + " are not adjacent");
}

bool OnEdge(const CellIndex& c, int edge, int factor) {
  switch (edge) {
    case 0:
      return c.i == 1;
    case 1:
      return c.i == factor;
    case 2:
      return c.j == 1;
    default:
      return c.j == factor;
  }
}

}  // namespace

PathModel BuildPathModel(int side, const CellIndex& start,
                         const CellIndex& dest,
                         std::span<const uint8_t> allowed,
                         const std::string& name) {
  if (side < 1) throw PlanError("path grid side must be >= 1");
  const size_t cells = static_cast<size_t>(side) * side;
  if (!allowed.empty() && allowed.size() != cells) {
    throw PlanError("allowed-cell mask has the wrong size");
  }
  auto inside = [side](const CellIndex& c) {
    return c.i >= 1 && c.i <= side && c.j >= 1 && c.j <= side;
  };
  if (!inside(start) || !inside(dest)) {
    throw PlanError("path anchors lie outside the grid");
  }

  PathModel path;
  path.model = IlpModel(name);
  path.side = side;
  path.start = start;
  path.dest = dest;
  IlpModel& model = path.model;
  for (int i = 1; i <= side; ++i) {
    for (int j = 1; j <= side; ++j) {
      path.cells.push_back(model.AddBinary("A_" + CellTag({i, j})));
    }
  }
  LinearExpr objective;
  for (Var v : path.cells) objective += v;
  model.SetObjective(objective);

  const bool single = start == dest;
  for (int i = 1; i <= side; ++i) {
    for (int j = 1; j <= side; ++j) {
      const CellIndex c{i, j};
      LinearExpr around;
      for (const CellIndex& n : Neighbors4(c, side)) around += path.A(n);
      const bool anchor = c == start || c == dest;
      const double need = anchor ? (single ? 0.0 : 1.0) : 2.0;
      if (need > 0.0) {
        model.AddConstraint(around - need * LinearExpr(path.A(c)),
                            Sense::kGreaterEqual, 0.0, "deg_lo_" + CellTag(c));
      }
      model.AddConstraint(around, Sense::kLessEqual, 2.0,
                          "deg_hi_" + CellTag(c));
    }
  }
  for (int i = std::min(start.i, dest.i); i <= std::max(start.i, dest.i);
       ++i) {
    LinearExpr row;
    for (int j = 1; j <= side; ++j) row += path.A({i, j});
    model.AddConstraint(row, Sense::kGreaterEqual, 1.0,
                        "row_" + std::to_string(i));
  }
  for (int j = std::min(start.j, dest.j); j <= std::max(start.j, dest.j);
       ++j) {
    LinearExpr col;
    for (int i = 1; i <= side; ++i) col += path.A({i, j});
    model.AddConstraint(col, Sense::kGreaterEqual, 1.0,
                        "col_" + std::to_string(j));
  }
  model.AddConstraint(path.A(start), Sense::kEqual, 1.0, "anchor_start");
  model.AddConstraint(path.A(dest), Sense::kEqual, 1.0, "anchor_dest");
  if (!allowed.empty()) {
    for (int i = 1; i <= side; ++i) {
      for (int j = 1; j <= side; ++j) {
        if (!allowed[static_cast<size_t>((i - 1) * side + (j - 1))]) {
          model.AddConstraint(path.A({i, j}), Sense::kEqual, 0.0,
                              "off_" + CellTag({i, j}));
        }
      }
    }
  }
  return path;
}

std::vector<uint8_t> BlockAllowedCells(std::span<const CellIndex> coarse_path,
                                       size_t position,
                                       const SegmentEndpoints& ends,
                                       const FeasibilityGrid& feasibility,
                                       int factor) {
  const CellIndex& block = coarse_path[position];
  std::vector<int> sealed;
  if (position > 0) sealed.push_back(FacingEdge(block, coarse_path[position - 1]));
  if (position + 1 < coarse_path.size()) {
    sealed.push_back(FacingEdge(block, coarse_path[position + 1]));
  }
  std::vector<uint8_t> allowed(static_cast<size_t>(factor) * factor, 0);
  for (int i = 1; i <= factor; ++i) {
    for (int j = 1; j <= factor; ++j) {
      const CellIndex local{i, j};
      bool ok = feasibility.ok(BlockToGlobal(block, local, factor));
      if (ok && local != ends.start && local != ends.dest) {
        for (int edge : sealed) {
          if (OnEdge(local, edge, factor)) ok = false;
        }
      }
      allowed[static_cast<size_t>((i - 1) * factor + (j - 1))] = ok;
    }
  }
  return allowed;
}

PathModel BuildP31(std::span<const CellIndex> coarse_path, size_t position,
                   const FeasibilityGrid& feasibility, int factor) {
  if (position >= coarse_path.size()) {
    throw PlanError("block position is outside the coarse path");
  }
  const CellIndex& block = coarse_path[position];
  const SegmentEndpoints ends =
      ComputeSegmentEndpoints(coarse_path, block, factor);
  const std::vector<uint8_t> allowed =
      BlockAllowedCells(coarse_path, position, ends, feasibility, factor);
  return BuildPathModel(factor, ends.start, ends.dest, allowed,
                        "p3_1_block_" + CellTag(block));
}

PathSolution SolvePathModel(PathModel path, int64_t node_budget,
                            const PlanConfig& config) {
  auto var = [&path](const CellIndex& c) { return path.A(c); };
  internal::AddLengthBound(path.model, path.side, path.start, path.dest, var);
  PathSolution out;
  for (int round = 0; round < config.max_cut_rounds; ++round) {
    const SolveResult res =
        internal::RunSolver(path.model, node_budget, config);
    out.nodes += res.nodes;
    out.cut_rounds = round;
    out.status = res.status;
    if (!res.has_solution()) return out;
    CorridorMask mask(path.side, path.start, path.dest);
    for (int i = 1; i <= path.side; ++i) {
      for (int j = 1; j <= path.side; ++j) {
        mask.Set({i, j}, res.value(path.A({i, j})));
      }
    }
    if (internal::AddConnectivityCuts(path.model, mask, var, round)) continue;
    if (!ValidateCorridor(mask).ok) {
      throw std::logic_error("path model returned an invalid corridor");
    }
    out.mask = std::move(mask);
    return out;
  }
  out.status = SolveStatus::kBudgetExhausted;
  return out;
}

P32Model BuildP32(const CorridorMask& mask, const StatsGrid& fine,
                  const PlanConfig& config) {
  if (mask.side() != fine.side()) {
    throw PlanError("corridor does not match the statistics grid");
  }
  const RadioParams& radio = config.radio;
  const int sites = fine.sites();
  const bool trimmed = fine.extrema() == SinrExtrema::kTrimmed;
  const std::vector<CellIndex> active = mask.ActiveCells();

  P32Model p32;
  p32.big_m = ResolveBigM(fine, radio, active);
  IlpModel& model = p32.model;
  for (int k = 0; k < sites; ++k) {
    p32.delta.push_back(model.AddBinary("delta_" + std::to_string(k + 1)));
  }
  LinearExpr objective;
  for (Var v : p32.delta) objective += v;
  model.SetObjective(objective);

  for (const CellIndex& c : active) {
    const std::string tag = CellTag(c);
    const auto cell = fine.cell(c);
    LinearExpr sensing;
    LinearExpr los;
    for (int k = 0; k < sites; ++k) {
      sensing.Add(p32.delta[k], cell[k].echo_min);
      los.Add(p32.delta[k], cell[k].los_indicator);
    }
    model.AddConstraint(sensing, Sense::kGreaterEqual, radio.sense_threshold,
                        "sense_" + tag);
    model.AddConstraint(los, Sense::kGreaterEqual, double(kMinLosSites),
                        "los_" + tag);

    LinearExpr any;
    for (int k = 0; k < sites; ++k) {
      const double serving = trimmed ? cell[k].h_min_trim : cell[k].h_min;
      const double alone =
          radio.tx_power * radio.tx_gain * serving / radio.noise;
      // Interference only lowers the SINR, so a site that misses the
      // threshold alone can never be selected here.
      if (!MeetsThreshold(alone, radio.sinr_threshold)) continue;
      const std::string kt = std::to_string(k + 1) + "_" + tag;
      const Var z = model.AddBinary("z_" + kt);
      any += z;
      model.AddConstraint(z - p32.delta[k], Sense::kLessEqual, 0.0,
                          "zsel_" + kt);
      LinearExpr link;
      link.Add(z, p32.big_m);
      for (int other = 0; other < sites; ++other) {
        if (other == k) continue;
        const double h = trimmed ? cell[other].h_max_trim : cell[other].h_max;
        link.Add(p32.delta[other],
                 radio.sinr_threshold * radio.tx_power * h);
      }
      link.Add(p32.delta[k], -radio.tx_power * radio.tx_gain * serving);
      model.AddConstraint(link, Sense::kLessEqual,
                          p32.big_m - radio.sinr_threshold * radio.noise,
                          "sinr_" + kt);
    }
    model.AddConstraint(any, Sense::kGreaterEqual, 1.0, "any_" + tag);
  }
  return p32;
}

DeploymentSolution SolveDeployment(const CorridorMask& mask,
                                   const StatsGrid& fine,
                                   const PlanConfig& config,
                                   const std::string& dump_name) {
  const P32Model p32 = BuildP32(mask, fine, config);
  internal::DumpModel(config, dump_name, p32.model);
  const SolveResult res =
      internal::RunSolver(p32.model, config.deployment_node_budget, config);
  DeploymentSolution out;
  out.status = res.status;
  out.nodes = res.nodes;
  if (res.has_solution()) {
    Deployment deployment(static_cast<int>(p32.delta.size()));
    for (size_t k = 0; k < p32.delta.size(); ++k) {
      deployment.Set(static_cast<int>(k), res.value(p32.delta[k]));
    }
    out.deployment = std::move(deployment);
  }
  return out;
}

}  // namespace corridor
