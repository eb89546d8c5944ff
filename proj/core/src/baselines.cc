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
#include <cstdlib>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <tuple>

#include "corridor/planner.h"

namespace corridor {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CorridorMask MaskFromPath(int side, const std::vector<CellIndex>& path) {
  CorridorMask mask(side, {1, 1}, {side, side});
  for (const CellIndex& c : path) mask.Set(c, true);
  return mask;
}

std::vector<uint8_t> AllowedFrom(const FeasibilityGrid& feasibility) {
  const int side = feasibility.side();
  std::vector<uint8_t> allowed(static_cast<size_t>(side) * side, 0);
  for (int i = 1; i <= side; ++i) {
    for (int j = 1; j <= side; ++j) {
      allowed[static_cast<size_t>((i - 1) * side + (j - 1))] =
          feasibility.ok({i, j});
    }
  }
  return allowed;
}

}  // namespace

std::vector<CellIndex> AstarPath(int side, const CellIndex& start,
                                 const CellIndex& dest,
                                 std::span<const uint8_t> allowed) {
  const size_t cells = static_cast<size_t>(side) * side;
  if (!allowed.empty() && allowed.size() != cells) {
    throw PlanError("allowed-cell mask has the wrong size");
  }
  auto slot = [side](const CellIndex& c) {
    return static_cast<size_t>((c.i - 1) * side + (c.j - 1));
  };
  auto open = [&](const CellIndex& c) {
    return allowed.empty() || allowed[slot(c)] != 0;
  };
  if (!open(start) || !open(dest)) return {};
  auto heuristic = [&dest](const CellIndex& c) {
    return std::abs(c.i - dest.i) + std::abs(c.j - dest.j);
  };

  // (f, h, i, j): lowest f, then closest to the goal, then lowest index.
  using Entry = std::tuple<int, int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<int> g(cells, -1);
  std::vector<int> parent(cells, -1);
  std::vector<uint8_t> closed(cells, 0);
  g[slot(start)] = 0;
  queue.emplace(heuristic(start), heuristic(start), start.i, start.j);
  while (!queue.empty()) {
    const auto [f, h, i, j] = queue.top();
    queue.pop();
    const CellIndex c{i, j};
    if (closed[slot(c)]) continue;
    closed[slot(c)] = 1;
    if (c == dest) break;
    for (const CellIndex& n : Neighbors4(c, side)) {
      if (!open(n) || closed[slot(n)]) continue;
      const int cost = g[slot(c)] + 1;
      if (g[slot(n)] < 0 || cost < g[slot(n)]) {
        g[slot(n)] = cost;
        parent[slot(n)] = static_cast<int>(slot(c));
        queue.emplace(cost + heuristic(n), heuristic(n), n.i, n.j);
      }
    }
  }
  if (!closed[slot(dest)]) return {};
  std::vector<CellIndex> path;
  for (int s = static_cast<int>(slot(dest)); s >= 0; s = parent[s]) {
    path.push_back({s / side + 1, s % side + 1});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

PathSolution ShortestCorridor(int side, std::span<const uint8_t> allowed,
                              const PlanConfig& config) {
  PathSolution out;
  const std::vector<CellIndex> path =
      AstarPath(side, {1, 1}, {side, side}, allowed);
  if (path.empty()) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  CorridorMask mask = MaskFromPath(side, path);
  if (ValidateCorridor(mask).ok) {
    // No corridor can be shorter than the shortest open path.
    out.status = SolveStatus::kOptimal;
    out.mask = std::move(mask);
    return out;
  }
  return SolvePathModel(
      BuildPathModel(side, {1, 1}, {side, side}, allowed, "corridor"),
      config.path_node_budget, config);
}

PlanResult BaselineAstar(const StatsGrid& fine, const PlanConfig& config) {
  config.Validate();
  PlanResult result;
  result.method = "astar";
  const int n = fine.side();
  const CorridorMask mask = MaskFromPath(n, AstarPath(n, {1, 1}, {n, n}));
  result.fine_mask = mask;
  result.deployment = Deployment(fine.sites());
  const DeploymentSolution dep = SolveDeployment(mask, fine, config);
  result.subproblems.push_back(
      {"p3_2", dep.status, dep.nodes,
       dep.deployment ? double(dep.deployment->Count()) : 0.0, 0});
  result.iterations = 1;
  if (!dep.deployment) {
    result.status = dep.status == SolveStatus::kBudgetExhausted
                        ? PlanStatus::kBudgetExhausted
                        : PlanStatus::kInfeasible;
    result.message = "no deployment covers the shortest path";
    return result;
  }
  result.deployment = *dep.deployment;
  result.final_cost = SolutionCost(mask, result.deployment, config.weights);
  result.cost_history = {result.final_cost};
  if (!VerifySolution(mask, result.deployment, fine, config.radio).ok) {
    result.status = PlanStatus::kInfeasible;
    result.message = "deployment failed verification on the shortest path";
    return result;
  }
  result.status = PlanStatus::kFeasible;
  return result;
}

PlanResult BaselineRandom(const StatsGrid& fine, const PlanConfig& config,
                          uint64_t seed) {
  config.Validate();
  PlanResult result;
  result.method = "random";
  const int sites = fine.sites();
  const int n = fine.side();
  result.deployment = Deployment(sites);
  bool budget_hit = false;
  int64_t trials = 0;
  for (int size = 1; size <= sites; ++size) {
    std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(size)));
    std::set<std::vector<uint8_t>> tried;
    for (int t = 0; t < config.baseline_trials; ++t) {
      // Partial Fisher-Yates draw of `size` distinct sites.
      std::vector<int> order(static_cast<size_t>(sites));
      std::iota(order.begin(), order.end(), 0);
      Deployment deployment(sites);
      for (int s = 0; s < size; ++s) {
        const uint64_t span = static_cast<uint64_t>(sites - s);
        const int pick = s + static_cast<int>(rng() % span);
        std::swap(order[s], order[pick]);
        deployment.Set(order[s], true);
      }
      if (!tried.insert(deployment.flags()).second) continue;
      ++trials;
      const FeasibilityGrid feasibility =
          FeasibleCellMask(deployment, fine, config.radio);
      if (!feasibility.ok({1, 1}) || !feasibility.ok({n, n})) continue;
      const PathSolution path =
          ShortestCorridor(n, AllowedFrom(feasibility), config);
      if (path.status == SolveStatus::kBudgetExhausted) budget_hit = true;
      if (!path.mask) continue;
      result.fine_mask = path.mask;
      result.deployment = deployment;
      result.final_cost =
          SolutionCost(*path.mask, deployment, config.weights);
      result.cost_history = {result.final_cost};
      result.iterations = static_cast<int>(trials);
      result.subproblems.push_back({"corridor", path.status, path.nodes,
                                    double(path.mask->ActiveCount()),
                                    path.cut_rounds});
      if (!VerifySolution(*path.mask, deployment, fine, config.radio).ok) {
        result.status = PlanStatus::kInfeasible;
        result.message = "random plan failed verification";
        return result;
      }
      result.status = PlanStatus::kFeasible;
      return result;
    }
  }
  result.iterations = static_cast<int>(trials);
  result.status =
      budget_hit ? PlanStatus::kBudgetExhausted : PlanStatus::kInfeasible;
  result.message = "no sampled deployment admits a corridor";
  return result;
}

}  // namespace corridor
