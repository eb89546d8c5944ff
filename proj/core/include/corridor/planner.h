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

// Corridor and deployment planning.
//
// The joint planner solves a coarse M x M problem over the corridor and the
// deployment together, then refines on the N x N grid by alternating between
// per-block shortest sub-paths under a fixed deployment and a minimum
// deployment under a fixed corridor. Two baselines are provided: an A* path
// followed by a deployment solve, and random deployments of growing size
// followed by a shortest corridor search.
//
// Degree and coverage rows alone admit detached cycles, so every path model
// is solved with lazily added connectivity cuts until the active set is one
// simple path between the anchors.

#ifndef CORRIDOR_PLANNER_H_
#define CORRIDOR_PLANNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corridor/channel_map.h"
#include "corridor/grid.h"
#include "corridor/ilp.h"
#include "corridor/metrics.h"
#include "corridor/radio.h"

namespace corridor {

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlanConfig {
  CostWeights weights;
  RadioParams radio;
  double trim_fraction = 0.10;
  double fine_trim_fraction = 0.0;
  int max_ao_iterations = 10;
  int64_t coarse_node_budget = 20'000'000;
  int64_t block_node_budget = 2'000'000;
  int64_t deployment_node_budget = 5'000'000;
  int64_t path_node_budget = 5'000'000;
  int max_cut_rounds = 500;
  int baseline_trials = 50;  // random deployments per size
  // Empty: built-in branch and bound.
  SolverFn solver;
  // Non-empty: every assembled model is also written here as MPS.
  std::filesystem::path mps_dump_dir;

  void Validate() const;
};

enum class PlanStatus { kFeasible, kInfeasible, kBudgetExhausted };

const char* PlanStatusName(PlanStatus status);

struct SubproblemRecord {
  std::string name;
  SolveStatus status = SolveStatus::kInfeasible;
  int64_t nodes = 0;
  double objective = 0.0;
  int cut_rounds = 0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::kInfeasible;
  std::string method;
  std::string message;
  std::optional<CorridorMask> coarse_mask;
  std::optional<Deployment> coarse_deployment;
  std::optional<CorridorMask> fine_mask;
  Deployment deployment;
  // Joint method: cost after every half-step, starting with the first fine
  // assembly. Baselines: the single final cost.
  std::vector<double> cost_history;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<SubproblemRecord> subproblems;
};

// ---- Coarse joint problem ----

struct P2Model {
  IlpModel model{"p2"};
  int side = 0;
  int sites = 0;
  double big_m = 0.0;
  std::vector<Var> b;      // cell-major, (a-1)*M + (b-1)
  std::vector<Var> delta;  // per site
  std::vector<Var> z;      // (cell, k) at cell * K + k
  std::vector<Var> w;      // same layout as z

  Var B(const CellIndex& c) const { return b[Cell(c)]; }
  Var Z(int k, const CellIndex& c) const { return z[Cell(c) * sites + k]; }
  Var W(int k, const CellIndex& c) const { return w[Cell(c) * sites + k]; }

 private:
  size_t Cell(const CellIndex& c) const {
    return static_cast<size_t>((c.i - 1) * side + (c.j - 1));
  }
};

// Resolves the Big-M constant: the configured value, or the safe bound when
// unset. Throws PlanError when a configured value is below the safe bound, or
// so far above it that the SINR rows lose their precision.
double ResolveBigM(const StatsGrid& stats, const RadioParams& radio,
                   std::span<const CellIndex> cells = {});

// Throws PlanError if the weights are invalid or M < 2.
P2Model BuildP2(const StatsGrid& coarse, const PlanConfig& config);

struct CoarseSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<CorridorMask> mask;
  std::optional<Deployment> deployment;
  double objective = 0.0;
  int64_t nodes = 0;
  int cut_rounds = 0;
};

CoarseSolution SolveCoarse(const StatsGrid& coarse, const PlanConfig& config);

// ---- Fine layer ----

class FeasibilityGrid {
 public:
  FeasibilityGrid() = default;
  explicit FeasibilityGrid(int side)
      : side_(side), cells_(static_cast<size_t>(side) * side) {}

  int side() const { return side_; }
  const CellFeasibility& at(const CellIndex& c) const {
    return cells_[Offset(c)];
  }
  CellFeasibility& at(const CellIndex& c) { return cells_[Offset(c)]; }
  bool ok(const CellIndex& c) const { return at(c).all(); }
  int FeasibleCount() const;

 private:
  size_t Offset(const CellIndex& c) const {
    return static_cast<size_t>((c.i - 1) * side_ + (c.j - 1));
  }

  int side_ = 0;
  std::vector<CellFeasibility> cells_;
};

FeasibilityGrid FeasibleCellMask(const Deployment& deployment,
                                 const StatsGrid& fine,
                                 const RadioParams& radio);

// Shortest simple path model on a side x side grid: minimize active cells
// subject to degree rows over in-grid 4-neighbours, row and column coverage
// between the anchors, active anchors and A = 0 outside `allowed`
// (side*side flags, row-major from (1,1); empty means all allowed).
struct PathModel {
  IlpModel model{"path"};
  int side = 0;
  CellIndex start;
  CellIndex dest;
  std::vector<Var> cells;

  Var A(const CellIndex& c) const {
    return cells[static_cast<size_t>((c.i - 1) * side + (c.j - 1))];
  }
};

PathModel BuildPathModel(int side, const CellIndex& start,
                         const CellIndex& dest,
                         std::span<const uint8_t> allowed,
                         const std::string& name = "path");

// Allowed local cells of a refinement block: feasible under the current
// deployment, and not on an edge shared with the previous or next block
// unless the cell is one of the segment endpoints. Sealing those edges keeps
// the assembled corridor valid across block boundaries.
std::vector<uint8_t> BlockAllowedCells(std::span<const CellIndex> coarse_path,
                                       size_t position,
                                       const SegmentEndpoints& ends,
                                       const FeasibilityGrid& feasibility,
                                       int factor);

PathModel BuildP31(std::span<const CellIndex> coarse_path, size_t position,
                   const FeasibilityGrid& feasibility, int factor);

struct PathSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<CorridorMask> mask;  // departure/destination set to anchors
  int64_t nodes = 0;
  int cut_rounds = 0;
};

// Solves with lazily added connectivity cuts. On budget exhaustion the
// incumbent is returned only if it is already a simple path.
PathSolution SolvePathModel(PathModel path, int64_t node_budget,
                            const PlanConfig& config);

struct P32Model {
  IlpModel model{"p3_2"};
  std::vector<Var> delta;
  double big_m = 0.0;
};

// Minimum deployment covering every active cell of `mask`. SINR selectors
// are created only for sites that could reach the threshold at the cell with
// no interference at all.
P32Model BuildP32(const CorridorMask& mask, const StatsGrid& fine,
                  const PlanConfig& config);

struct DeploymentSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Deployment> deployment;
  int64_t nodes = 0;
};

DeploymentSolution SolveDeployment(const CorridorMask& mask,
                                   const StatsGrid& fine,
                                   const PlanConfig& config,
                                   const std::string& dump_name = "p3_2");

PlanResult AlternateOptimize(const CoarseSolution& coarse,
                             const StatsGrid& fine, int factor,
                             const PlanConfig& config);

// SolveCoarse followed by AlternateOptimize.
PlanResult PlanJoint(const StatsGrid& coarse, const StatsGrid& fine,
                     const PlanConfig& config);

// ---- Baselines ----

// A* over all cells with unit steps and the Manhattan heuristic. Ties break
// on the lowest (i, j), so the result is deterministic. Returns an empty
// vector when `allowed` disconnects the anchors.
std::vector<CellIndex> AstarPath(int side, const CellIndex& start,
                                 const CellIndex& dest,
                                 std::span<const uint8_t> allowed = {});

// Shortest valid corridor from (1,1) to (side,side) through allowed cells.
// A breadth-first path is tried first and the path ILP is used only when the
// breadth-first path breaks the corridor rules.
PathSolution ShortestCorridor(int side, std::span<const uint8_t> allowed,
                              const PlanConfig& config);

PlanResult BaselineAstar(const StatsGrid& fine, const PlanConfig& config);

// Sizes 1..K, `config.baseline_trials` uniform subsets per size. Subsets of a
// given size are identical for every threshold setting under one seed.
PlanResult BaselineRandom(const StatsGrid& fine, const PlanConfig& config,
                          uint64_t seed);

}  // namespace corridor

#endif  // CORRIDOR_PLANNER_H_
