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

#include "corridor/planner.h"

#include <cstdio>
#include <deque>
#include <future>
#include <stdexcept>
#include <utility>

#include "corridor/mps.h"
#include "planner_internal.h"

namespace corridor {
namespace internal {

SolveResult RunSolver(const IlpModel& model, int64_t node_budget,
                      const PlanConfig& config) {
  SolveResult result;
  if (config.solver) {
    result = config.solver(model, node_budget);
  } else {
    SolveOptions options;
    options.max_nodes = node_budget;
    result = Solve(model, options);
  }
  if (result.has_solution() &&
      !IsFeasibleAssignment(model, result.assignment)) {
    throw std::logic_error("solver returned an infeasible assignment for " +
                           model.name());
  }
  return result;
}

void DumpModel(const PlanConfig& config, const std::string& name,
               const IlpModel& model) {
  if (config.mps_dump_dir.empty()) return;
  WriteMpsFile(model, config.mps_dump_dir / (name + ".mps"));
}

bool AddConnectivityCuts(IlpModel& model, const CorridorMask& mask,
                         const std::function<Var(const CellIndex&)>& var,
                         int round) {
  const int side = mask.side();
  std::vector<int> component(static_cast<size_t>(side) * side, -1);
  auto slot = [side](const CellIndex& c) {
    return static_cast<size_t>((c.i - 1) * side + (c.j - 1));
  };
  bool added = false;
  int label = 0;
  for (const CellIndex& seed : mask.ActiveCells()) {
    if (component[slot(seed)] >= 0) continue;
    std::vector<CellIndex> cells;
    std::deque<CellIndex> frontier{seed};
    component[slot(seed)] = label;
    bool cycle = true;
    while (!frontier.empty()) {
      const CellIndex c = frontier.front();
      frontier.pop_front();
      cells.push_back(c);
      if (mask.ActiveNeighborCount(c) != 2) cycle = false;
      for (const CellIndex& n : Neighbors4(c, side)) {
        if (mask.at(n) && component[slot(n)] < 0) {
          component[slot(n)] = label;
          frontier.push_back(n);
        }
      }
    }
    const bool has_dep = component[slot(mask.departure())] == label;
    const bool has_dest = component[slot(mask.destination())] == label;
    const std::string tag =
        "cut_" + std::to_string(round) + "_" + std::to_string(label);
    ++label;
    if (has_dep && has_dest) {
      if (!cycle || cells.size() == 1) continue;
      LinearExpr sum;
      for (const CellIndex& c : cells) sum += var(c);
      model.AddConstraint(sum, Sense::kLessEqual,
                          static_cast<double>(cells.size()) - 1.0, tag);
      added = true;
      continue;
    }
    // Outer boundary of the component.
    std::vector<uint8_t> seen(component.size(), 0);
    for (const CellIndex& c : cells) seen[slot(c)] = 1;
    LinearExpr boundary;
    for (const CellIndex& c : cells) {
      for (const CellIndex& n : Neighbors4(c, side)) {
        if (!seen[slot(n)]) {
          seen[slot(n)] = 1;
          boundary += var(n);
        }
      }
    }
    if (has_dep || has_dest) {
      model.AddConstraint(boundary, Sense::kGreaterEqual, 1.0, tag);
    } else {
      for (size_t n = 0; n < cells.size(); ++n) {
        model.AddConstraint(boundary - var(cells[n]), Sense::kGreaterEqual,
                            0.0, tag + "_" + std::to_string(n));
      }
    }
    added = true;
  }
  return added;
}

void AddLengthBound(IlpModel& model, int side, const CellIndex& start,
                    const CellIndex& dest,
                    const std::function<Var(const CellIndex&)>& var) {
  LinearExpr sum;
  for (int i = 1; i <= side; ++i) {
    for (int j = 1; j <= side; ++j) sum += var({i, j});
  }
  const int manhattan = std::abs(start.i - dest.i) + std::abs(start.j - dest.j);
  model.AddConstraint(sum, Sense::kGreaterEqual, manhattan + 1.0, "len_lb");
}

}  // namespace internal

namespace {

constexpr double kMaxBigMRatio = 1e4;

std::string CellTag(const CellIndex& c) {
  return std::to_string(c.i) + "_" + std::to_string(c.j);
}

double ServingGain(const CellChannelStats& s, SinrExtrema extrema) {
  return extrema == SinrExtrema::kTrimmed ? s.h_min_trim : s.h_min;
}

double InterferenceGain(const CellChannelStats& s, SinrExtrema extrema) {
  return extrema == SinrExtrema::kTrimmed ? s.h_max_trim : s.h_max;
}

}  // namespace

void PlanConfig::Validate() const {
  weights.Validate();
  radio.Validate();
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw PlanError("plan.trim_fraction must be in [0, 0.5)");
  }
  if (!(fine_trim_fraction >= 0.0 && fine_trim_fraction < 0.5)) {
    throw PlanError("plan.fine_trim_fraction must be in [0, 0.5)");
  }
  if (max_ao_iterations < 1) {
    throw PlanError("plan.max_ao_iterations must be >= 1");
  }
  if (coarse_node_budget <= 0 || block_node_budget <= 0 ||
      deployment_node_budget <= 0 || path_node_budget <= 0) {
    throw PlanError("plan node budgets must be > 0");
  }
  if (max_cut_rounds < 1) throw PlanError("plan.max_cut_rounds must be >= 1");
  if (baseline_trials < 1) {
    throw PlanError("plan.baseline_trials must be >= 1");
  }
}

const char* PlanStatusName(PlanStatus status) {
  switch (status) {
    case PlanStatus::kFeasible:
      return "feasible";
    case PlanStatus::kInfeasible:
      return "infeasible";
    case PlanStatus::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

double ResolveBigM(const StatsGrid& stats, const RadioParams& radio,
                   std::span<const CellIndex> cells) {
  const double safe = SafeBigM(stats, radio, cells);
  if (!radio.big_m) return safe;
  if (*radio.big_m < safe * (1.0 - kThresholdRelTol)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "radio.big_m = %.6g is below the safe bound %.6g for this "
                  "scene; raise it or set it to \"auto\"",
                  *radio.big_m, safe);
    throw PlanError(buf);
  }
  // Rows are scaled by their largest coefficient, so an oversized constant
  // would push the SINR terms below the row tolerance.
  if (*radio.big_m > kMaxBigMRatio * safe) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "radio.big_m = %.6g exceeds %.0f times the safe bound %.6g; "
                  "SINR rows would lose precision",
                  *radio.big_m, kMaxBigMRatio, safe);
    throw PlanError(buf);
  }
  return *radio.big_m;
}

P2Model BuildP2(const StatsGrid& coarse, const PlanConfig& config) {
  config.weights.Validate();
  const int m = coarse.side();
  const int sites = coarse.sites();
  if (m < 2) throw PlanError("coarse grid must be at least 2 x 2");
  if (sites < 1) throw PlanError("at least one candidate site is required");
  const RadioParams& radio = config.radio;
  const SinrExtrema extrema = coarse.extrema();

  P2Model p2;
  p2.side = m;
  p2.sites = sites;
  p2.big_m = ResolveBigM(coarse, radio);
  IlpModel& model = p2.model;

  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      p2.b.push_back(model.AddBinary("B_" + CellTag({a, b})));
    }
  }
  for (int k = 0; k < sites; ++k) {
    p2.delta.push_back(model.AddBinary("delta_" + std::to_string(k + 1)));
  }
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      for (int k = 0; k < sites; ++k) {
        p2.z.push_back(model.AddBinary("z_" + std::to_string(k + 1) + "_" +
                                       CellTag({a, b})));
      }
    }
  }
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      for (int k = 0; k < sites; ++k) {
        p2.w.push_back(model.AddBinary("w_" + std::to_string(k + 1) + "_" +
                                       CellTag({a, b})));
      }
    }
  }

  LinearExpr objective;
  for (Var v : p2.b) objective.Add(v, config.weights.alpha1);
  for (Var v : p2.delta) objective.Add(v, config.weights.alpha2);
  model.SetObjective(objective);

  const CellIndex first{1, 1};
  const CellIndex last{m, m};
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      const CellIndex c{a, b};
      LinearExpr around;
      for (const CellIndex& n : Neighbors4(c, m)) around += p2.B(n);
      const double need = (c == first || c == last) ? 1.0 : 2.0;
      model.AddConstraint(around - need * LinearExpr(p2.B(c)),
                          Sense::kGreaterEqual, 0.0, "deg_lo_" + CellTag(c));
      model.AddConstraint(around, Sense::kLessEqual, 2.0,
                          "deg_hi_" + CellTag(c));
    }
  }
  for (int a = 1; a <= m; ++a) {
    LinearExpr row;
    LinearExpr col;
    for (int b = 1; b <= m; ++b) {
      row += p2.B({a, b});
      col += p2.B({b, a});
    }
    model.AddConstraint(row, Sense::kGreaterEqual, 1.0,
                        "row_" + std::to_string(a));
    model.AddConstraint(col, Sense::kGreaterEqual, 1.0,
                        "col_" + std::to_string(a));
  }
  model.AddConstraint(p2.B(first), Sense::kEqual, 1.0, "anchor_first");
  model.AddConstraint(p2.B(last), Sense::kEqual, 1.0, "anchor_last");

  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      const CellIndex c{a, b};
      const std::string tag = CellTag(c);
      const auto cell = coarse.cell(c);
      LinearExpr sensing;
      LinearExpr los;
      LinearExpr any;
      for (int k = 0; k < sites; ++k) {
        sensing.Add(p2.delta[k], cell[k].echo_min);
        los.Add(p2.delta[k], cell[k].los_indicator);
        any += p2.Z(k, c);
      }
      model.AddConstraint(sensing - radio.sense_threshold * LinearExpr(p2.B(c)),
                          Sense::kGreaterEqual, 0.0, "sense_" + tag);
      model.AddConstraint(los - double(kMinLosSites) * LinearExpr(p2.B(c)),
                          Sense::kGreaterEqual, 0.0, "los_" + tag);
      model.AddConstraint(any - p2.B(c), Sense::kGreaterEqual, 0.0,
                          "any_" + tag);
      for (int k = 0; k < sites; ++k) {
        const std::string kt = std::to_string(k + 1) + "_" + tag;
        const Var z = p2.Z(k, c);
        const Var w = p2.W(k, c);
        model.AddConstraint(z - p2.delta[k], Sense::kLessEqual, 0.0,
                            "zsel_" + kt);
        model.AddConstraint(w - p2.delta[k], Sense::kLessEqual, 0.0,
                            "mc1_" + kt);
        model.AddConstraint(w - p2.B(c), Sense::kLessEqual, 0.0, "mc2_" + kt);
        model.AddConstraint(w - p2.delta[k] - p2.B(c), Sense::kGreaterEqual,
                            -1.0, "mc3_" + kt);
        LinearExpr link;
        link.Add(z, p2.big_m);
        for (int other = 0; other < sites; ++other) {
          if (other == k) continue;
          link.Add(p2.W(other, c), radio.sinr_threshold * radio.tx_power *
                                       InterferenceGain(cell[other], extrema));
        }
        link.Add(p2.B(c), radio.sinr_threshold * radio.noise);
        link.Add(p2.delta[k], -radio.tx_power * radio.tx_gain *
                                  ServingGain(cell[k], extrema));
        model.AddConstraint(link, Sense::kLessEqual, p2.big_m, "sinr_" + kt);
      }
    }
  }
  return p2;
}

CoarseSolution SolveCoarse(const StatsGrid& coarse, const PlanConfig& config) {
  P2Model p2 = BuildP2(coarse, config);
  internal::DumpModel(config, "p2", p2.model);
  const int m = p2.side;
  auto var = [&p2](const CellIndex& c) { return p2.B(c); };
  internal::AddLengthBound(p2.model, m, {1, 1}, {m, m}, var);

  CoarseSolution out;
  for (int round = 0; round < config.max_cut_rounds; ++round) {
    const SolveResult res =
        internal::RunSolver(p2.model, config.coarse_node_budget, config);
    out.nodes += res.nodes;
    out.cut_rounds = round;
    out.status = res.status;
    if (!res.has_solution()) return out;
    CorridorMask mask(m, {1, 1}, {m, m});
    for (int a = 1; a <= m; ++a) {
      for (int b = 1; b <= m; ++b) mask.Set({a, b}, res.value(p2.B({a, b})));
    }
    if (internal::AddConnectivityCuts(p2.model, mask, var, round)) continue;
    if (!ValidateCorridor(mask).ok) {
      throw std::logic_error("coarse corridor violates the corridor rules");
    }
    Deployment deployment(p2.sites);
    for (int k = 0; k < p2.sites; ++k) {
      deployment.Set(k, res.value(p2.delta[k]));
    }
    out.mask = std::move(mask);
    out.deployment = std::move(deployment);
    out.objective = res.objective;
    return out;
  }
  out.status = SolveStatus::kBudgetExhausted;
  return out;
}

int FeasibilityGrid::FeasibleCount() const {
  int count = 0;
  for (const CellFeasibility& f : cells_) count += f.all();
  return count;
}

FeasibilityGrid FeasibleCellMask(const Deployment& deployment,
                                 const StatsGrid& fine,
                                 const RadioParams& radio) {
  if (deployment.size() != fine.sites()) {
    throw std::invalid_argument("deployment size does not match site count");
  }
  FeasibilityGrid grid(fine.side());
  for (int i = 1; i <= fine.side(); ++i) {
    for (int j = 1; j <= fine.side(); ++j) {
      grid.at({i, j}) =
          CellFeasible(fine.cell({i, j}), fine.extrema(), deployment, radio);
    }
  }
  return grid;
}

namespace {

bool DeploymentCovers(const CorridorMask& mask, const Deployment& deployment,
                      const StatsGrid& fine, const RadioParams& radio) {
  for (const CellIndex& c : mask.ActiveCells()) {
    if (!CellFeasible(fine.cell(c), fine.extrema(), deployment, radio).all()) {
      return false;
    }
  }
  return true;
}

PlanStatus FromSolve(SolveStatus status) {
  return status == SolveStatus::kBudgetExhausted ? PlanStatus::kBudgetExhausted
                                                 : PlanStatus::kInfeasible;
}

}  // namespace

PlanResult AlternateOptimize(const CoarseSolution& coarse,
                             const StatsGrid& fine, int factor,
                             const PlanConfig& config) {
  PlanResult result;
  result.method = "joint";
  result.coarse_mask = coarse.mask;
  result.coarse_deployment = coarse.deployment;
  if (!coarse.mask || !coarse.deployment) {
    result.status = FromSolve(coarse.status);
    result.message = "coarse problem has no solution";
    return result;
  }
  const int n = fine.side();
  if (factor < 1 || coarse.mask->side() * factor != n) {
    throw PlanError("fine grid is not the coarse grid refined by the factor");
  }
  if (!config.mps_dump_dir.empty()) {
    std::filesystem::create_directories(config.mps_dump_dir);
  }
  const std::vector<CellIndex> path = ExtractPath(*coarse.mask);
  Deployment delta = *coarse.deployment;
  std::vector<std::optional<CorridorMask>> blocks(path.size());
  std::optional<CorridorMask> fine_mask;

  for (int t = 1; t <= config.max_ao_iterations; ++t) {
    const FeasibilityGrid feasibility =
        FeasibleCellMask(delta, fine, config.radio);

    auto solve_block = [&, t](size_t p) {
      PathModel model = BuildP31(path, p, feasibility, factor);
      internal::DumpModel(config,
                          "p3_1_iter" + std::to_string(t) + "_block_" +
                              CellTag(path[p]),
                          model.model);
      return SolvePathModel(std::move(model), config.block_node_budget,
                            config);
    };
    std::vector<PathSolution> solved(path.size());
    if (config.solver) {
      for (size_t p = 0; p < path.size(); ++p) solved[p] = solve_block(p);
    } else {
      std::vector<std::future<PathSolution>> pending;
      for (size_t p = 0; p < path.size(); ++p) {
        pending.push_back(std::async(std::launch::async, solve_block, p));
      }
      for (size_t p = 0; p < path.size(); ++p) solved[p] = pending[p].get();
    }

    std::vector<std::optional<CorridorMask>> next = blocks;
    for (size_t p = 0; p < path.size(); ++p) {
      const PathSolution& s = solved[p];
      result.subproblems.push_back(
          {"p3_1_iter" + std::to_string(t) + "_block_" + CellTag(path[p]),
           s.status, s.nodes, s.mask ? double(s.mask->ActiveCount()) : 0.0,
           s.cut_rounds});
      const bool improves =
          s.mask && (!blocks[p] ||
                     s.mask->ActiveCount() <= blocks[p]->ActiveCount());
      if (improves) {
        next[p] = s.mask;
      } else if (!blocks[p]) {
        result.status = FromSolve(s.status);
        result.message = "block " + ToString(path[p]) +
                         " has no feasible sub-path in the first iteration";
        result.deployment = delta;
        result.iterations = t;
        return result;
      }
    }

    CorridorMask assembled(n, {1, 1}, {n, n});
    for (size_t p = 0; p < path.size(); ++p) {
      for (const CellIndex& local : next[p]->ActiveCells()) {
        assembled.Set(BlockToGlobal(path[p], local, factor), true);
      }
    }
    if (!ValidateCorridor(assembled).ok) {
      if (!fine_mask) {
        result.status = PlanStatus::kInfeasible;
        result.message = "assembled fine corridor violates the corridor rules";
        result.deployment = delta;
        result.iterations = t;
        return result;
      }
      assembled = *fine_mask;
    } else {
      blocks = std::move(next);
    }

    const double path_cost = SolutionCost(assembled, delta, config.weights);
    result.cost_history.push_back(path_cost);

    const std::string dump = "p3_2_iter" + std::to_string(t);
    const DeploymentSolution dep =
        SolveDeployment(assembled, fine, config, dump);
    result.subproblems.push_back(
        {dump, dep.status, dep.nodes,
         dep.deployment ? double(dep.deployment->Count()) : 0.0, 0});
    Deployment updated = delta;
    if (dep.deployment &&
        DeploymentCovers(assembled, *dep.deployment, fine, config.radio) &&
        SolutionCost(assembled, *dep.deployment, config.weights) <=
            path_cost) {
      updated = *dep.deployment;
    }
    result.cost_history.push_back(
        SolutionCost(assembled, updated, config.weights));

    // The next block solves would see the same deployment and reproduce
    // this corridor, so an unchanged deployment is a fixed point.
    const bool fixed_point = updated == delta;
    fine_mask = std::move(assembled);
    delta = std::move(updated);
    result.iterations = t;
    if (fixed_point) {
      result.converged = true;
      break;
    }
  }

  result.fine_mask = fine_mask;
  result.deployment = delta;
  result.final_cost = result.cost_history.back();
  const SolutionReport report =
      VerifySolution(*fine_mask, delta, fine, config.radio);
  if (!report.ok) {
    result.status = PlanStatus::kInfeasible;
    result.message = "final plan failed verification";
    return result;
  }
  result.status = PlanStatus::kFeasible;
  return result;
}

PlanResult PlanJoint(const StatsGrid& coarse, const StatsGrid& fine,
                     const PlanConfig& config) {
  config.Validate();
  if (coarse.side() < 2 || fine.side() % coarse.side() != 0) {
    throw PlanError("grid.n must be divisible by coarse.m");
  }
  const CoarseSolution solution = SolveCoarse(coarse, config);
  PlanResult result = AlternateOptimize(
      solution, fine, fine.side() / coarse.side(), config);
  result.subproblems.insert(
      result.subproblems.begin(),
      {"p2", solution.status, solution.nodes, solution.objective,
       solution.cut_rounds});
  return result;
}

}  // namespace corridor
