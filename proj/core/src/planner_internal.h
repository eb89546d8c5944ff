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

#ifndef CORRIDOR_SRC_PLANNER_INTERNAL_H_
#define CORRIDOR_SRC_PLANNER_INTERNAL_H_

#include <functional>
#include <string>

#include "corridor/grid.h"
#include "corridor/ilp.h"
#include "corridor/planner.h"

namespace corridor::internal {

// Runs the configured solver and re-checks any returned assignment.
SolveResult RunSolver(const IlpModel& model, int64_t node_budget,
                      const PlanConfig& config);

// Writes `name`.mps into the dump directory when one is configured.
void DumpModel(const PlanConfig& config, const std::string& name,
               const IlpModel& model);

// Adds cuts against every component of `mask` that is not a simple path
// joining the anchors. Returns false when the mask needs none.
bool AddConnectivityCuts(IlpModel& model, const CorridorMask& mask,
                         const std::function<Var(const CellIndex&)>& var,
                         int round);

// Forbids corridors shorter than the Manhattan distance between the anchors.
void AddLengthBound(IlpModel& model, int side, const CellIndex& start,
                    const CellIndex& dest,
                    const std::function<Var(const CellIndex&)>& var);

}  // namespace corridor::internal

#endif  // CORRIDOR_SRC_PLANNER_INTERNAL_H_
