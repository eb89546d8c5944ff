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

// Stand-in for an external MILP solver: `fake_external_solver in.mps out.txt`.
// Small models are solved by plain enumeration, larger ones by the built-in
// solver. FAKE_SOLVER_MODE selects misbehaviour for tests:
//   names  write original variable names instead of column names
//   ones   write every variable as 1 without checking anything
//   crash  exit with status 3 and write nothing

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "corridor/ilp.h"
#include "corridor/mps.h"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fake_external_solver model.mps solution.txt\n";
    return 2;
  }
  const char* env = std::getenv("FAKE_SOLVER_MODE");
  const std::string mode = env ? env : "";
  if (mode == "crash") return 3;

  std::ifstream in(argv[1]);
  std::stringstream text;
  text << in.rdbuf();
  const corridor::IlpModel model = corridor::ImportMps(text.str());
  const int n = model.num_vars();

  std::ofstream out(argv[2]);
  auto column = [&](int v) {
    if (mode == "names") return model.var_name(v);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", v + 1);
    return std::string(buf);
  };
  if (mode == "ones") {
    for (int v = 0; v < n; ++v) out << column(v) << " 1\n";
    return 0;
  }

  std::vector<uint8_t> best;
  if (n <= 22) {
    double best_value = 0.0;
    std::vector<uint8_t> x(static_cast<size_t>(n));
    for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) {
      for (int v = 0; v < n; ++v) x[v] = (m >> v) & 1u;
      if (!corridor::IsFeasibleAssignment(model, x)) continue;
      const double value = corridor::EvaluateObjective(model, x);
      if (best.empty() || value < best_value) {
        best = x;
        best_value = value;
      }
    }
  } else {
    const corridor::SolveResult r = corridor::Solve(model);
    if (r.status == corridor::SolveStatus::kOptimal) best = r.assignment;
  }
  if (best.empty()) {
    out << "status infeasible\n";
    return 0;
  }
  out << "status optimal\n";
  for (int v = 0; v < n; ++v) {
    if (best[v]) out << column(v) << " 1\n";
  }
  return 0;
}
