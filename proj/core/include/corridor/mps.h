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

// Fixed-format MPS export and import for binary models, and a hook that hands
// a model to an external solver executable.
//
// Columns are written as C0000001.., rows as R0000001.. and the objective row
// as COST. Original names travel in "* VAR" and "* ROW" comment lines, which
// the importer uses to restore them.

#ifndef CORRIDOR_MPS_H_
#define CORRIDOR_MPS_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "corridor/ilp.h"

namespace corridor {

class MpsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ExportMps(const IlpModel& model);
void WriteMpsFile(const IlpModel& model, const std::filesystem::path& path);

// Accepts whitespace-separated fields. Only binary columns (BV bounds, or
// integer markers with UP 1) are supported. Throws MpsError.
IlpModel ImportMps(const std::string& text);

// Writes `workdir/model.mps`, runs `executable model.mps solution.txt` in
// `workdir` and parses the solution file. The file holds one "name value"
// pair per line; names may be MPS column names or original names, and
// unlisted variables are zero. An optional first line "status infeasible"
// reports infeasibility. A returned assignment is checked against the model
// and rejected with MpsError if it violates any row.
SolveResult SolveExternal(const IlpModel& model,
                          const std::filesystem::path& executable,
                          const std::filesystem::path& workdir);

}  // namespace corridor

#endif  // CORRIDOR_MPS_H_
