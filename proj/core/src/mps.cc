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

#include "corridor/mps.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace corridor {
namespace {

std::string ColumnName(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "C%07d", index + 1);
  return buf;
}

std::string RowName(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "R%07d", index + 1);
  return buf;
}

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Field layout: 2-3 type, 5-12 name, 15-22 name, 25-36 value.
void Entry(std::ostringstream& out, const std::string& a, const std::string& b,
           double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %12s\n", a.c_str(),
                b.c_str(), Number(v).c_str());
  out << buf;
}

double ParseNumber(const std::string& token, int line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE ||
      !std::isfinite(v)) {
    throw MpsError("line " + std::to_string(line_no) + ": bad number \"" +
                   token + "\"");
  }
  return v;
}

std::vector<std::string> Split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

}  // namespace

std::string ExportMps(const IlpModel& model) {
  const auto& rows = model.constraints();
  std::vector<std::vector<std::pair<int, double>>> columns(
      static_cast<size_t>(model.num_vars()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (const Term& t : rows[r].terms) {
      columns[t.var].emplace_back(static_cast<int>(r), t.coef);
    }
  }

  std::ostringstream out;
  out << "NAME          " << model.name() << "\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    out << "* VAR " << ColumnName(v) << " " << model.var_name(v) << "\n";
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    out << "* ROW " << RowName(static_cast<int>(r)) << " " << rows[r].name
        << "\n";
  }
  out << "ROWS\n N  COST\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    const char* type = rows[r].sense == Sense::kLessEqual      ? "L"
                       : rows[r].sense == Sense::kGreaterEqual ? "G"
                                                               : "E";
    out << " " << type << "  " << RowName(static_cast<int>(r)) << "\n";
  }
  out << "COLUMNS\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    // The objective entry is always written so that every column appears.
    Entry(out, ColumnName(v), "COST", model.objective()[v]);
    for (const auto& [r, coef] : columns[v]) {
      Entry(out, ColumnName(v), RowName(r), coef);
    }
  }
  out << "RHS\n";
  if (model.objective_offset() != 0.0) {
    Entry(out, "RHS", "COST", -model.objective_offset());
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].rhs != 0.0) {
      Entry(out, "RHS", RowName(static_cast<int>(r)), rows[r].rhs);
    }
  }
  out << "BOUNDS\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    out << " BV BND       " << ColumnName(v) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

void WriteMpsFile(const IlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MpsError("cannot open " + path.string());
  out << ExportMps(model);
  if (!out) throw MpsError("failed writing " + path.string());
}

IlpModel ImportMps(const std::string& text) {
  enum class Section { kNone, kRows, kColumns, kRhs, kBounds, kRanges, kEnd };
  std::unordered_map<std::string, std::string> var_alias;
  std::unordered_map<std::string, std::string> row_alias;
  std::string name = "model";
  std::string objective_row;
  struct RowSpec {
    std::string name;
    Sense sense;
    LinearExpr expr;
    double rhs = 0.0;
  };
  std::vector<RowSpec> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<std::string> columns;
  std::unordered_map<std::string, int> column_index;
  std::vector<double> objective;
  std::vector<uint8_t> binary;
  double offset = 0.0;

  auto column = [&](const std::string& col) {
    auto [it, inserted] =
        column_index.emplace(col, static_cast<int>(columns.size()));
    if (inserted) {
      columns.push_back(col);
      objective.push_back(0.0);
      binary.push_back(0);
    }
    return it->second;
  };

  Section section = Section::kNone;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool integer_marker = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = Split(line);
    if (f.empty()) continue;
    if (line[0] == '*') {
      if (f.size() >= 4 && f[1] == "VAR") var_alias[f[2]] = f[3];
      if (f.size() >= 4 && f[1] == "ROW") row_alias[f[2]] = f[3];
      continue;
    }
    if (line[0] != ' ' && line[0] != '\t') {
      if (f[0] == "NAME") {
        if (f.size() >= 2) name = f[1];
        section = Section::kNone;
      } else if (f[0] == "ROWS") {
        section = Section::kRows;
      } else if (f[0] == "COLUMNS") {
        section = Section::kColumns;
      } else if (f[0] == "RHS") {
        section = Section::kRhs;
      } else if (f[0] == "BOUNDS") {
        section = Section::kBounds;
      } else if (f[0] == "RANGES") {
        section = Section::kRanges;
      } else if (f[0] == "ENDATA") {
        section = Section::kEnd;
        break;
      } else {
        throw MpsError("line " + std::to_string(line_no) +
                       ": unknown section \"" + f[0] + "\"");
      }
      continue;
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    switch (section) {
      case Section::kRows: {
        if (f.size() != 2) throw MpsError(where + "expected type and name");
        if (f[0] == "N") {
          if (objective_row.empty()) objective_row = f[1];
          continue;
        }
        Sense sense;
        if (f[0] == "L") {
          sense = Sense::kLessEqual;
        } else if (f[0] == "G") {
          sense = Sense::kGreaterEqual;
        } else if (f[0] == "E") {
          sense = Sense::kEqual;
        } else {
          throw MpsError(where + "unknown row type \"" + f[0] + "\"");
        }
        if (!row_index.emplace(f[1], static_cast<int>(rows.size())).second) {
          throw MpsError(where + "duplicate row \"" + f[1] + "\"");
        }
        rows.push_back({f[1], sense, {}, 0.0});
        break;
      }
      case Section::kColumns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          integer_marker = f[2] == "'INTORG'";
          continue;
        }
        if (f.size() != 3 && f.size() != 5) {
          throw MpsError(where + "expected column, row, value");
        }
        const int c = column(f[0]);
        if (integer_marker) binary[c] = 2;
        for (size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = ParseNumber(f[p + 1], line_no);
          if (f[p] == objective_row) {
            objective[c] += v;
            continue;
          }
          const auto it = row_index.find(f[p]);
          if (it == row_index.end()) {
            throw MpsError(where + "unknown row \"" + f[p] + "\"");
          }
          rows[it->second].expr.Add(Var{c}, v);
        }
        break;
      }
      case Section::kRhs: {
        if (f.size() != 3 && f.size() != 5) {
          throw MpsError(where + "expected set, row, value");
        }
        for (size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = ParseNumber(f[p + 1], line_no);
          if (f[p] == objective_row) {
            offset = -v;
            continue;
          }
          const auto it = row_index.find(f[p]);
          if (it == row_index.end()) {
            throw MpsError(where + "unknown row \"" + f[p] + "\"");
          }
          rows[it->second].rhs = v;
        }
        break;
      }
      case Section::kBounds: {
        if (f.size() < 3) throw MpsError(where + "short bound line");
        const auto it = column_index.find(f[2]);
        if (it == column_index.end()) {
          throw MpsError(where + "bound on unknown column \"" + f[2] + "\"");
        }
        if (f[0] == "BV") {
          binary[it->second] = 1;
        } else if (f[0] == "UP" && f.size() == 4 &&
                   ParseNumber(f[3], line_no) == 1.0 &&
                   binary[it->second] == 2) {
          binary[it->second] = 1;
        } else if (f[0] == "LO" && f.size() == 4 &&
                   ParseNumber(f[3], line_no) == 0.0) {
          // Default lower bound.
        } else {
          throw MpsError(where + "only binary columns are supported");
        }
        break;
      }
      case Section::kRanges:
        throw MpsError(where + "RANGES are not supported");
      default:
        throw MpsError(where + "data outside a section");
    }
  }
  if (section != Section::kEnd) throw MpsError("missing ENDATA");

  IlpModel model(name);
  for (size_t c = 0; c < columns.size(); ++c) {
    if (binary[c] != 1) {
      throw MpsError("column \"" + columns[c] + "\" is not binary");
    }
    const auto alias = var_alias.find(columns[c]);
    model.AddBinary(alias == var_alias.end() ? columns[c] : alias->second);
  }
  for (const RowSpec& row : rows) {
    const auto alias = row_alias.find(row.name);
    model.AddConstraint(row.expr, row.sense, row.rhs,
                        alias == row_alias.end() ? row.name : alias->second);
  }
  LinearExpr obj(offset);
  for (size_t c = 0; c < columns.size(); ++c) {
    obj.Add(Var{static_cast<int>(c)}, objective[c]);
  }
  model.SetObjective(obj);
  return model;
}

SolveResult SolveExternal(const IlpModel& model,
                          const std::filesystem::path& executable,
                          const std::filesystem::path& workdir) {
  std::filesystem::create_directories(workdir);
  const std::filesystem::path mps = workdir / "model.mps";
  const std::filesystem::path solution = workdir / "solution.txt";
  std::filesystem::remove(solution);
  WriteMpsFile(model, mps);

  auto quote = [](const std::string& s) {
    std::string q = "'";
    for (char ch : s) {
      if (ch == '\'') {
        q += "'\\''";
      } else {
        q.push_back(ch);
      }
    }
    return q + "'";
  };
  const std::string command = quote(executable.string()) + " " +
                              quote(mps.string()) + " " +
                              quote(solution.string());
  const int rc = std::system(command.c_str());
  if (rc != 0) {
    throw MpsError("external solver exited with status " + std::to_string(rc));
  }
  std::ifstream in(solution);
  if (!in) throw MpsError("external solver wrote no solution file");

  SolveResult result;
  std::vector<uint8_t> assignment(static_cast<size_t>(model.num_vars()), 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> f = Split(line);
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 2) {
      throw MpsError("solution line " + std::to_string(line_no) +
                     ": expected \"name value\"");
    }
    if (f[0] == "status") {
      if (f[1] == "infeasible") {
        result.status = SolveStatus::kInfeasible;
        return result;
      }
      continue;
    }
    std::optional<Var> var = model.FindVar(f[0]);
    if (!var && f[0].size() == 8 && f[0][0] == 'C') {
      const int index = std::atoi(f[0].c_str() + 1) - 1;
      if (index >= 0 && index < model.num_vars()) var = Var{index};
    }
    if (!var) throw MpsError("solution names unknown variable " + f[0]);
    assignment[var->index] = std::lround(ParseNumber(f[1], line_no)) != 0;
  }
  if (!IsFeasibleAssignment(model, assignment)) {
    throw MpsError("external solution violates the model");
  }
  result.status = SolveStatus::kOptimal;
  result.objective = EvaluateObjective(model, assignment);
  result.assignment = std::move(assignment);
  return result;
}

}  // namespace corridor
