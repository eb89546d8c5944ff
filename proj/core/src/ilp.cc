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

#include "corridor/ilp.h"

#include <algorithm>
#include <cmath>

namespace corridor {

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const Term& t : other.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double scale) {
  for (Term& t : terms_) t.coef *= scale;
  constant_ *= scale;
  return *this;
}

LinearExpr operator+(LinearExpr lhs, const LinearExpr& rhs) {
  lhs += rhs;
  return lhs;
}

LinearExpr operator-(LinearExpr lhs, const LinearExpr& rhs) {
  lhs -= rhs;
  return lhs;
}

LinearExpr operator*(double scale, LinearExpr expr) {
  expr *= scale;
  return expr;
}

LinearExpr operator*(LinearExpr expr, double scale) {
  expr *= scale;
  return expr;
}

Var IlpModel::AddBinary(const std::string& name) {
  if (name.empty()) throw IlpError("variable name must not be empty");
  const int index = num_vars();
  if (!var_index_.emplace(name, index).second) {
    throw IlpError("duplicate variable name \"" + name + "\"");
  }
  var_names_.push_back(name);
  objective_.push_back(0.0);
  return Var{index};
}

std::optional<Var> IlpModel::FindVar(const std::string& name) const {
  const auto it = var_index_.find(name);
  if (it == var_index_.end()) return std::nullopt;
  return Var{it->second};
}

std::vector<Term> IlpModel::Canonical(const LinearExpr& expr) const {
  std::vector<Term> terms = expr.terms();
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw IlpError("expression references an unknown variable");
    }
    if (!std::isfinite(t.coef)) {
      throw IlpError("non-finite coefficient on " + var_names_[t.var]);
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  return merged;
}

int IlpModel::AddConstraint(const LinearExpr& expr, Sense sense, double rhs,
                            std::string name) {
  if (!std::isfinite(rhs) || !std::isfinite(expr.constant())) {
    throw IlpError("non-finite right-hand side");
  }
  Constraint row;
  row.terms = Canonical(expr);
  row.sense = sense;
  row.rhs = rhs - expr.constant();
  row.name = name.empty() ? "c" + std::to_string(constraints_.size() + 1)
                          : std::move(name);
  constraints_.push_back(std::move(row));
  return num_constraints() - 1;
}

void IlpModel::SetObjective(const LinearExpr& expr) {
  std::fill(objective_.begin(), objective_.end(), 0.0);
  for (const Term& t : Canonical(expr)) objective_[t.var] = t.coef;
  objective_offset_ = expr.constant();
}

bool IsFeasibleAssignment(const IlpModel& model,
                          std::span<const uint8_t> assignment) {
  if (static_cast<int>(assignment.size()) != model.num_vars()) return false;
  for (uint8_t v : assignment) {
    if (v > 1) return false;
  }
  for (const Constraint& row : model.constraints()) {
    double activity = 0.0;
    double scale = 0.0;
    for (const Term& t : row.terms) {
      activity += t.coef * assignment[t.var];
      scale = std::max(scale, std::abs(t.coef));
    }
    const double tol = kRowTolerance * (scale > 0.0 ? scale : 1.0);
    switch (row.sense) {
      case Sense::kLessEqual:
        if (activity > row.rhs + tol) return false;
        break;
      case Sense::kGreaterEqual:
        if (activity < row.rhs - tol) return false;
        break;
      case Sense::kEqual:
        if (std::abs(activity - row.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

double EvaluateObjective(const IlpModel& model,
                         std::span<const uint8_t> assignment) {
  double value = model.objective_offset();
  for (int v = 0; v < model.num_vars(); ++v) {
    value += model.objective()[v] * assignment[v];
  }
  return value;
}

const char* StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

}  // namespace corridor
