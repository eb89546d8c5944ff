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

// Pure 0-1 linear programs and an exact depth-first branch-and-bound solver
// for desk-scale instances.
//
// The solver does not use an LP relaxation. Each node runs activity-bound
// propagation over every constraint and is pruned when a lower bound on the
// objective cannot beat the incumbent. The bound is the fixed cost, plus all
// negative costs of free variables, plus a greedy sum over unsatisfied
// covering rows with pairwise disjoint free supports.

#ifndef CORRIDOR_ILP_H_
#define CORRIDOR_ILP_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace corridor {

class IlpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Var {
  int index = -1;
  bool operator==(const Var&) const = default;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(Var v) { terms_.push_back({v.index, 1.0}); }  // NOLINT
  LinearExpr(double constant) : constant_(constant) {}     // NOLINT

  LinearExpr& Add(Var v, double coef) {
    terms_.push_back({v.index, coef});
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(double scale);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr lhs, const LinearExpr& rhs);
LinearExpr operator-(LinearExpr lhs, const LinearExpr& rhs);
LinearExpr operator*(double scale, LinearExpr expr);
LinearExpr operator*(LinearExpr expr, double scale);

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // merged, sorted by variable, no zeros
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Minimization model over binary variables.
class IlpModel {
 public:
  explicit IlpModel(std::string name = "model") : name_(std::move(name)) {}

  // Throws IlpError on a duplicate or empty name.
  Var AddBinary(const std::string& name);
  // The expression constant moves to the right-hand side. Throws IlpError on
  // an unknown variable or a non-finite coefficient.
  int AddConstraint(const LinearExpr& expr, Sense sense, double rhs,
                    std::string name = "");
  void SetObjective(const LinearExpr& expr);

  const std::string& name() const { return name_; }
  int num_vars() const { return static_cast<int>(var_names_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::string& var_name(int index) const { return var_names_.at(index); }
  std::optional<Var> FindVar(const std::string& name) const;
  const std::vector<Constraint>& constraints() const { return constraints_; }
  // Dense objective coefficients, one per variable.
  const std::vector<double>& objective() const { return objective_; }
  double objective_offset() const { return objective_offset_; }

 private:
  std::vector<Term> Canonical(const LinearExpr& expr) const;

  std::string name_;
  std::vector<std::string> var_names_;
  std::unordered_map<std::string, int> var_index_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  double objective_offset_ = 0.0;
};

// Relative row tolerance: a row is satisfied when its violation is at most
// kRowTolerance times the largest absolute coefficient (or 1 for empty rows).
inline constexpr double kRowTolerance = 1e-9;

// Independent constraint check of a full 0/1 assignment.
bool IsFeasibleAssignment(const IlpModel& model,
                          std::span<const uint8_t> assignment);
double EvaluateObjective(const IlpModel& model,
                         std::span<const uint8_t> assignment);

enum class SolveStatus { kOptimal, kInfeasible, kBudgetExhausted };

const char* StatusName(SolveStatus status);

struct SolveOptions {
  int64_t max_nodes = 20'000'000;
  // Off: no propagation and no bounding, every leaf is checked. Only useful
  // as a reference on tiny models.
  bool pruning = true;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<uint8_t> assignment;
  // Infinite when no solution is known.
  double objective = std::numeric_limits<double>::infinity();
  int64_t nodes = 0;

  bool has_solution() const {
    return objective < std::numeric_limits<double>::infinity();
  }
  bool value(Var v) const { return assignment.at(v.index) != 0; }
};

SolveResult Solve(const IlpModel& model, const SolveOptions& options = {});

// Pluggable solver used by the planner. Arguments: model, node budget.
using SolverFn = std::function<SolveResult(const IlpModel&, int64_t)>;

}  // namespace corridor

#endif  // CORRIDOR_ILP_H_
