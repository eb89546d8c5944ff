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
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "corridor/ilp.h"

namespace corridor {
namespace {

constexpr double kBoundTol = 1e-9;
constexpr int8_t kFree = -1;

// Every constraint is stored as one or two rows sum(a x) <= rhs, scaled so
// that max |a| == 1.
class Searcher {
 public:
  Searcher(const IlpModel& model, const SolveOptions& options);
  SolveResult Run();

 private:
  struct Row {
    int begin = 0;
    int end = 0;
    double rhs = 0.0;
    double min_activity = 0.0;
    bool queued = false;
  };

  void AddRow(const std::vector<Term>& terms, double sign, double rhs);
  void Fix(int v, int8_t val);
  void UndoTo(size_t mark);
  bool Propagate();
  bool AllRowsSatisfied() const;
  double CoveringBound();
  void Dive(size_t cursor);

  const int n_;
  const bool pruning_;
  const int64_t max_nodes_;
  const double offset_;
  bool root_infeasible_ = false;

  std::vector<Row> rows_;
  std::vector<int> row_var_;
  std::vector<double> row_coef_;
  std::vector<int> col_begin_;
  std::vector<int> col_row_;
  std::vector<double> col_coef_;
  std::vector<double> cost_;
  std::vector<int> order_;
  std::vector<int> cover_rows_;

  std::vector<int8_t> value_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  double fixed_cost_ = 0.0;
  double free_negative_cost_ = 0.0;

  std::vector<int> stamp_;
  int stamp_epoch_ = 0;
  std::vector<std::pair<double, int>> candidates_;

  double best_ = std::numeric_limits<double>::infinity();
  std::vector<uint8_t> best_assignment_;
  bool found_ = false;
  int64_t nodes_ = 0;
  bool exhausted_ = false;
};

Searcher::Searcher(const IlpModel& model, const SolveOptions& options)
    : n_(model.num_vars()),
      pruning_(options.pruning),
      max_nodes_(options.max_nodes),
      offset_(model.objective_offset()),
      cost_(model.objective()),
      value_(static_cast<size_t>(n_), kFree),
      stamp_(static_cast<size_t>(n_), 0) {
  for (const Constraint& c : model.constraints()) {
    switch (c.sense) {
      case Sense::kLessEqual:
        AddRow(c.terms, 1.0, c.rhs);
        break;
      case Sense::kGreaterEqual:
        AddRow(c.terms, -1.0, -c.rhs);
        break;
      case Sense::kEqual:
        AddRow(c.terms, 1.0, c.rhs);
        AddRow(c.terms, -1.0, -c.rhs);
        break;
    }
  }

  // Column view.
  std::vector<int> count(static_cast<size_t>(n_) + 1, 0);
  for (int v : row_var_) ++count[v + 1];
  col_begin_.assign(static_cast<size_t>(n_) + 1, 0);
  for (int v = 0; v < n_; ++v) col_begin_[v + 1] = col_begin_[v] + count[v + 1];
  col_row_.resize(row_var_.size());
  col_coef_.resize(row_var_.size());
  std::vector<int> fill(col_begin_.begin(), col_begin_.end() - 1);
  for (size_t r = 0; r < rows_.size(); ++r) {
    for (int t = rows_[r].begin; t < rows_[r].end; ++t) {
      const int slot = fill[row_var_[t]]++;
      col_row_[slot] = static_cast<int>(r);
      col_coef_[slot] = row_coef_[t];
    }
  }

  order_.resize(static_cast<size_t>(n_));
  for (int v = 0; v < n_; ++v) order_[v] = v;
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    return col_begin_[a + 1] - col_begin_[a] > col_begin_[b + 1] - col_begin_[b];
  });

  for (size_t r = 0; r < rows_.size(); ++r) {
    for (int t = rows_[r].begin; t < rows_[r].end; ++t) {
      if (row_coef_[t] < 0.0 && cost_[row_var_[t]] > 0.0) {
        cover_rows_.push_back(static_cast<int>(r));
        break;
      }
    }
  }

  for (int v = 0; v < n_; ++v) {
    if (cost_[v] < 0.0) free_negative_cost_ += cost_[v];
  }
}

void Searcher::AddRow(const std::vector<Term>& terms, double sign,
                      double rhs) {
  double scale = 0.0;
  for (const Term& t : terms) scale = std::max(scale, std::abs(t.coef));
  if (scale == 0.0) {
    if (sign * 0.0 > rhs + kRowTolerance) root_infeasible_ = true;
    return;
  }
  Row row;
  row.begin = static_cast<int>(row_var_.size());
  for (const Term& t : terms) {
    const double a = sign * t.coef / scale;
    row_var_.push_back(t.var);
    row_coef_.push_back(a);
    if (a < 0.0) row.min_activity += a;
  }
  row.end = static_cast<int>(row_var_.size());
  row.rhs = rhs / scale;
  rows_.push_back(row);
}

void Searcher::Fix(int v, int8_t val) {
  value_[v] = val;
  trail_.push_back(v);
  const double c = cost_[v];
  if (val) fixed_cost_ += c;
  if (c < 0.0) free_negative_cost_ -= c;
  for (int s = col_begin_[v]; s < col_begin_[v + 1]; ++s) {
    const double a = col_coef_[s];
    Row& row = rows_[col_row_[s]];
    if (a > 0.0) {
      if (val) row.min_activity += a;
    } else if (!val) {
      row.min_activity -= a;
    }
    if (pruning_ && !row.queued) {
      row.queued = true;
      queue_.push_back(col_row_[s]);
    }
  }
}

void Searcher::UndoTo(size_t mark) {
  while (trail_.size() > mark) {
    const int v = trail_.back();
    trail_.pop_back();
    const int8_t val = value_[v];
    const double c = cost_[v];
    if (val) fixed_cost_ -= c;
    if (c < 0.0) free_negative_cost_ += c;
    for (int s = col_begin_[v]; s < col_begin_[v + 1]; ++s) {
      const double a = col_coef_[s];
      Row& row = rows_[col_row_[s]];
      if (a > 0.0) {
        if (val) row.min_activity -= a;
      } else if (!val) {
        row.min_activity += a;
      }
    }
    value_[v] = kFree;
  }
}

bool Searcher::Propagate() {
  while (!queue_.empty()) {
    const int r = queue_.back();
    queue_.pop_back();
    rows_[r].queued = false;
    const double slack = rows_[r].rhs + kRowTolerance - rows_[r].min_activity;
    if (slack < 0.0) {
      for (int q : queue_) rows_[q].queued = false;
      queue_.clear();
      return false;
    }
    // Coefficients are scaled to |a| <= 1.
    if (slack >= 1.0) continue;
    for (int t = rows_[r].begin; t < rows_[r].end; ++t) {
      const int v = row_var_[t];
      if (value_[v] != kFree) continue;
      const double a = row_coef_[t];
      if (a > slack) {
        Fix(v, 0);
      } else if (-a > slack) {
        Fix(v, 1);
      }
    }
  }
  return true;
}

bool Searcher::AllRowsSatisfied() const {
  for (const Row& row : rows_) {
    if (row.min_activity > row.rhs + kRowTolerance) return false;
  }
  return true;
}

// Lower bound on the extra positive cost any completion must pay. A row
// whose fixed part exceeds its right-hand side must switch on free
// negative-coefficient variables. Rows are taken greedily by bound, skipping
// any row that shares a free variable with a row already taken.
double Searcher::CoveringBound() {
  candidates_.clear();
  for (int r : cover_rows_) {
    const Row& row = rows_[r];
    double free_negative = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double min_cost = std::numeric_limits<double>::infinity();
    for (int t = row.begin; t < row.end; ++t) {
      const double a = row_coef_[t];
      if (a >= 0.0 || value_[row_var_[t]] != kFree) continue;
      const double c = std::max(cost_[row_var_[t]], 0.0);
      free_negative += a;
      min_ratio = std::min(min_ratio, c / -a);
      min_cost = std::min(min_cost, c);
    }
    const double need = row.min_activity - free_negative - row.rhs -
                        kRowTolerance;
    if (need <= 0.0 || !(min_cost > 0.0)) continue;
    candidates_.emplace_back(std::max(need * min_ratio, min_cost), r);
  }
  if (candidates_.empty()) return 0.0;
  std::sort(candidates_.begin(), candidates_.end(),
            [](const auto& a, const auto& b) {
              return a.first > b.first ||
                     (a.first == b.first && a.second < b.second);
            });
  ++stamp_epoch_;
  double total = 0.0;
  for (const auto& [bound, r] : candidates_) {
    const Row& row = rows_[r];
    bool disjoint = true;
    for (int t = row.begin; t < row.end && disjoint; ++t) {
      const int v = row_var_[t];
      if (row_coef_[t] < 0.0 && value_[v] == kFree &&
          stamp_[v] == stamp_epoch_) {
        disjoint = false;
      }
    }
    if (!disjoint) continue;
    for (int t = row.begin; t < row.end; ++t) {
      const int v = row_var_[t];
      if (row_coef_[t] < 0.0 && value_[v] == kFree) stamp_[v] = stamp_epoch_;
    }
    total += bound;
  }
  return total;
}

void Searcher::Dive(size_t cursor) {
  if (nodes_ >= max_nodes_) {
    exhausted_ = true;
    return;
  }
  ++nodes_;
  if (pruning_ && std::isfinite(best_)) {
    double bound = offset_ + fixed_cost_ + free_negative_cost_;
    if (bound >= best_ - kBoundTol) return;
    bound += CoveringBound();
    if (bound >= best_ - kBoundTol) return;
  }
  while (cursor < order_.size() && value_[order_[cursor]] != kFree) ++cursor;
  if (cursor == order_.size()) {
    if (!pruning_ && !AllRowsSatisfied()) return;
    const double objective = offset_ + fixed_cost_;
    if (objective < best_) {
      best_ = objective;
      best_assignment_.assign(value_.begin(), value_.end());
      found_ = true;
    }
    return;
  }
  const int v = order_[cursor];
  const int8_t first = cost_[v] > 0.0 ? 0 : 1;
  for (int8_t val : {first, static_cast<int8_t>(1 - first)}) {
    const size_t mark = trail_.size();
    Fix(v, val);
    if (!pruning_ || Propagate()) Dive(cursor + 1);
    UndoTo(mark);
    if (exhausted_) return;
  }
}

SolveResult Searcher::Run() {
  SolveResult result;
  if (!root_infeasible_) {
    if (pruning_) {
      for (size_t r = 0; r < rows_.size(); ++r) {
        rows_[r].queued = true;
        queue_.push_back(static_cast<int>(r));
      }
    }
    if (!pruning_ || Propagate()) Dive(0);
  }
  result.nodes = nodes_;
  if (found_) {
    result.assignment = best_assignment_;
    result.objective = best_;
  }
  if (exhausted_) {
    result.status = SolveStatus::kBudgetExhausted;
  } else {
    result.status = !found_ ? SolveStatus::kInfeasible
                                             : SolveStatus::kOptimal;
  }
  return result;
}

}  // namespace

SolveResult Solve(const IlpModel& model, const SolveOptions& options) {
  return Searcher(model, options).Run();
}

}  // namespace corridor
