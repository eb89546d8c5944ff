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

#include "corridor/grid.h"

#include <algorithm>
#include <deque>
#include <sstream>

namespace corridor {

std::string ToString(const CellIndex& cell) {
  return "(" + std::to_string(cell.i) + "," + std::to_string(cell.j) + ")";
}

void GridSpec::Validate() const {
  if (n < 2) throw GridError("grid.n must be >= 2");
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0)) {
    throw GridError("grid cell sizes must be positive");
  }
  if (!(altitude >= 0.0)) throw GridError("grid.altitude must be >= 0");
}

CoarseSpec MakeCoarseSpec(const GridSpec& grid, int m) {
  grid.Validate();
  if (m < 2) throw GridError("coarse.m must be >= 2");
  if (grid.n % m != 0) {
    throw GridError("grid.n (" + std::to_string(grid.n) +
                    ") is not divisible by coarse.m (" + std::to_string(m) +
                    ")");
  }
  CoarseSpec coarse;
  coarse.m = m;
  coarse.factor = grid.n / m;
  coarse.coarse_dx = grid.dx * coarse.factor;
  coarse.coarse_dy = grid.dy * coarse.factor;
  return coarse;
}

Box3 CellRegion(const GridSpec& grid, const CellIndex& cell) {
  if (!grid.Contains(cell)) {
    throw GridError("cell " + ToString(cell) + " outside the grid");
  }
  Box3 box;
  box.x_min = grid.origin_x + (cell.i - 1) * grid.dx;
  box.x_max = grid.origin_x + cell.i * grid.dx;
  box.y_min = grid.origin_y + (cell.j - 1) * grid.dy;
  box.y_max = grid.origin_y + cell.j * grid.dy;
  box.z_min = grid.altitude;
  box.z_max = grid.altitude + grid.dz;
  return box;
}

std::vector<CellIndex> Neighbors4(const CellIndex& cell, int side) {
  std::vector<CellIndex> out;
  out.reserve(4);
  if (cell.i > 1) out.push_back({cell.i - 1, cell.j});
  if (cell.i < side) out.push_back({cell.i + 1, cell.j});
  if (cell.j > 1) out.push_back({cell.i, cell.j - 1});
  if (cell.j < side) out.push_back({cell.i, cell.j + 1});
  return out;
}

CorridorMask::CorridorMask(int side)
    : CorridorMask(side, {1, 1}, {side, side}) {}

CorridorMask::CorridorMask(int side, CellIndex departure,
                           CellIndex destination)
    : side_(side), departure_(departure), destination_(destination) {
  if (side < 1) throw GridError("mask side must be >= 1");
  if (!Contains(departure) || !Contains(destination)) {
    throw GridError("mask anchors outside the lattice");
  }
  bits_.assign(static_cast<size_t>(side) * side, 0);
}

size_t CorridorMask::Offset(const CellIndex& cell) const {
  if (!Contains(cell)) {
    throw GridError("cell " + ToString(cell) + " outside the mask");
  }
  return static_cast<size_t>(cell.i - 1) * side_ + (cell.j - 1);
}

int CorridorMask::ActiveCount() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<CellIndex> CorridorMask::ActiveCells() const {
  std::vector<CellIndex> cells;
  for (int i = 1; i <= side_; ++i) {
    for (int j = 1; j <= side_; ++j) {
      if (at({i, j})) cells.push_back({i, j});
    }
  }
  return cells;
}

int CorridorMask::ActiveNeighborCount(const CellIndex& cell) const {
  int count = 0;
  for (const CellIndex& n : Neighbors4(cell, side_)) count += at(n) ? 1 : 0;
  return count;
}

std::string CorridorMask::ToText() const {
  std::string out;
  out.reserve(static_cast<size_t>(side_) * (side_ + 1));
  for (int i = 1; i <= side_; ++i) {
    for (int j = 1; j <= side_; ++j) out.push_back(at({i, j}) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

CorridorMask CorridorMask::FromText(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int side = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++side;
  }
  if (side == 0) throw GridError("empty mask text");
  return FromText(text, {1, 1}, {side, side});
}

CorridorMask CorridorMask::FromText(const std::string& text,
                                    CellIndex departure,
                                    CellIndex destination) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  const int side = static_cast<int>(rows.size());
  CorridorMask mask(side, departure, destination);
  for (int i = 1; i <= side; ++i) {
    const std::string& row = rows[i - 1];
    if (static_cast<int>(row.size()) != side) {
      throw GridError("mask row " + std::to_string(i) + " has length " +
                      std::to_string(row.size()) + ", expected " +
                      std::to_string(side));
    }
    for (int j = 1; j <= side; ++j) {
      const char c = row[j - 1];
      if (c != '0' && c != '1') {
        throw GridError("mask characters must be '0' or '1'");
      }
      mask.Set({i, j}, c == '1');
    }
  }
  return mask;
}

const char* RuleName(CorridorRule rule) {
  switch (rule) {
    case CorridorRule::kEndpointInactive:
      return "endpoint_inactive";
    case CorridorRule::kTooFewNeighbors:
      return "too_few_neighbors";
    case CorridorRule::kTooManyNeighbors:
      return "too_many_neighbors";
    case CorridorRule::kEmptyRow:
      return "empty_row";
    case CorridorRule::kEmptyColumn:
      return "empty_column";
    case CorridorRule::kNotSimplePath:
      return "not_simple_path";
  }
  return "unknown";
}

namespace {

bool IsAnchor(const CorridorMask& mask, const CellIndex& cell) {
  return cell == mask.departure() || cell == mask.destination();
}

// Connected and both anchors are path ends. Assumes the local degree rules
// already hold.
bool IsSimplePath(const CorridorMask& mask) {
  const CellIndex& from = mask.departure();
  if (from == mask.destination()) return mask.ActiveCount() == 1;
  if (mask.ActiveNeighborCount(from) != 1 ||
      mask.ActiveNeighborCount(mask.destination()) != 1) {
    return false;
  }
  const int side = mask.side();
  std::vector<uint8_t> seen(static_cast<size_t>(side) * side, 0);
  auto mark = [&](const CellIndex& c) -> uint8_t& {
    return seen[static_cast<size_t>(c.i - 1) * side + (c.j - 1)];
  };
  std::deque<CellIndex> queue{from};
  mark(from) = 1;
  int reached = 0;
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    ++reached;
    for (const CellIndex& n : Neighbors4(c, side)) {
      if (mask.at(n) && !mark(n)) {
        mark(n) = 1;
        queue.push_back(n);
      }
    }
  }
  return reached == mask.ActiveCount();
}

}  // namespace

ValidationReport ValidateCorridor(const CorridorMask& mask) {
  ValidationReport report;
  auto flag = [&report](CorridorRule rule, CellIndex cell) {
    report.ok = false;
    report.violations.push_back({rule, cell});
  };

  const bool single_cell = mask.departure() == mask.destination();
  if (!mask.at(mask.departure())) {
    flag(CorridorRule::kEndpointInactive, mask.departure());
  }
  if (!single_cell && !mask.at(mask.destination())) {
    flag(CorridorRule::kEndpointInactive, mask.destination());
  }

  bool degree_ok = true;
  for (int i = 1; i <= mask.side(); ++i) {
    for (int j = 1; j <= mask.side(); ++j) {
      const CellIndex cell{i, j};
      const int active = mask.ActiveNeighborCount(cell);
      if (mask.at(cell)) {
        const int lower = IsAnchor(mask, cell) ? (single_cell ? 0 : 1) : 2;
        if (active < lower) {
          flag(CorridorRule::kTooFewNeighbors, cell);
          degree_ok = false;
        }
      }
      if (active > 2) {
        flag(CorridorRule::kTooManyNeighbors, cell);
        degree_ok = false;
      }
    }
  }

  const int row_lo = std::min(mask.departure().i, mask.destination().i);
  const int row_hi = std::max(mask.departure().i, mask.destination().i);
  const int col_lo = std::min(mask.departure().j, mask.destination().j);
  const int col_hi = std::max(mask.departure().j, mask.destination().j);
  for (int i = row_lo; i <= row_hi; ++i) {
    bool any = false;
    for (int j = 1; j <= mask.side() && !any; ++j) any = mask.at({i, j});
    if (!any) flag(CorridorRule::kEmptyRow, {i, 0});
  }
  for (int j = col_lo; j <= col_hi; ++j) {
    bool any = false;
    for (int i = 1; i <= mask.side() && !any; ++i) any = mask.at({i, j});
    if (!any) flag(CorridorRule::kEmptyColumn, {0, j});
  }

  if (report.ok && degree_ok && !IsSimplePath(mask)) {
    flag(CorridorRule::kNotSimplePath, mask.departure());
  }
  return report;
}

std::vector<CellIndex> ExtractPath(const CorridorMask& mask) {
  if (!mask.at(mask.departure()) || !mask.at(mask.destination())) {
    throw GridError("corridor anchors are inactive");
  }
  std::vector<CellIndex> path{mask.departure()};
  const int total = mask.ActiveCount();
  CellIndex prev{0, 0};
  CellIndex cur = mask.departure();
  while (cur != mask.destination()) {
    CellIndex next{0, 0};
    int options = 0;
    for (const CellIndex& n : Neighbors4(cur, mask.side())) {
      if (mask.at(n) && n != prev) {
        next = n;
        ++options;
      }
    }
    if (options != 1 || static_cast<int>(path.size()) >= total) {
      throw GridError("active cells do not form a simple path at " +
                      ToString(cur));
    }
    prev = cur;
    cur = next;
    path.push_back(cur);
  }
  if (static_cast<int>(path.size()) != total) {
    throw GridError("corridor has " + std::to_string(total) +
                    " active cells but the walk covers " +
                    std::to_string(path.size()));
  }
  return path;
}

namespace {

CellIndex EdgeCellToward(const CellIndex& from, const CellIndex& to,
                         int factor) {
  const int mid = EdgeMidpoint(factor);
  const int di = to.i - from.i;
  const int dj = to.j - from.j;
  if (di == -1 && dj == 0) return {1, mid};
  if (di == 1 && dj == 0) return {factor, mid};
  if (di == 0 && dj == -1) return {mid, 1};
  if (di == 0 && dj == 1) return {mid, factor};
  throw GridError("coarse path cells " + ToString(from) + " and " +
                  ToString(to) + " are not 4-neighbors");
}

}  // namespace

SegmentEndpoints ComputeSegmentEndpoints(std::span<const CellIndex> coarse_path,
                                         const CellIndex& block, int factor) {
  if (factor < 1) throw GridError("factor must be >= 1");
  const auto it = std::find(coarse_path.begin(), coarse_path.end(), block);
  if (it == coarse_path.end()) {
    throw GridError("block " + ToString(block) + " is not on the coarse path");
  }
  const size_t t = static_cast<size_t>(it - coarse_path.begin());
  SegmentEndpoints ends;
  ends.start = t == 0 ? CellIndex{1, 1}
                      : EdgeCellToward(block, coarse_path[t - 1], factor);
  ends.dest = t + 1 == coarse_path.size()
                  ? CellIndex{factor, factor}
                  : EdgeCellToward(block, coarse_path[t + 1], factor);
  return ends;
}

}  // namespace corridor
