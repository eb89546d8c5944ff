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

// Fine/coarse lattices and corridor occupancy masks.
//
// Cell indices are 1-based everywhere. Row index i runs along x, column index
// j along y. When talking about compass directions, smaller i is "south" and
// larger j is "east".

#ifndef CORRIDOR_GRID_H_
#define CORRIDOR_GRID_H_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corridor {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CellIndex {
  int i = 1;
  int j = 1;

  auto operator<=>(const CellIndex&) const = default;
};

std::string ToString(const CellIndex& cell);

// Fine N x N lattice at a fixed altitude.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double altitude = 0.0;
  int n = 2;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;

  // Throws GridError if the invariants do not hold.
  void Validate() const;
  bool Contains(const CellIndex& cell) const {
    return cell.i >= 1 && cell.i <= n && cell.j >= 1 && cell.j <= n;
  }
};

// M x M coarsening of a GridSpec; every coarse cell holds factor x factor
// fine cells.
struct CoarseSpec {
  int m = 2;
  int factor = 1;
  double coarse_dx = 1.0;
  double coarse_dy = 1.0;
};

CoarseSpec MakeCoarseSpec(const GridSpec& grid, int m);

struct Box3 {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
};

Box3 CellRegion(const GridSpec& grid, const CellIndex& cell);

// In-bounds cells at Manhattan distance one, in the order
// (i-1,j), (i+1,j), (i,j-1), (i,j+1).
std::vector<CellIndex> Neighbors4(const CellIndex& cell, int side);

// Binary occupancy of a side x side lattice with departure/destination
// anchors. Defaults to the (1,1) -> (side,side) corner pair.
class CorridorMask {
 public:
  explicit CorridorMask(int side);
  CorridorMask(int side, CellIndex departure, CellIndex destination);

  int side() const { return side_; }
  const CellIndex& departure() const { return departure_; }
  const CellIndex& destination() const { return destination_; }

  bool Contains(const CellIndex& cell) const {
    return cell.i >= 1 && cell.i <= side_ && cell.j >= 1 && cell.j <= side_;
  }
  bool at(const CellIndex& cell) const { return bits_[Offset(cell)] != 0; }
  void Set(const CellIndex& cell, bool active) {
    bits_[Offset(cell)] = active ? 1 : 0;
  }

  int ActiveCount() const;
  std::vector<CellIndex> ActiveCells() const;
  int ActiveNeighborCount(const CellIndex& cell) const;

  // Rows of '0'/'1' separated by '\n', row i = 1 first.
  std::string ToText() const;
  static CorridorMask FromText(const std::string& text, CellIndex departure,
                               CellIndex destination);
  static CorridorMask FromText(const std::string& text);

  bool operator==(const CorridorMask&) const = default;

 private:
  size_t Offset(const CellIndex& cell) const;

  int side_;
  CellIndex departure_;
  CellIndex destination_;
  std::vector<uint8_t> bits_;
};

enum class CorridorRule {
  kEndpointInactive,   // departure or destination bit is 0
  kTooFewNeighbors,    // active cell below its neighbor lower bound
  kTooManyNeighbors,   // any cell with more than two active neighbors
  kEmptyRow,           // cell.i names the row, cell.j is 0
  kEmptyColumn,        // cell.j names the column, cell.i is 0
  kNotSimplePath,      // degree rules hold but the active set is not one path
};

const char* RuleName(CorridorRule rule);

struct CorridorViolation {
  CorridorRule rule;
  CellIndex cell;
};

struct ValidationReport {
  bool ok = true;
  std::vector<CorridorViolation> violations;
};

// Checks the corridor rules:
//  * both anchors active;
//  * active cells have >= 2 active neighbors, anchors >= 1 (a single-cell
//    corridor whose anchors coincide needs none);
//  * every cell, active or not, has <= 2 active neighbors;
//  * every row and column between the two anchors holds an active cell;
//  * when the local rules pass, the active set is one simple path.
ValidationReport ValidateCorridor(const CorridorMask& mask);

// Walks a valid corridor from departure to destination. Throws GridError if
// the active set is not a single simple path.
std::vector<CellIndex> ExtractPath(const CorridorMask& mask);

struct SegmentEndpoints {
  CellIndex start;
  CellIndex dest;
};

// Local start/destination cells of one coarse block on the coarse path. The
// start sits at the midpoint of the edge shared with the predecessor block and
// the destination at the midpoint of the edge shared with the successor. The
// first block starts at local (1,1) and the last ends at (factor,factor).
SegmentEndpoints ComputeSegmentEndpoints(std::span<const CellIndex> coarse_path,
                                         const CellIndex& block, int factor);

// Midpoint index of a block edge: floor(F/2) for even F, the true middle for
// odd F.
inline int EdgeMidpoint(int factor) { return (factor + 1) / 2; }

// Global fine index of a local cell inside coarse block (a,b).
inline CellIndex BlockToGlobal(const CellIndex& block, const CellIndex& local,
                               int factor) {
  return {(block.i - 1) * factor + local.i, (block.j - 1) * factor + local.j};
}

}  // namespace corridor

#endif  // CORRIDOR_GRID_H_
