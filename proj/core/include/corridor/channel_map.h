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

// Per-site channel maps sampled over the corridor layer, and their reduction
// to per-cell statistics.
//
// The sample lattice places s x s points inside every fine cell at the
// centers of an s x s subdivision, so no sample is shared between cells, and
// `vertical_levels` points spanning [H, H + dz] (bottom and top for the
// default of two).

#ifndef CORRIDOR_CHANNEL_MAP_H_
#define CORRIDOR_CHANNEL_MAP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "corridor/grid.h"
#include "corridor/radio.h"
#include "corridor/scene.h"

namespace corridor {

struct SampleLattice {
  int samples_per_edge = 4;
  int vertical_levels = 2;
};

struct LatticeGeometry {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double origin_z = 0.0;
  double step_x = 0.0;
  double step_y = 0.0;
  double step_z = 0.0;

  size_t size() const { return static_cast<size_t>(nx) * ny * nz; }
  size_t Offset(int ix, int iy, int iz) const {
    return (static_cast<size_t>(ix) * ny + iy) * nz + iz;
  }
  Point3 PointAt(int ix, int iy, int iz) const {
    return {origin_x + ix * step_x, origin_y + iy * step_y,
            origin_z + iz * step_z};
  }

  bool operator==(const LatticeGeometry&) const = default;
};

LatticeGeometry MakeLattice(const GridSpec& grid, const SampleLattice& lattice);

struct ChannelMap {
  int site_index = 0;  // 0-based
  LatticeGeometry lattice;
  std::vector<double> gains;  // linear power gain per lattice point
  std::vector<uint8_t> los;   // 1 where the site sees the point

  bool operator==(const ChannelMap&) const = default;
};

ChannelMap BuildChannelMap(int site_index, const Scene& scene,
                           const GridSpec& grid, const SampleLattice& lattice,
                           const GainModel& model);

// How a cell's LoS indicator summarizes its samples.
enum class LosRule {
  kAllSamples,  // every sample in the cell sees the site
  kAnySample,   // at least one sample does
};

struct CellChannelStats {
  double h_min = 0.0;
  double h_max = 0.0;
  double h_min_trim = 0.0;
  double h_max_trim = 0.0;
  int los_indicator = 0;
  double echo_min = 0.0;  // W
};

struct StatsOptions {
  double trim_fraction = 0.0;
  LosRule los_rule = LosRule::kAllSamples;
};

// Reduction over the samples of one fine cell. Trimming drops
// floor(trim_fraction * count) samples from each end of the sorted gains.
CellChannelStats ComputeCellStats(const ChannelMap& map, const Point3& site,
                                  const GridSpec& grid, const CellIndex& cell,
                                  const StatsOptions& options,
                                  const RadioParams& radio);

// Which extrema feed the worst-case SINR.
enum class SinrExtrema { kRaw, kTrimmed };

// Statistics for every (site, cell) of a side x side lattice. Storage is
// cell-major so all sites of one cell are contiguous.
class StatsGrid {
 public:
  StatsGrid() = default;
  StatsGrid(int side, int sites, SinrExtrema extrema);

  int side() const { return side_; }
  int sites() const { return sites_; }
  SinrExtrema extrema() const { return extrema_; }

  CellChannelStats& at(int k, const CellIndex& cell) {
    return data_[Offset(cell) + k];
  }
  const CellChannelStats& at(int k, const CellIndex& cell) const {
    return data_[Offset(cell) + k];
  }
  std::span<const CellChannelStats> cell(const CellIndex& cell) const {
    return {data_.data() + Offset(cell), static_cast<size_t>(sites_)};
  }

 private:
  size_t Offset(const CellIndex& cell) const {
    return (static_cast<size_t>(cell.i - 1) * side_ + (cell.j - 1)) * sites_;
  }

  int side_ = 0;
  int sites_ = 0;
  SinrExtrema extrema_ = SinrExtrema::kRaw;
  std::vector<CellChannelStats> data_;
};

// Fine-layer stats. The SINR uses trimmed extrema only when trimming is on.
StatsGrid ComputeFineStats(std::span<const ChannelMap> maps,
                           const Scene& scene, const GridSpec& grid,
                           const StatsOptions& options,
                           const RadioParams& radio);

// Coarse-layer stats over each coarse cell's sample superset. The SINR uses
// the trimmed extrema; raw extrema are kept for diagnostics.
StatsGrid ComputeCoarseStats(std::span<const ChannelMap> maps,
                             const Scene& scene, const GridSpec& grid,
                             const CoarseSpec& coarse,
                             const StatsOptions& options,
                             const RadioParams& radio);

}  // namespace corridor

#endif  // CORRIDOR_CHANNEL_MAP_H_
