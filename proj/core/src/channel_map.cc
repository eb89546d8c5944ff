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

#include "corridor/channel_map.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace corridor {

LatticeGeometry MakeLattice(const GridSpec& grid,
                            const SampleLattice& lattice) {
  grid.Validate();
  if (lattice.samples_per_edge < 1 || lattice.vertical_levels < 1) {
    throw std::invalid_argument("sample lattice counts must be >= 1");
  }
  const int s = lattice.samples_per_edge;
  LatticeGeometry g;
  g.nx = grid.n * s;
  g.ny = grid.n * s;
  g.nz = lattice.vertical_levels;
  g.step_x = grid.dx / s;
  g.step_y = grid.dy / s;
  g.origin_x = grid.origin_x + 0.5 * g.step_x;
  g.origin_y = grid.origin_y + 0.5 * g.step_y;
  if (g.nz == 1) {
    g.origin_z = grid.altitude + 0.5 * grid.dz;
    g.step_z = 0.0;
  } else {
    g.origin_z = grid.altitude;
    g.step_z = grid.dz / (g.nz - 1);
  }
  return g;
}

ChannelMap BuildChannelMap(int site_index, const Scene& scene,
                           const GridSpec& grid, const SampleLattice& lattice,
                           const GainModel& model) {
  if (site_index < 0 || site_index >= scene.site_count()) {
    throw std::out_of_range("site index " + std::to_string(site_index) +
                            " out of range");
  }
  ChannelMap map;
  map.site_index = site_index;
  map.lattice = MakeLattice(grid, lattice);
  const LatticeGeometry& g = map.lattice;
  const Point3& site = scene.sites[site_index];
  map.gains.resize(g.size());
  map.los.resize(g.size());
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nz; ++iz) {
        const Point3 p = g.PointAt(ix, iy, iz);
        const size_t at = g.Offset(ix, iy, iz);
        map.los[at] = LosVisible(site, p, scene) ? 1 : 0;
        map.gains[at] = PointGain(site, p, scene, model);
      }
    }
  }
  return map;
}

namespace {

struct SampleRange {
  int ix_begin, ix_end;
  int iy_begin, iy_end;
};

CellChannelStats ReduceRange(const ChannelMap& map, const Point3& site,
                             const SampleRange& range,
                             const StatsOptions& options,
                             const RadioParams& radio) {
  if (!(options.trim_fraction >= 0.0 && options.trim_fraction < 0.5)) {
    throw std::invalid_argument("trim fraction must lie in [0, 0.5)");
  }
  const LatticeGeometry& g = map.lattice;
  std::vector<double> samples;
  samples.reserve(static_cast<size_t>(range.ix_end - range.ix_begin) *
                  (range.iy_end - range.iy_begin) * g.nz);
  bool all_los = true;
  bool any_los = false;
  double farthest = 0.0;
  for (int ix = range.ix_begin; ix < range.ix_end; ++ix) {
    for (int iy = range.iy_begin; iy < range.iy_end; ++iy) {
      for (int iz = 0; iz < g.nz; ++iz) {
        const size_t at = g.Offset(ix, iy, iz);
        samples.push_back(map.gains[at]);
        const bool los = map.los[at] != 0;
        all_los = all_los && los;
        any_los = any_los || los;
        farthest = std::max(farthest, Distance(site, g.PointAt(ix, iy, iz)));
      }
    }
  }
  std::sort(samples.begin(), samples.end());
  const size_t count = samples.size();
  const size_t trim = static_cast<size_t>(
      std::floor(options.trim_fraction * static_cast<double>(count) + 1e-9));

  CellChannelStats stats;
  stats.h_min = samples.front();
  stats.h_max = samples.back();
  stats.h_min_trim = samples[trim];
  stats.h_max_trim = samples[count - 1 - trim];
  const bool los =
      options.los_rule == LosRule::kAllSamples ? all_los : any_los;
  stats.los_indicator = los ? 1 : 0;
  // The echo term is monotone in distance, so its minimum over the samples
  // sits at the farthest one.
  stats.echo_min = los ? EchoPower(radio, farthest) : 0.0;
  return stats;
}

void CheckMaps(std::span<const ChannelMap> maps, const Scene& scene,
               const GridSpec& grid) {
  if (static_cast<int>(maps.size()) != scene.site_count()) {
    throw std::invalid_argument("expected one channel map per site");
  }
  for (size_t k = 0; k < maps.size(); ++k) {
    if (maps[k].site_index != static_cast<int>(k)) {
      throw std::invalid_argument("channel maps must be ordered by site");
    }
    if (maps[k].lattice.nx % grid.n != 0 || maps[k].lattice.nx == 0 ||
        maps[k].lattice.nx != maps[k].lattice.ny) {
      throw std::invalid_argument("channel map lattice does not fit the grid");
    }
  }
}

}  // namespace

CellChannelStats ComputeCellStats(const ChannelMap& map, const Point3& site,
                                  const GridSpec& grid, const CellIndex& cell,
                                  const StatsOptions& options,
                                  const RadioParams& radio) {
  if (!grid.Contains(cell)) {
    throw std::out_of_range("cell " + ToString(cell) + " outside the grid");
  }
  const int s = map.lattice.nx / grid.n;
  const SampleRange range{(cell.i - 1) * s, cell.i * s, (cell.j - 1) * s,
                          cell.j * s};
  return ReduceRange(map, site, range, options, radio);
}

StatsGrid::StatsGrid(int side, int sites, SinrExtrema extrema)
    : side_(side), sites_(sites), extrema_(extrema) {
  data_.resize(static_cast<size_t>(side) * side * sites);
}

StatsGrid ComputeFineStats(std::span<const ChannelMap> maps,
                           const Scene& scene, const GridSpec& grid,
                           const StatsOptions& options,
                           const RadioParams& radio) {
  CheckMaps(maps, scene, grid);
  const int k_count = scene.site_count();
  StatsGrid out(grid.n, k_count,
                options.trim_fraction > 0.0 ? SinrExtrema::kTrimmed
                                            : SinrExtrema::kRaw);
  for (int k = 0; k < k_count; ++k) {
    for (int i = 1; i <= grid.n; ++i) {
      for (int j = 1; j <= grid.n; ++j) {
        out.at(k, {i, j}) = ComputeCellStats(maps[k], scene.sites[k], grid,
                                             {i, j}, options, radio);
      }
    }
  }
  return out;
}

StatsGrid ComputeCoarseStats(std::span<const ChannelMap> maps,
                             const Scene& scene, const GridSpec& grid,
                             const CoarseSpec& coarse,
                             const StatsOptions& options,
                             const RadioParams& radio) {
  CheckMaps(maps, scene, grid);
  if (coarse.m * coarse.factor != grid.n) {
    throw std::invalid_argument("coarse spec does not match the grid");
  }
  const int k_count = scene.site_count();
  StatsGrid out(coarse.m, k_count, SinrExtrema::kTrimmed);
  for (int k = 0; k < k_count; ++k) {
    const int s = maps[k].lattice.nx / grid.n;
    const int span = coarse.factor * s;
    for (int a = 1; a <= coarse.m; ++a) {
      for (int b = 1; b <= coarse.m; ++b) {
        const SampleRange range{(a - 1) * span, a * span, (b - 1) * span,
                                b * span};
        out.at(k, {a, b}) =
            ReduceRange(maps[k], scene.sites[k], range, options, radio);
      }
    }
  }
  return out;
}

}  // namespace corridor
