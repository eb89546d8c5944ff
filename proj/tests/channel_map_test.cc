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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "corridor/ckm_io.h"
#include "test_util.h"

namespace corridor {
namespace {

GridSpec SmallGrid(int n = 4, double cell = 10.0, double altitude = 60.0) {
  GridSpec g;
  g.n = n;
  g.dx = g.dy = g.dz = cell;
  g.altitude = altitude;
  return g;
}

Scene SmallScene(int buildings, uint64_t seed = 4) {
  SceneConfig c;
  c.bounds = {0, 0, 40, 40};
  c.building_count = buildings;
  c.min_footprint = 4;
  c.max_footprint = 8;
  c.min_height = 20;
  c.max_height = 80;
  c.building_gap = 1;
  c.site_count = 3;
  c.seed = seed;
  return GenerateScene(c);
}

// Closed-form echo from the radar equation.
double Echo(double p, double g, double lambda, double rcs, double d) {
  return p * g * lambda * lambda * rcs /
         (std::pow(4.0 * std::numbers::pi, 3.0) * std::pow(d, 4.0));
}

TEST(LatticeTest, Shape) {
  const LatticeGeometry g = MakeLattice(SmallGrid(), {3, 2});
  EXPECT_EQ(g.nx, 12);
  EXPECT_EQ(g.ny, 12);
  EXPECT_EQ(g.nz, 2);
  EXPECT_EQ(g.size(), 288u);
  const Point3 first = g.PointAt(0, 0, 0);
  EXPECT_NEAR(first.x, 10.0 / 6.0, 1e-12);
  EXPECT_NEAR(first.z, 60.0, 1e-12);
  EXPECT_NEAR(g.PointAt(0, 0, 1).z, 70.0, 1e-12);
}

TEST(ChannelMapTest, OpenFieldIsLosAndDecaysWithDistance) {
  Scene s = SmallScene(0);
  const ChannelMap map = BuildChannelMap(0, s, SmallGrid(), {2, 2}, {});
  const LatticeGeometry& g = map.lattice;
  std::vector<std::pair<double, double>> by_distance;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nz; ++iz) {
        const size_t at = g.Offset(ix, iy, iz);
        EXPECT_EQ(map.los[at], 1);
        by_distance.push_back(
            {Distance(s.sites[0], g.PointAt(ix, iy, iz)), map.gains[at]});
      }
    }
  }
  std::sort(by_distance.begin(), by_distance.end());
  for (size_t n = 1; n < by_distance.size(); ++n) {
    if (by_distance[n].first > by_distance[n - 1].first * (1 + 1e-12)) {
      EXPECT_LT(by_distance[n].second, by_distance[n - 1].second);
    }
  }
}

TEST(ChannelMapTest, DependsOnTheSiteOnlyThroughItsPosition) {
  const Scene s = SmallScene(4);
  Scene moved = s;
  moved.sites[0] = s.sites[1];
  ChannelMap a = BuildChannelMap(1, s, SmallGrid(), {2, 2}, {});
  ChannelMap b = BuildChannelMap(0, moved, SmallGrid(), {2, 2}, {});
  EXPECT_EQ(a.gains, b.gains);
  EXPECT_EQ(a.los, b.los);
  EXPECT_NE(BuildChannelMap(0, s, SmallGrid(), {2, 2}, {}).gains, a.gains);
}

TEST(ChannelMapTest, SpotChecksAgainstPointGain) {
  const Scene s = SmallScene(6);
  const GainModel model;
  const ChannelMap map = BuildChannelMap(2, s, SmallGrid(), {3, 2}, model);
  std::mt19937_64 rng(8);
  const LatticeGeometry& g = map.lattice;
  for (int t = 0; t < 20; ++t) {
    const int ix = static_cast<int>(rng() % g.nx);
    const int iy = static_cast<int>(rng() % g.ny);
    const int iz = static_cast<int>(rng() % g.nz);
    const Point3 p = g.PointAt(ix, iy, iz);
    EXPECT_EQ(map.gains[g.Offset(ix, iy, iz)],
              PointGain(s.sites[2], p, s, model));
    EXPECT_EQ(map.los[g.Offset(ix, iy, iz)] != 0,
              LosVisible(s.sites[2], p, s));
  }
}

// A hand-made map with samples 1e-9 .. 10e-9 in cell (1,1).
ChannelMap TenSampleMap() {
  ChannelMap map;
  map.lattice.nx = 2;
  map.lattice.ny = 2;
  map.lattice.nz = 10;
  map.lattice.step_x = map.lattice.step_y = 5.0;
  map.lattice.step_z = 1.0;
  map.lattice.origin_x = map.lattice.origin_y = 2.5;
  map.lattice.origin_z = 100.0;
  map.gains.assign(map.lattice.size(), 1e-6);
  map.los.assign(map.lattice.size(), 1);
  const int order[10] = {7, 2, 9, 1, 5, 10, 3, 8, 4, 6};
  for (int iz = 0; iz < 10; ++iz) {
    map.gains[map.lattice.Offset(0, 0, iz)] = order[iz] * 1e-9;
  }
  return map;
}

TEST(CellStatsTest, TrimmingDropsTenPercentPerSide) {
  const ChannelMap map = TenSampleMap();
  const CellChannelStats s = ComputeCellStats(
      map, {0, 0, 0}, SmallGrid(2, 5.0), {1, 1}, {0.1}, test::ToyRadio());
  EXPECT_DOUBLE_EQ(s.h_min, 1e-9);
  EXPECT_DOUBLE_EQ(s.h_max, 10e-9);
  EXPECT_DOUBLE_EQ(s.h_min_trim, 2e-9);
  EXPECT_DOUBLE_EQ(s.h_max_trim, 9e-9);
}

TEST(CellStatsTest, OneBlockedSampleZeroesLosAndEcho) {
  ChannelMap map = TenSampleMap();
  map.los[map.lattice.Offset(0, 0, 4)] = 0;
  const CellChannelStats s = ComputeCellStats(
      map, {0, 0, 0}, SmallGrid(2, 5.0), {1, 1}, {0.0}, test::ToyRadio());
  EXPECT_EQ(s.los_indicator, 0);
  EXPECT_EQ(s.echo_min, 0.0);
  const CellChannelStats any =
      ComputeCellStats(map, {0, 0, 0}, SmallGrid(2, 5.0), {1, 1},
                       {0.0, LosRule::kAnySample}, test::ToyRadio());
  EXPECT_EQ(any.los_indicator, 1);
  EXPECT_GT(any.echo_min, 0.0);
}

TEST(CellStatsTest, EchoOverheadSpotValue) {
  // One sample of cell (1,1) sits 125 m straight above the site.
  GridSpec grid = SmallGrid(2, 5.0, 150.0);
  grid.origin_x = grid.origin_y = -2.5;
  Scene s;
  s.bounds = {-100, -100, 100, 100};
  s.sites = {{0, 0, 25}};
  RadioParams radio = test::ToyRadio();
  const ChannelMap map = BuildChannelMap(0, s, grid, {1, 2}, {});
  ASSERT_NEAR(map.lattice.PointAt(0, 0, 0).x, 0.0, 1e-12);
  ASSERT_NEAR(map.lattice.PointAt(0, 0, 0).z, 150.0, 1e-12);
  const double at_sample = EchoPower(radio, 125.0);
  EXPECT_NEAR(at_sample, 2.94e-12, 0.005e-12);
  const CellChannelStats stats =
      ComputeCellStats(map, s.sites[0], grid, {1, 1}, {}, radio);
  EXPECT_LE(stats.echo_min, at_sample);
  EXPECT_NEAR(stats.echo_min / Echo(1.0, radio.tx_gain, 0.3, 1.0, 130.0),
              1.0, 1e-12);
}

// Reduction over every sample of a map, written out directly.
CellChannelStats WholeMapOracle(const ChannelMap& map, const Point3& site,
                                const RadioParams& radio, double trim) {
  std::vector<double> g = map.gains;
  std::sort(g.begin(), g.end());
  const size_t cut = static_cast<size_t>(std::floor(trim * g.size() + 1e-9));
  CellChannelStats s;
  s.h_min = g.front();
  s.h_max = g.back();
  s.h_min_trim = g[cut];
  s.h_max_trim = g[g.size() - 1 - cut];
  s.los_indicator =
      std::all_of(map.los.begin(), map.los.end(), [](uint8_t v) { return v; });
  double farthest = 0.0;
  const LatticeGeometry& l = map.lattice;
  for (int ix = 0; ix < l.nx; ++ix) {
    for (int iy = 0; iy < l.ny; ++iy) {
      for (int iz = 0; iz < l.nz; ++iz) {
        farthest = std::max(farthest, Distance(site, l.PointAt(ix, iy, iz)));
      }
    }
  }
  s.echo_min = s.los_indicator ? Echo(radio.tx_power, radio.tx_gain,
                                      radio.wavelength, radio.rcs, farthest)
                               : 0.0;
  return s;
}

TEST(CoarseStatsTest, SingleCoarseCellIsTheWholeMap) {
  const Scene s = SmallScene(0);
  const GridSpec grid = SmallGrid();
  const RadioParams radio = test::ToyRadio();
  std::vector<ChannelMap> maps;
  for (int k = 0; k < s.site_count(); ++k) {
    maps.push_back(BuildChannelMap(k, s, grid, {2, 2}, {}));
  }
  CoarseSpec one;
  one.m = 1;
  one.factor = grid.n;
  const StatsGrid coarse =
      ComputeCoarseStats(maps, s, grid, one, {0.1}, radio);
  for (int k = 0; k < s.site_count(); ++k) {
    const CellChannelStats want =
        WholeMapOracle(maps[k], s.sites[k], radio, 0.1);
    const CellChannelStats& got = coarse.at(k, {1, 1});
    EXPECT_EQ(got.h_min, want.h_min);
    EXPECT_EQ(got.h_max, want.h_max);
    EXPECT_EQ(got.h_min_trim, want.h_min_trim);
    EXPECT_EQ(got.h_max_trim, want.h_max_trim);
    EXPECT_EQ(got.los_indicator, want.los_indicator);
    EXPECT_NEAR(got.echo_min / want.echo_min, 1.0, 1e-12);
  }
}

TEST(CoarseStatsTest, UntrimmedExtremaAreSetUnions) {
  const Scene s = SmallScene(5);
  const GridSpec grid = SmallGrid();
  const RadioParams radio = test::ToyRadio();
  std::vector<ChannelMap> maps;
  for (int k = 0; k < s.site_count(); ++k) {
    maps.push_back(BuildChannelMap(k, s, grid, {2, 2}, {}));
  }
  const StatsGrid fine = ComputeFineStats(maps, s, grid, {0.0}, radio);
  const StatsGrid coarse = ComputeCoarseStats(
      maps, s, grid, MakeCoarseSpec(grid, 2), {0.0}, radio);
  EXPECT_EQ(fine.extrema(), SinrExtrema::kRaw);
  EXPECT_EQ(coarse.extrema(), SinrExtrema::kTrimmed);
  for (int k = 0; k < s.site_count(); ++k) {
    for (int a = 1; a <= 2; ++a) {
      for (int b = 1; b <= 2; ++b) {
        double lo = 1.0, hi = 0.0, echo = 1.0;
        int los = 1;
        for (int i = 1; i <= 2; ++i) {
          for (int j = 1; j <= 2; ++j) {
            const CellChannelStats& f =
                fine.at(k, BlockToGlobal({a, b}, {i, j}, 2));
            lo = std::min(lo, f.h_min);
            hi = std::max(hi, f.h_max);
            echo = std::min(echo, f.echo_min);
            los = std::min(los, f.los_indicator);
          }
        }
        const CellChannelStats& c = coarse.at(k, {a, b});
        EXPECT_EQ(c.h_min, lo);
        EXPECT_EQ(c.h_max, hi);
        EXPECT_EQ(c.los_indicator, los);
        EXPECT_LE(c.echo_min, echo * (1 + 1e-12));
      }
    }
  }
}

TEST(CoarseStatsTest, PaperCoarseningHasOneHundredCellsPerSite) {
  GridSpec grid = SmallGrid(100, 5.0, 150.0);
  Scene s;
  s.bounds = {0, 0, 500, 500};
  s.sites = {{250, 250, 25}};
  const std::vector<ChannelMap> maps{
      BuildChannelMap(0, s, grid, {1, 1}, {})};
  const StatsGrid coarse = ComputeCoarseStats(
      maps, s, grid, MakeCoarseSpec(grid, 10), {0.1}, test::ToyRadio());
  EXPECT_EQ(coarse.side(), 10);
  EXPECT_EQ(coarse.sites(), 1);
}

TEST(StatsInvariantsProperty, OrderingAndEchoRules) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Scene s = SmallScene(6, seed);
    const GridSpec grid = SmallGrid();
    std::vector<ChannelMap> maps;
    for (int k = 0; k < s.site_count(); ++k) {
      maps.push_back(BuildChannelMap(k, s, grid, {3, 2}, {}));
    }
    const StatsGrid fine =
        ComputeFineStats(maps, s, grid, {0.1}, test::ToyRadio());
    for (int k = 0; k < s.site_count(); ++k) {
      for (int i = 1; i <= grid.n; ++i) {
        for (int j = 1; j <= grid.n; ++j) {
          const CellChannelStats& c = fine.at(k, {i, j});
          EXPECT_GE(c.h_min, 0.0);
          EXPECT_LE(c.h_min, c.h_min_trim);
          EXPECT_LE(c.h_min_trim, c.h_max_trim);
          EXPECT_LE(c.h_max_trim, c.h_max);
          EXPECT_GE(c.echo_min, 0.0);
          if (c.los_indicator == 0) {
            EXPECT_EQ(c.echo_min, 0.0);
          }
        }
      }
    }
  }
}

TEST(CkmIoTest, RoundTripIsExact) {
  const Scene s = SmallScene(4);
  const ChannelMap map = BuildChannelMap(1, s, SmallGrid(), {2, 2}, {});
  std::stringstream buffer;
  WriteCkm(map, buffer);
  EXPECT_EQ(ReadCkm(buffer), map);
}

TEST(CkmIoTest, RewriteGivesIdenticalBytes) {
  const Scene s = SmallScene(4);
  const ChannelMap map = BuildChannelMap(0, s, SmallGrid(), {2, 2}, {});
  std::ostringstream a, b;
  WriteCkm(map, a);
  WriteCkm(BuildChannelMap(0, s, SmallGrid(), {2, 2}, {}), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CkmIoTest, CorruptMagicIsAFormatError) {
  const Scene s = SmallScene(0);
  std::ostringstream out;
  WriteCkm(BuildChannelMap(0, s, SmallGrid(), {1, 1}, {}), out);
  std::string bytes = out.str();
  bytes[0] = 'X';
  std::istringstream in(bytes);
  EXPECT_THROW(ReadCkm(in), CkmFormatError);
}

TEST(CkmIoTest, TruncatedFileIsAFormatError) {
  const Scene s = SmallScene(0);
  std::ostringstream out;
  WriteCkm(BuildChannelMap(0, s, SmallGrid(), {1, 1}, {}), out);
  const std::string bytes = out.str();
  std::istringstream in(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(ReadCkm(in), CkmFormatError);
}

TEST(CkmIoTest, NamesAndChecksums) {
  EXPECT_EQ(CkmFileName(3), "site_003.ckm");
  const std::string abc = "abc";
  EXPECT_EQ(Sha256Hex(std::span<const unsigned char>(
                reinterpret_cast<const unsigned char*>(abc.data()), 3)),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  test::TempDir dir;
  {
    std::ofstream f(dir / "x.txt", std::ios::binary);
    f << "abc";
  }
  EXPECT_EQ(Sha256File(dir / "x.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace corridor
