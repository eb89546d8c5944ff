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

// Coverage metrics: per-point and worst-case SINR, the per-cell sensing / LoS
// / SINR predicates, and whole-plan verification and cost.

#ifndef CORRIDOR_METRICS_H_
#define CORRIDOR_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corridor/channel_map.h"
#include "corridor/grid.h"
#include "corridor/radio.h"

namespace corridor {

// Sites needed in LoS of every corridor cell.
inline constexpr int kMinLosSites = 3;

struct CostWeights {
  double alpha1 = 0.5;  // per corridor cell
  double alpha2 = 0.5;  // per deployed base station

  void Validate() const;
};

class Deployment {
 public:
  Deployment() = default;
  explicit Deployment(int sites) : flags_(static_cast<size_t>(sites), 0) {}
  explicit Deployment(std::vector<uint8_t> flags) : flags_(std::move(flags)) {}
  static Deployment All(int sites);
  // Bit k of `bits` is site k.
  static Deployment FromBits(int sites, uint64_t bits);

  int size() const { return static_cast<int>(flags_.size()); }
  bool operator[](int k) const { return flags_[k] != 0; }
  void Set(int k, bool on) { flags_[k] = on ? 1 : 0; }
  int Count() const;
  const std::vector<uint8_t>& flags() const { return flags_; }
  // "0110..." with site 0 first.
  std::string ToString() const;

  bool operator==(const Deployment&) const = default;

 private:
  std::vector<uint8_t> flags_;
};

// SINR at one point from site k. `gains[b]` is h_b(p) for every site b.
// Interferers contribute P*h without the transmit gain.
double PointSinr(int k, std::span<const double> gains,
                 const Deployment& deployment, const RadioParams& radio);

// Same, reading the gains at one lattice point of the per-site maps.
double PointSinr(int k, std::span<const ChannelMap> maps, size_t lattice_offset,
                 const Deployment& deployment, const RadioParams& radio);

// Worst-case SINR lower bound of site k over a cell: serving minimum gain
// against interferer maximum gains.
double WorstCaseSinr(int k, std::span<const CellChannelStats> cell,
                     SinrExtrema extrema, const Deployment& deployment,
                     const RadioParams& radio);

// max_k WorstCaseSinr.
double BestWorstCaseSinr(std::span<const CellChannelStats> cell,
                         SinrExtrema extrema, const Deployment& deployment,
                         const RadioParams& radio);

double SensingPower(std::span<const CellChannelStats> cell,
                    const Deployment& deployment);
int LosSiteCount(std::span<const CellChannelStats> cell,
                 const Deployment& deployment);

struct CellFeasibility {
  bool sensing_ok = false;
  bool los_ok = false;
  bool sinr_ok = false;

  bool all() const { return sensing_ok && los_ok && sinr_ok; }
};

CellFeasibility CellFeasible(std::span<const CellChannelStats> cell,
                             SinrExtrema extrema, const Deployment& deployment,
                             const RadioParams& radio);

// Smallest Big-M that deactivates every SINR row of a lattice:
// max over (k, cell) of eps2 * (P * sum_{k' != k} h_max_{k'} + noise).
// When `cells` is non-empty only those cells are considered.
double SafeBigM(const StatsGrid& stats, const RadioParams& radio,
                std::span<const CellIndex> cells = {});

struct CellViolation {
  CellIndex cell;
  std::string constraint;  // "sensing", "los" or "sinr"
};

struct SolutionReport {
  bool ok = false;
  ValidationReport corridor;
  std::vector<CellViolation> cells;
};

SolutionReport VerifySolution(const CorridorMask& mask,
                              const Deployment& deployment,
                              const StatsGrid& stats, const RadioParams& radio);

double SolutionCost(const CorridorMask& mask, const Deployment& deployment,
                    const CostWeights& weights);

}  // namespace corridor

#endif  // CORRIDOR_METRICS_H_
