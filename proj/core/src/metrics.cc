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

#include "corridor/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corridor {

void CostWeights::Validate() const {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0)) {
    throw std::invalid_argument("plan.alpha1 and plan.alpha2 must be >= 0");
  }
  if (std::abs(alpha1 + alpha2 - 1.0) > 1e-9) {
    throw std::invalid_argument("plan.alpha1 + plan.alpha2 must equal 1");
  }
}

Deployment Deployment::All(int sites) {
  return Deployment(std::vector<uint8_t>(static_cast<size_t>(sites), 1));
}

Deployment Deployment::FromBits(int sites, uint64_t bits) {
  Deployment d(sites);
  for (int k = 0; k < sites; ++k) d.Set(k, (bits >> k) & 1u);
  return d;
}

int Deployment::Count() const {
  return static_cast<int>(std::count(flags_.begin(), flags_.end(), 1));
}

std::string Deployment::ToString() const {
  std::string out;
  for (uint8_t f : flags_) out.push_back(f ? '1' : '0');
  return out;
}

double PointSinr(int k, std::span<const double> gains,
                 const Deployment& deployment, const RadioParams& radio) {
  if (!deployment[k]) return 0.0;
  double interference = 0.0;
  for (int b = 0; b < deployment.size(); ++b) {
    if (b != k && deployment[b]) interference += radio.tx_power * gains[b];
  }
  return radio.tx_power * radio.tx_gain * gains[k] /
         (interference + radio.noise);
}

double PointSinr(int k, std::span<const ChannelMap> maps, size_t lattice_offset,
                 const Deployment& deployment, const RadioParams& radio) {
  std::vector<double> gains(maps.size());
  for (size_t b = 0; b < maps.size(); ++b) {
    gains[b] = maps[b].gains.at(lattice_offset);
  }
  return PointSinr(k, gains, deployment, radio);
}

double WorstCaseSinr(int k, std::span<const CellChannelStats> cell,
                     SinrExtrema extrema, const Deployment& deployment,
                     const RadioParams& radio) {
  if (!deployment[k]) return 0.0;
  const bool trimmed = extrema == SinrExtrema::kTrimmed;
  double interference = 0.0;
  for (int b = 0; b < deployment.size(); ++b) {
    if (b == k || !deployment[b]) continue;
    interference +=
        radio.tx_power * (trimmed ? cell[b].h_max_trim : cell[b].h_max);
  }
  const double serving = trimmed ? cell[k].h_min_trim : cell[k].h_min;
  return radio.tx_power * radio.tx_gain * serving /
         (interference + radio.noise);
}

double BestWorstCaseSinr(std::span<const CellChannelStats> cell,
                         SinrExtrema extrema, const Deployment& deployment,
                         const RadioParams& radio) {
  double best = 0.0;
  for (int k = 0; k < deployment.size(); ++k) {
    best = std::max(best, WorstCaseSinr(k, cell, extrema, deployment, radio));
  }
  return best;
}

double SensingPower(std::span<const CellChannelStats> cell,
                    const Deployment& deployment) {
  double sum = 0.0;
  for (int k = 0; k < deployment.size(); ++k) {
    if (deployment[k]) sum += cell[k].echo_min;
  }
  return sum;
}

int LosSiteCount(std::span<const CellChannelStats> cell,
                 const Deployment& deployment) {
  int count = 0;
  for (int k = 0; k < deployment.size(); ++k) {
    if (deployment[k]) count += cell[k].los_indicator;
  }
  return count;
}

CellFeasibility CellFeasible(std::span<const CellChannelStats> cell,
                             SinrExtrema extrema, const Deployment& deployment,
                             const RadioParams& radio) {
  CellFeasibility f;
  f.sensing_ok =
      MeetsThreshold(SensingPower(cell, deployment), radio.sense_threshold);
  f.los_ok = LosSiteCount(cell, deployment) >= kMinLosSites;
  f.sinr_ok = MeetsThreshold(
      BestWorstCaseSinr(cell, extrema, deployment, radio), radio.sinr_threshold);
  return f;
}

double SafeBigM(const StatsGrid& stats, const RadioParams& radio,
                std::span<const CellIndex> cells) {
  const bool trimmed = stats.extrema() == SinrExtrema::kTrimmed;
  double worst = 0.0;
  auto visit = [&](const CellIndex& c) {
    const auto cell = stats.cell(c);
    double total = 0.0;
    for (const CellChannelStats& s : cell) {
      total += trimmed ? s.h_max_trim : s.h_max;
    }
    for (const CellChannelStats& s : cell) {
      const double others = total - (trimmed ? s.h_max_trim : s.h_max);
      worst = std::max(worst, radio.sinr_threshold *
                                  (radio.tx_power * others + radio.noise));
    }
  };
  if (cells.empty()) {
    for (int i = 1; i <= stats.side(); ++i) {
      for (int j = 1; j <= stats.side(); ++j) visit({i, j});
    }
  } else {
    for (const CellIndex& c : cells) visit(c);
  }
  return worst;
}

SolutionReport VerifySolution(const CorridorMask& mask,
                              const Deployment& deployment,
                              const StatsGrid& stats,
                              const RadioParams& radio) {
  if (mask.side() != stats.side() || deployment.size() != stats.sites()) {
    throw std::invalid_argument("plan does not match the statistics grid");
  }
  SolutionReport report;
  report.corridor = ValidateCorridor(mask);
  for (const CellIndex& c : mask.ActiveCells()) {
    const CellFeasibility f =
        CellFeasible(stats.cell(c), stats.extrema(), deployment, radio);
    if (!f.sensing_ok) report.cells.push_back({c, "sensing"});
    if (!f.los_ok) report.cells.push_back({c, "los"});
    if (!f.sinr_ok) report.cells.push_back({c, "sinr"});
  }
  report.ok = report.corridor.ok && report.cells.empty();
  return report;
}

double SolutionCost(const CorridorMask& mask, const Deployment& deployment,
                    const CostWeights& weights) {
  return weights.alpha1 * mask.ActiveCount() +
         weights.alpha2 * deployment.Count();
}

}  // namespace corridor
