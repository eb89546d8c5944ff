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

#ifndef CORRIDOR_RADIO_H_
#define CORRIDOR_RADIO_H_

#include <optional>
#include <stdexcept>

namespace corridor {

inline constexpr double kSpeedOfLight = 299792458.0;

double DbToLinear(double db);
double LinearToDb(double linear);
// dBm is referenced to 1 mW.
double DbmToWatts(double dbm);
double WattsToDbm(double watts);

// Radio constants in linear units. dB values only appear at I/O boundaries.
struct RadioParams {
  double tx_power = 1.0;         // W
  double tx_gain = 1.0;          // linear, > 1
  double noise = 1e-14;          // W
  double wavelength = 0.3;       // m
  double rcs = 1.0;              // m^2
  double sense_threshold = 0.0;  // W, minimum summed echo power
  double sinr_threshold = 1.0;   // linear
  // Big-M constant for the SINR disjunction. Unset means "use the smallest
  // safe value for each model".
  std::optional<double> big_m;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

// Monostatic LoS echo power P*G*lambda^2*sigma / ((4 pi)^3 d^4).
double EchoPower(const RadioParams& radio, double distance);

// Relative slack used when comparing against the sensing/SINR thresholds.
inline constexpr double kThresholdRelTol = 1e-12;

inline bool MeetsThreshold(double value, double threshold) {
  return value >= threshold * (1.0 - kThresholdRelTol);
}

}  // namespace corridor

#endif  // CORRIDOR_RADIO_H_
