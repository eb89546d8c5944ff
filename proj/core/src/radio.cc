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

#include "corridor/radio.h"

#include <cmath>
#include <numbers>
#include <string>

namespace corridor {

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double LinearToDb(double linear) { return 10.0 * std::log10(linear); }

double DbmToWatts(double dbm) { return 1e-3 * DbToLinear(dbm); }

double WattsToDbm(double watts) { return LinearToDb(watts / 1e-3); }

void RadioParams::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("radio.") + name +
                                  " must be positive and finite");
    }
  };
  positive(tx_power, "tx_power");
  positive(noise, "noise");
  positive(wavelength, "wavelength");
  positive(rcs, "rcs");
  positive(sense_threshold, "sense_threshold");
  positive(sinr_threshold, "sinr_threshold");
  if (!(tx_gain > 1.0)) {
    throw std::invalid_argument("radio.tx_gain must exceed 1 (0 dB)");
  }
  if (big_m && !(*big_m > 0.0)) {
    throw std::invalid_argument("radio.big_m must be positive");
  }
}

double EchoPower(const RadioParams& radio, double distance) {
  const double four_pi = 4.0 * std::numbers::pi;
  const double d2 = distance * distance;
  return radio.tx_power * radio.tx_gain * radio.wavelength * radio.wavelength *
         radio.rcs / (four_pi * four_pi * four_pi * d2 * d2);
}

}  // namespace corridor
