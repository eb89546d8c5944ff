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

// Synthetic urban scenes: box buildings on flat ground plus candidate base
// station sites, with segment visibility and an analytic channel gain.

#ifndef CORRIDOR_SCENE_H_
#define CORRIDOR_SCENE_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace corridor {

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double Distance(const Point3& a, const Point3& b);

struct Rect2 {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

// Axis-aligned building standing on the ground plane z = 0.
struct Building {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  double height = 0.0;
};

struct Scene {
  Rect2 bounds;
  std::vector<Building> buildings;
  std::vector<Point3> sites;
  uint64_t seed = 0;

  int site_count() const { return static_cast<int>(sites.size()); }
  // Throws SceneError on a broken invariant.
  void Validate() const;
};

struct SceneConfig {
  Rect2 bounds{0.0, 0.0, 500.0, 500.0};
  int building_count = 40;
  double min_footprint = 15.0;  // m, per side
  double max_footprint = 50.0;
  double min_height = 15.0;  // m
  double max_height = 80.0;
  double building_gap = 5.0;  // m, minimum clearance between buildings
  int site_count = 30;
  double bs_height = 25.0;
  uint64_t seed = 1;
  int max_attempts = 2000;  // placement retries per object
};

// Deterministic for a fixed config. Throws SceneError when the requested
// objects cannot be placed within max_attempts tries each.
Scene GenerateScene(const SceneConfig& config);

// True iff the open segment a -> b misses every building (closed boxes, so
// touching a face blocks).
bool LosVisible(const Point3& a, const Point3& b, const Scene& scene);

// Number of building faces the segment passes through.
int WallsCrossed(const Point3& a, const Point3& b, const Scene& scene);

struct GainModel {
  double wavelength = kDefaultWavelength;
  double nlos_base_db = 20.0;
  double nlos_per_wall_db = 10.0;

  static constexpr double kDefaultWavelength = 299792458.0 / 1e9;
};

// Free-space gain (lambda / (4 pi d))^2, attenuated by
// nlos_base_db + nlos_per_wall_db * walls when the link is blocked.
double PointGain(const Point3& site, const Point3& p, const Scene& scene,
                 const GainModel& model);

nlohmann::json SceneToJson(const Scene& scene);
Scene SceneFromJson(const nlohmann::json& json);

}  // namespace corridor

#endif  // CORRIDOR_SCENE_H_
