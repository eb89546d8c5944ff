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

#include "corridor/scene.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace corridor {

double Distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

bool InsideFootprint(const Building& b, double x, double y) {
  return x >= b.x_min && x <= b.x_max && y >= b.y_min && y <= b.y_max;
}

// Uniform double in [lo, hi) from the raw 64-bit stream. The standard
// distributions are implementation-defined, this is not.
class SceneRng {
 public:
  explicit SceneRng(uint64_t seed) : engine_(seed) {}
  double Uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

// Parameter interval of the closed box hit by the line a + t (b - a).
// Returns false when the line misses the box.
bool SlabInterval(const Point3& a, const Point3& b, const Building& box,
                  double* t_enter, double* t_exit) {
  const double origin[3] = {a.x, a.y, a.z};
  const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  const double lo[3] = {box.x_min, box.y_min, 0.0};
  const double hi[3] = {box.x_max, box.y_max, box.height};
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(dir[axis]) < 1e-15) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - origin[axis]) / dir[axis];
    double tb = (hi[axis] - origin[axis]) / dir[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  *t_enter = t0;
  *t_exit = t1;
  return true;
}

bool SegmentHits(const Point3& a, const Point3& b, const Building& box,
                 double* t_enter, double* t_exit) {
  return SlabInterval(a, b, box, t_enter, t_exit) && *t_enter < 1.0 &&
         *t_exit > 0.0;
}

}  // namespace

void Scene::Validate() const {
  if (sites.empty()) throw SceneError("scene needs at least one site");
  if (!(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min)) {
    throw SceneError("scene bounds are empty");
  }
  for (const Building& b : buildings) {
    if (!(b.height > 0.0) || !(b.x_max > b.x_min) || !(b.y_max > b.y_min)) {
      throw SceneError("building with non-positive extent");
    }
  }
  for (size_t k = 0; k < sites.size(); ++k) {
    const Point3& s = sites[k];
    if (s.x < bounds.x_min || s.x > bounds.x_max || s.y < bounds.y_min ||
        s.y > bounds.y_max) {
      throw SceneError("site " + std::to_string(k + 1) + " outside bounds");
    }
    for (const Building& b : buildings) {
      if (InsideFootprint(b, s.x, s.y) && s.z <= b.height) {
        throw SceneError("site " + std::to_string(k + 1) +
                         " inside a building");
      }
    }
  }
}

Scene GenerateScene(const SceneConfig& config) {
  if (config.site_count < 1) throw SceneError("scene.sites must be >= 1");
  if (config.building_count < 0 || !(config.min_footprint > 0.0) ||
      config.max_footprint < config.min_footprint ||
      !(config.min_height > 0.0) || config.max_height < config.min_height ||
      config.building_gap < 0.0) {
    throw SceneError("scene building ranges must be positive and ordered");
  }
  const Rect2& r = config.bounds;
  if (!(r.x_max > r.x_min) || !(r.y_max > r.y_min)) {
    throw SceneError("scene.bounds is empty");
  }

  Scene scene;
  scene.bounds = r;
  scene.seed = config.seed;
  SceneRng rng(config.seed);

  for (int n = 0; n < config.building_count; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts && !placed;
         ++attempt) {
      const double w = rng.Uniform(config.min_footprint, config.max_footprint);
      const double d = rng.Uniform(config.min_footprint, config.max_footprint);
      const double h = rng.Uniform(config.min_height, config.max_height);
      if (w > r.x_max - r.x_min || d > r.y_max - r.y_min) continue;
      const double x = rng.Uniform(r.x_min, r.x_max - w);
      const double y = rng.Uniform(r.y_min, r.y_max - d);
      const Building candidate{x, y, x + w, y + d, h};
      bool clear = true;
      for (const Building& other : scene.buildings) {
        const double g = config.building_gap;
        if (candidate.x_min < other.x_max + g &&
            other.x_min < candidate.x_max + g &&
            candidate.y_min < other.y_max + g &&
            other.y_min < candidate.y_max + g) {
          clear = false;
          break;
        }
      }
      if (clear) {
        scene.buildings.push_back(candidate);
        placed = true;
      }
    }
    if (!placed) {
      throw SceneError("could not place building " + std::to_string(n + 1) +
                       " after " + std::to_string(config.max_attempts) +
                       " attempts");
    }
  }

  constexpr double kSiteClearance = 1.0;
  for (int k = 0; k < config.site_count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts && !placed;
         ++attempt) {
      const double x = rng.Uniform(r.x_min, r.x_max);
      const double y = rng.Uniform(r.y_min, r.y_max);
      bool free = true;
      for (const Building& b : scene.buildings) {
        if (x >= b.x_min - kSiteClearance && x <= b.x_max + kSiteClearance &&
            y >= b.y_min - kSiteClearance && y <= b.y_max + kSiteClearance) {
          free = false;
          break;
        }
      }
      if (free) {
        scene.sites.push_back({x, y, config.bs_height});
        placed = true;
      }
    }
    if (!placed) {
      throw SceneError("could not place site " + std::to_string(k + 1) +
                       " on free ground");
    }
  }
  return scene;
}

bool LosVisible(const Point3& a, const Point3& b, const Scene& scene) {
  double t0 = 0.0;
  double t1 = 0.0;
  for (const Building& box : scene.buildings) {
    if (SegmentHits(a, b, box, &t0, &t1)) return false;
  }
  return true;
}

int WallsCrossed(const Point3& a, const Point3& b, const Scene& scene) {
  int walls = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  for (const Building& box : scene.buildings) {
    if (!SegmentHits(a, b, box, &t0, &t1)) continue;
    if (t0 > 0.0) ++walls;
    if (t1 < 1.0) ++walls;
  }
  return walls;
}

double PointGain(const Point3& site, const Point3& p, const Scene& scene,
                 const GainModel& model) {
  const double d = Distance(site, p);
  if (!(d > 0.0)) throw SceneError("gain requested at zero distance");
  const double amplitude = model.wavelength / (4.0 * std::numbers::pi * d);
  double gain = amplitude * amplitude;
  if (!LosVisible(site, p, scene)) {
    const int walls = WallsCrossed(site, p, scene);
    const double loss_db =
        model.nlos_base_db + model.nlos_per_wall_db * static_cast<double>(walls);
    gain *= std::pow(10.0, -loss_db / 10.0);
  }
  return gain;
}

nlohmann::json SceneToJson(const Scene& scene) {
  nlohmann::json out;
  out["bounds"] = {{"x_min", scene.bounds.x_min},
                   {"y_min", scene.bounds.y_min},
                   {"x_max", scene.bounds.x_max},
                   {"y_max", scene.bounds.y_max}};
  out["buildings"] = nlohmann::json::array();
  for (const Building& b : scene.buildings) {
    out["buildings"].push_back({{"x_min", b.x_min},
                                {"y_min", b.y_min},
                                {"x_max", b.x_max},
                                {"y_max", b.y_max},
                                {"height", b.height}});
  }
  out["sites"] = nlohmann::json::array();
  for (const Point3& s : scene.sites) {
    out["sites"].push_back({{"x", s.x}, {"y", s.y}, {"z", s.z}});
  }
  out["seed"] = scene.seed;
  return out;
}

Scene SceneFromJson(const nlohmann::json& json) {
  auto field = [](const nlohmann::json& obj, const char* key,
                  const std::string& where) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key)) {
      throw SceneError("scene file is missing \"" + where + key + "\"");
    }
    return obj.at(key);
  };
  Scene scene;
  try {
    const nlohmann::json& b = field(json, "bounds", "");
    scene.bounds = {field(b, "x_min", "bounds.").get<double>(),
                    field(b, "y_min", "bounds.").get<double>(),
                    field(b, "x_max", "bounds.").get<double>(),
                    field(b, "y_max", "bounds.").get<double>()};
    for (const nlohmann::json& item : field(json, "buildings", "")) {
      scene.buildings.push_back({field(item, "x_min", "buildings[].").get<double>(),
                                 field(item, "y_min", "buildings[].").get<double>(),
                                 field(item, "x_max", "buildings[].").get<double>(),
                                 field(item, "y_max", "buildings[].").get<double>(),
                                 field(item, "height", "buildings[].").get<double>()});
    }
    for (const nlohmann::json& item : field(json, "sites", "")) {
      scene.sites.push_back({field(item, "x", "sites[].").get<double>(),
                             field(item, "y", "sites[].").get<double>(),
                             field(item, "z", "sites[].").get<double>()});
    }
    scene.seed = json.value("seed", uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(std::string("malformed scene file: ") + e.what());
  }
  scene.Validate();
  return scene;
}

}  // namespace corridor
