// Copyright 2026 The flybelt Authors
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

// JSON configuration files. Every key is optional and defaults to the
// reference scenario; unknown keys are rejected so typos do not pass
// silently.
//
//   {
//     "version": 1,
//     "plant": {"cable_length": [1.5, 1.5, 1.5], "arm_radius": 0.32, ...},
//     "maneuver": {"from": 0.0, "to": 3.14159},
//     "simulation": {"dt": 0.001, "horizon": 12.0, "settle_band_deg": 2.0,
//                    "settle_hold": 2.5},
//     "command": {"ts": 0.01, "rate_limit": 1.0472,
//                 "poly": {"vmax": ..., "amax": ..., "jmax": ...}},
//     "shaper": {"modes": {"omega1": 2.58, "xi1": 0, "omega2": 3.55, "xi2": 0},
//                "time_optimal_sf": 0.0, "h2_sf": 0.15},
//     "strategies": ["const-velocity", "polynomial", "t-opt-shaped", "h2-opt-shaped"]
//   }

#ifndef FLYBELT_CONFIG_HPP_
#define FLYBELT_CONFIG_HPP_

#include <string>
#include <string_view>

#include "flybelt/plant.hpp"
#include "flybelt/scenario.hpp"

namespace flybelt {

inline constexpr int kConfigVersion = 1;

// Throws ValidationError on malformed JSON, unknown keys, wrong types or
// values that fail validation.
ScenarioConfig scenario_from_json(std::string_view json);
std::string scenario_to_json(const ScenarioConfig& cfg);

// Accepts either a bare plant object or a scenario file with a "plant" key.
PlantParams plant_from_json(std::string_view json);
std::string plant_to_json(const PlantParams& p);

}  // namespace flybelt

#endif  // FLYBELT_CONFIG_HPP_
