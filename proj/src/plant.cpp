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

#include "flybelt/plant.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(fmt::format("{} must be positive and finite, got {}", name, value));
  }
}

}  // namespace

void PlantParams::validate() const {
  for (int k = 0; k < 3; ++k) {
    require_positive(cable_length[k], "cable_length");
  }
  require_positive(arm_radius, "arm_radius");
  require_positive(belt_radius, "belt_radius");
  require_positive(belt_mass, "belt_mass");
  for (int k = 0; k < 3; ++k) {
    require_positive(belt_inertia[k], "belt_inertia");
  }
  require_positive(mcsu_mass, "mcsu_mass");
  require_positive(mcsu_inertia_zz, "mcsu_inertia_zz");
  require_positive(gravity, "gravity");
  if (!(com_offset >= 0.0) || !(com_offset < belt_radius)) {
    throw ValidationError(
        fmt::format("com_offset must lie in [0, belt_radius), got {}", com_offset));
  }
  if (!std::isfinite(buckle_angle)) {
    throw ValidationError("buckle_angle must be finite");
  }
  if (!(translational_damping >= 0.0) || !(rotational_damping >= 0.0)) {
    throw ValidationError("damping coefficients must be non-negative");
  }
}

PlantParams reference_plant() { return PlantParams{}; }

}  // namespace flybelt
