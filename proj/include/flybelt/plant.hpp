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

#ifndef FLYBELT_PLANT_HPP_
#define FLYBELT_PLANT_HPP_

#include <array>

#include <Eigen/Core>

namespace flybelt {

// Physical description of the suspension unit (body 1) and the belt (body 2).
//
// Body 1 carries three anchor arms of length arm_radius at local angles
// buckle_angle + {0, 120, 240} deg. The belt carries the matching cable
// attachments on its circumference at the same local angles, and the buckle
// P2 on its local x axis. The belt's centre of mass sits on x2 at com_offset
// from the belt centre O2. Inertias are principal moments about the centre of
// mass, axes aligned with the body frame.
struct PlantParams {
  std::array<double, 3> cable_length{1.5, 1.5, 1.5};  // m, cables A, B, C
  double arm_radius = 0.32;                            // m
  double belt_radius = 0.15;                           // m
  double belt_mass = 0.147;                            // kg
  double com_offset = 0.015;                           // m
  Eigen::Vector3d belt_inertia{0.0015, 0.0018, 0.0033};  // kg m^2
  double buckle_angle = 0.0;                           // rad

  // Body 1 follows the motor exactly, so its mass properties never reach the
  // belt dynamics. They only need to keep the mass matrix regular.
  double mcsu_mass = 1.0;         // kg
  double mcsu_inertia_zz = 0.01;  // kg m^2

  double gravity = 9.81;  // m/s^2

  // Optional viscous damping, zero by default. Translational damping acts on
  // the belt centre-of-mass velocity; rotational damping on the belt angular
  // velocity relative to body 1.
  double translational_damping = 0.0;  // N s/m
  double rotational_damping = 0.0;     // N m s/rad

  // Throws ValidationError on non-physical values.
  void validate() const;
};

// Parameters of the reference installation.
PlantParams reference_plant();

}  // namespace flybelt

#endif  // FLYBELT_PLANT_HPP_
