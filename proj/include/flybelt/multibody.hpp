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

// Two-body index-1 DAE model of the cable-suspended belt.
//
// Generalized coordinates, six per body, in absolute form:
//
//   q_i = [X_i, Y_i, Z_i, roll_i, pitch_i, yaw_i]
//
// with the body rotation R_i = Rz(yaw) * Ry(pitch) * Rx(roll). Yaw is the spin
// about the vertical; roll and pitch are the two tilt angles. The sequence is
// regular at the hanging equilibrium (singular only at |pitch| = 90 deg).
//
// Constraint rows, in this fixed order:
//
//   0..4  body 1 revolute locks: X1, Y1, Z1, roll1, pitch1
//   5..7  cables A, B, C: |r1 - r2| - l
//   8     motor (rheonomic): yaw1 - alpha(t)
//
// eval_constraints / eval_jacobian expose the eight scleronomic rows; the motor
// row only enters the time-stepping.

#ifndef FLYBELT_MULTIBODY_HPP_
#define FLYBELT_MULTIBODY_HPP_

#include <functional>

#include <Eigen/Core>

#include "flybelt/plant.hpp"

namespace flybelt {

inline constexpr int kNumCoords = 12;
inline constexpr int kNumConstraints = 8;
inline constexpr int kNumRows = 9;  // with the motor row
inline constexpr int kFirstCableRow = 5;
inline constexpr int kMotorRow = 8;

using Vector12 = Eigen::Matrix<double, kNumCoords, 1>;
using Matrix12 = Eigen::Matrix<double, kNumCoords, kNumCoords>;
using ConstraintVector = Eigen::Matrix<double, kNumConstraints, 1>;
using ConstraintJacobian = Eigen::Matrix<double, kNumConstraints, kNumCoords>;
using RowVector = Eigen::Matrix<double, kNumRows, 1>;
using RowJacobian = Eigen::Matrix<double, kNumRows, kNumCoords>;

enum Coord : int { kX = 0, kY = 1, kZ = 2, kRoll = 3, kPitch = 4, kYaw = 5 };

// Offset of body `b` (0 = suspension unit, 1 = belt) inside q.
constexpr int body_offset(int b) { return 6 * b; }

struct BodyCoords {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct SystemState {
  Vector12 q = Vector12::Zero();
  Vector12 qdot = Vector12::Zero();

  BodyCoords body(int b) const;
  void set_body(int b, const BodyCoords& coords);
};

// Prescribed motor motion at one instant.
struct MotorSample {
  double angle = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

using MotorTrajectory = std::function<MotorSample(double)>;

// Terms of the saddle-point system
//
//   [ M   J^T ] [ qdd    ]   [ f  ]
//   [ J   0   ] [ lambda ] = [ fD ]
//
// including the motor row. f = f^E + f^V (gravity, damping and the
// quadratic-velocity inertial terms).
struct DaeWorkspace {
  Matrix12 mass = Matrix12::Zero();
  RowVector constraints = RowVector::Zero();
  RowJacobian jacobian = RowJacobian::Zero();
  Vector12 forces = Vector12::Zero();
  RowVector velocity_terms = RowVector::Zero();
};

struct DynamicsSolution {
  Vector12 qddot = Vector12::Zero();
  RowVector lambda = RowVector::Zero();

  // Cable tensions (positive = pulling). Rigid cables cannot push; a
  // negative tension is reported, never corrected.
  Eigen::Vector3d tensions() const { return lambda.segment<3>(kFirstCableRow); }
  bool compression() const { return tensions().minCoeff() < 0.0; }
};

struct StepOptions {
  double position_tolerance = 1e-12;
  int max_projection_iterations = 20;
  // KKT matrices with a reciprocal condition estimate below this are singular.
  double min_rcond = 1e-14;
};

// Level hang: body 1 at the origin, belt below it with x2 along X, all three
// cables satisfied, zero velocity. Throws ValidationError when the cables
// cannot reach.
SystemState build_initial_state(const PlantParams& p);

// Static equilibrium of the belt for the body-1 pose stored in `guess`.
// Velocities are zeroed. Newton on the static KKT conditions.
SystemState settle_equilibrium(const SystemState& guess, const PlantParams& p);

ConstraintVector eval_constraints(const SystemState& s, const PlantParams& p);
ConstraintJacobian eval_jacobian(const SystemState& s, const PlantParams& p);

DaeWorkspace assemble(const SystemState& s, const PlantParams& p, const MotorSample& motor);
DynamicsSolution solve_dynamics(const SystemState& s, const PlantParams& p,
                                const MotorSample& motor, const StepOptions& opt = {});

// One RK4 step of length dt starting at time t0, followed by projection of
// position and velocity onto the constraint manifold at t0 + dt. The velocity
// is first made consistent with motor(t0).rate through a mass-weighted
// projection, which models a kink in the motor trajectory as an impulse.
SystemState step(const SystemState& s, const PlantParams& p, const MotorTrajectory& motor,
                 double t0, double dt, const StepOptions& opt = {});

// Same, with the motor following the quadratic alpha + rate*t + accel*t^2/2
// over the step.
SystemState step(const SystemState& s, const PlantParams& p, const MotorSample& motor, double dt,
                 const StepOptions& opt = {});

// Projects q onto c(q, motor_angle) = 0 and qdot onto J qdot = [0..0, rate].
SystemState project(const SystemState& s, const PlantParams& p, double motor_angle,
                    double motor_rate, const StepOptions& opt = {});

Eigen::Matrix3d rotation(double roll, double pitch, double yaw);

// Global position of the buckle P2.
Eigen::Vector3d buckle_position(const SystemState& s, const PlantParams& p);

// Angle from the XZ plane to the plane through Z and P2, in (-pi, pi].
double torsion_angle(const SystemState& s, const PlantParams& p);

// Tilt of the belt axis z2 from the global vertical.
double nutation_angle(const SystemState& s);

// Kinetic plus gravitational potential energy of both bodies.
double mechanical_energy(const SystemState& s, const PlantParams& p);

}  // namespace flybelt

#endif  // FLYBELT_MULTIBODY_HPP_
