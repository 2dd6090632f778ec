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

#include "flybelt/multibody.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {
namespace {

using Matrix36 = Eigen::Matrix<double, 3, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using KktMatrix = Eigen::Matrix<double, kNumCoords + kNumRows, kNumCoords + kNumRows>;
using KktVector = Eigen::Matrix<double, kNumCoords + kNumRows, 1>;

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Orientation and angular-velocity kinematics of one body.
struct BodyFrame {
  Eigen::Vector3d origin;
  Eigen::Vector3d velocity;
  Eigen::Matrix3d R;      // local -> global
  Eigen::Matrix3d S;      // angle rates -> global angular velocity
  Eigen::Vector3d omega;  // global angular velocity
  Eigen::Vector3d bias;   // omega_dot - S * angle_accel

  BodyFrame(const Vector12& q, const Vector12& qdot, int b) {
    const int o = body_offset(b);
    origin = q.segment<3>(o);
    velocity = qdot.segment<3>(o);
    const double roll = q[o + kRoll], pitch = q[o + kPitch], yaw = q[o + kYaw];
    R = rotation(roll, pitch, yaw);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    const Eigen::Vector3d a(cy * cp, sy * cp, -sp);  // roll axis
    const Eigen::Vector3d c(0.0, 0.0, 1.0);          // yaw axis
    const Eigen::Vector3d bb(-sy, cy, 0.0);          // pitch axis
    S.col(0) = a;
    S.col(1) = bb;
    S.col(2) = c;
    const double rd = qdot[o + kRoll], pd = qdot[o + kPitch], yd = qdot[o + kYaw];
    omega = S * Eigen::Vector3d(rd, pd, yd);
    bias = rd * (yd * c + pd * bb).cross(a) + pd * (yd * c).cross(bb);
  }

  // Global position of a body-fixed point given in local coordinates.
  Eigen::Vector3d point(const Eigen::Vector3d& local) const { return origin + R * local; }

  // d(point)/d(body coords), 3x6.
  Matrix36 point_jacobian(const Eigen::Vector3d& rho) const {
    Matrix36 j;
    j.leftCols<3>().setIdentity();
    j.rightCols<3>() = -skew(rho) * S;
    return j;
  }

  Eigen::Vector3d point_velocity(const Eigen::Vector3d& rho) const {
    return velocity + omega.cross(rho);
  }

  // Velocity-quadratic part of the point acceleration.
  Eigen::Vector3d point_accel_bias(const Eigen::Vector3d& rho) const {
    return bias.cross(rho) + omega.cross(omega.cross(rho));
  }
};

struct BodyInertia {
  double mass;
  Eigen::Vector3d com;        // local
  Eigen::Vector3d principal;  // about the CoM, local axes
};

BodyInertia inertia_of(const PlantParams& p, int b) {
  if (b == 0) {
    return {p.mcsu_mass, Eigen::Vector3d::Zero(),
            Eigen::Vector3d(0.5 * p.mcsu_inertia_zz, 0.5 * p.mcsu_inertia_zz, p.mcsu_inertia_zz)};
  }
  return {p.belt_mass, Eigen::Vector3d(p.com_offset, 0.0, 0.0), p.belt_inertia};
}

// Cable attachment points in local coordinates; identical angles on both
// bodies, radius differs.
std::array<Eigen::Vector3d, 3> attachments(const PlantParams& p, int b) {
  const double r = (b == 0) ? p.arm_radius : p.belt_radius;
  std::array<Eigen::Vector3d, 3> pts;
  for (int k = 0; k < 3; ++k) {
    const double a = p.buckle_angle + 2.0 * std::numbers::pi * k / 3.0;
    pts[k] = Eigen::Vector3d(r * std::cos(a), r * std::sin(a), 0.0);
  }
  return pts;
}

struct CableGeometry {
  Eigen::Vector3d delta;  // r1 - r2
  double length;
  Eigen::Vector3d dir;
  Eigen::Vector3d rho1, rho2;
};

CableGeometry cable(const BodyFrame& f1, const BodyFrame& f2, const Eigen::Vector3d& u1,
                    const Eigen::Vector3d& u2) {
  CableGeometry g;
  g.rho1 = f1.R * u1;
  g.rho2 = f2.R * u2;
  g.delta = (f1.origin + g.rho1) - (f2.origin + g.rho2);
  g.length = g.delta.norm();
  g.dir = g.delta / g.length;
  return g;
}

RowVector constraint_rows(const Vector12& q, const PlantParams& p, double motor_angle) {
  RowVector c;
  c[0] = q[kX];
  c[1] = q[kY];
  c[2] = q[kZ];
  c[3] = q[kRoll];
  c[4] = q[kPitch];
  const BodyFrame f1(q, Vector12::Zero(), 0), f2(q, Vector12::Zero(), 1);
  const auto u1 = attachments(p, 0), u2 = attachments(p, 1);
  for (int k = 0; k < 3; ++k) {
    c[kFirstCableRow + k] = (f1.point(u1[k]) - f2.point(u2[k])).norm() - p.cable_length[k];
  }
  c[kMotorRow] = q[kYaw] - motor_angle;
  return c;
}

RowJacobian jacobian_rows(const Vector12& q, const PlantParams& p) {
  RowJacobian j = RowJacobian::Zero();
  for (int r = 0; r < 5; ++r) {
    j(r, r) = 1.0;
  }
  j(kMotorRow, kYaw) = 1.0;
  const BodyFrame f1(q, Vector12::Zero(), 0), f2(q, Vector12::Zero(), 1);
  const auto u1 = attachments(p, 0), u2 = attachments(p, 1);
  for (int k = 0; k < 3; ++k) {
    const CableGeometry g = cable(f1, f2, u1[k], u2[k]);
    j.block<1, 6>(kFirstCableRow + k, body_offset(0)) =
        g.dir.transpose() * f1.point_jacobian(g.rho1);
    j.block<1, 6>(kFirstCableRow + k, body_offset(1)) =
        -g.dir.transpose() * f2.point_jacobian(g.rho2);
  }
  return j;
}

KktMatrix kkt_matrix(const Matrix12& mass, const RowJacobian& jac) {
  KktMatrix k = KktMatrix::Zero();
  k.topLeftCorner<kNumCoords, kNumCoords>() = mass;
  k.topRightCorner<kNumCoords, kNumRows>() = jac.transpose();
  k.bottomLeftCorner<kNumRows, kNumCoords>() = jac;
  return k;
}

Eigen::PartialPivLU<KktMatrix> factor_kkt(const KktMatrix& k, const StepOptions& opt,
                                          const Vector12& q) {
  Eigen::PartialPivLU<KktMatrix> lu(k);
  const double rc = lu.rcond();
  if (!(rc >= opt.min_rcond)) {
    throw NumericalError(fmt::format(
        "singular KKT matrix (rcond {:.3g}) at belt pose X={:.6g} Y={:.6g} Z={:.6g} "
        "roll={:.6g} pitch={:.6g} yaw={:.6g}",
        rc, q[6 + kX], q[6 + kY], q[6 + kZ], q[6 + kRoll], q[6 + kPitch], q[6 + kYaw]));
  }
  return lu;
}

Matrix12 mass_matrix(const Vector12& q, const PlantParams& p) {
  Matrix12 m = Matrix12::Zero();
  for (int b = 0; b < 2; ++b) {
    const BodyFrame f(q, Vector12::Zero(), b);
    const BodyInertia in = inertia_of(p, b);
    const Eigen::Vector3d rc = f.R * in.com;
    const Eigen::Matrix3d ig = f.R * in.principal.asDiagonal() * f.R.transpose();
    const Eigen::Matrix3d sk = skew(rc);
    Matrix6 mb;
    mb.topLeftCorner<3, 3>() = in.mass * Eigen::Matrix3d::Identity();
    mb.topRightCorner<3, 3>() = -in.mass * sk * f.S;
    mb.bottomLeftCorner<3, 3>() = mb.topRightCorner<3, 3>().transpose();
    mb.bottomRightCorner<3, 3>() = f.S.transpose() * (ig - in.mass * sk * sk) * f.S;
    m.block<6, 6>(body_offset(b), body_offset(b)) = mb;
  }
  return m;
}

Eigen::Vector3d gravity_vector(const PlantParams& p) { return {0.0, 0.0, -p.gravity}; }

}  // namespace

BodyCoords SystemState::body(int b) const {
  const int o = body_offset(b);
  return {q.segment<3>(o), q[o + kRoll], q[o + kPitch], q[o + kYaw]};
}

void SystemState::set_body(int b, const BodyCoords& coords) {
  const int o = body_offset(b);
  q.segment<3>(o) = coords.position;
  q[o + kRoll] = coords.roll;
  q[o + kPitch] = coords.pitch;
  q[o + kYaw] = coords.yaw;
}

Eigen::Matrix3d rotation(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Eigen::Matrix3d rz, ry, rx;
  rz << cy, -sy, 0.0, sy, cy, 0.0, 0.0, 0.0, 1.0;
  ry << cp, 0.0, sp, 0.0, 1.0, 0.0, -sp, 0.0, cp;
  rx << 1.0, 0.0, 0.0, 0.0, cr, -sr, 0.0, sr, cr;
  return rz * ry * rx;
}

SystemState build_initial_state(const PlantParams& p) {
  p.validate();
  const double gap = std::abs(p.arm_radius - p.belt_radius);
  for (int k = 0; k < 3; ++k) {
    if (!(p.cable_length[k] > gap)) {
      throw ValidationError(fmt::format(
          "cable {} of length {} m cannot span the radial gap {} m between arm and belt",
          "ABC"[k], p.cable_length[k], gap));
    }
  }
  SystemState s;
  // Level belt: only its centre (X2, Y2, Z2) is unknown. Equal cables give
  // the closed form; Newton handles the general case from there.
  const double lbar = (p.cable_length[0] + p.cable_length[1] + p.cable_length[2]) / 3.0;
  Eigen::Vector3d centre(0.0, 0.0, -std::sqrt(lbar * lbar - gap * gap));
  const auto u1 = attachments(p, 0), u2 = attachments(p, 1);
  for (int it = 0; it < 50; ++it) {
    Eigen::Vector3d r;
    Eigen::Matrix3d j;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d d = u1[k] - (centre + u2[k]);
      r[k] = d.norm() - p.cable_length[k];
      j.row(k) = -d.transpose() / d.norm();
    }
    if (r.cwiseAbs().maxCoeff() < 1e-14) {
      break;
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(j);
    if (!lu.isInvertible()) {
      throw ValidationError("cable lengths admit no level hang");
    }
    centre -= lu.solve(r);
  }
  if (!centre.allFinite() || centre.z() >= 0.0) {
    throw ValidationError("cable lengths admit no level hang below the suspension unit");
  }
  s.q.segment<3>(body_offset(1)) = centre;
  const ConstraintVector c = eval_constraints(s, p);
  if (c.cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError(fmt::format(
        "cable lengths admit no level hang (residual {:.3g} m)", c.cwiseAbs().maxCoeff()));
  }
  return s;
}

ConstraintVector eval_constraints(const SystemState& s, const PlantParams& p) {
  return constraint_rows(s.q, p, 0.0).head<kNumConstraints>();
}

ConstraintJacobian eval_jacobian(const SystemState& s, const PlantParams& p) {
  return jacobian_rows(s.q, p).topRows<kNumConstraints>();
}

DaeWorkspace assemble(const SystemState& s, const PlantParams& p, const MotorSample& motor) {
  DaeWorkspace w;
  w.mass = mass_matrix(s.q, p);
  w.constraints = constraint_rows(s.q, p, motor.angle);
  w.jacobian = jacobian_rows(s.q, p);

  const BodyFrame f1(s.q, s.qdot, 0), f2(s.q, s.qdot, 1);
  const Eigen::Vector3d relative_spin = f2.omega - f1.omega;
  for (int b = 0; b < 2; ++b) {
    const BodyFrame& f = (b == 0) ? f1 : f2;
    const BodyInertia in = inertia_of(p, b);
    const Eigen::Vector3d rc = f.R * in.com;
    const Eigen::Matrix3d ig = f.R * in.principal.asDiagonal() * f.R.transpose();
    Eigen::Vector3d force = in.mass * gravity_vector(p);
    Eigen::Vector3d torque = Eigen::Vector3d::Zero();
    if (b == 1) {
      force -= p.translational_damping * f.point_velocity(rc);
      torque -= p.rotational_damping * relative_spin;
    } else {
      torque += p.rotational_damping * relative_spin;
    }
    const Eigen::Vector3d net = force - in.mass * f.point_accel_bias(rc);
    const Eigen::Vector3d moment =
        rc.cross(net) + torque - ig * f.bias - f.omega.cross(ig * f.omega);
    w.forces.segment<3>(body_offset(b)) = net;
    w.forces.segment<3>(body_offset(b) + 3) = f.S.transpose() * moment;
  }

  const auto u1 = attachments(p, 0), u2 = attachments(p, 1);
  for (int k = 0; k < 3; ++k) {
    const CableGeometry g = cable(f1, f2, u1[k], u2[k]);
    const Eigen::Vector3d ddot = f1.point_velocity(g.rho1) - f2.point_velocity(g.rho2);
    const double along = g.dir.dot(ddot);
    const double normal_rate = (ddot.squaredNorm() - along * along) / g.length;
    const double bias = g.dir.dot(f1.point_accel_bias(g.rho1) - f2.point_accel_bias(g.rho2));
    w.velocity_terms[kFirstCableRow + k] = -bias - normal_rate;
  }
  w.velocity_terms[kMotorRow] = motor.accel;
  return w;
}

DynamicsSolution solve_dynamics(const SystemState& s, const PlantParams& p,
                                const MotorSample& motor, const StepOptions& opt) {
  const DaeWorkspace w = assemble(s, p, motor);
  KktVector rhs;
  rhs << w.forces, w.velocity_terms;
  const auto lu = factor_kkt(kkt_matrix(w.mass, w.jacobian), opt, s.q);
  const KktVector x = lu.solve(rhs);
  DynamicsSolution sol;
  sol.qddot = x.head<kNumCoords>();
  sol.lambda = x.tail<kNumRows>();
  return sol;
}

SystemState project(const SystemState& s, const PlantParams& p, double motor_angle,
                    double motor_rate, const StepOptions& opt) {
  SystemState out = s;
  int it = 0;
  double residual = constraint_rows(out.q, p, motor_angle).cwiseAbs().maxCoeff();
  while (residual > opt.position_tolerance) {
    if (++it > opt.max_projection_iterations || !std::isfinite(residual)) {
      throw NumericalError(fmt::format(
          "constraint projection did not converge in {} iterations (residual {:.3g})",
          opt.max_projection_iterations, residual));
    }
    const RowVector c = constraint_rows(out.q, p, motor_angle);
    const RowJacobian j = jacobian_rows(out.q, p);
    const Eigen::Matrix<double, kNumRows, kNumRows> jjt = j * j.transpose();
    out.q -= j.transpose() * jjt.ldlt().solve(c);
    const double next = constraint_rows(out.q, p, motor_angle).cwiseAbs().maxCoeff();
    // Round-off floor reached well inside the contract.
    if (next >= residual && next < 1e3 * opt.position_tolerance) {
      residual = next;
      break;
    }
    residual = next;
  }

  const RowJacobian j = jacobian_rows(out.q, p);
  RowVector target = RowVector::Zero();
  target[kMotorRow] = motor_rate;
  if ((j * out.qdot - target).cwiseAbs().maxCoeff() > 0.0) {
    const Matrix12 m = mass_matrix(out.q, p);
    KktVector rhs;
    rhs << m * out.qdot, target;
    const auto lu = factor_kkt(kkt_matrix(m, j), opt, out.q);
    out.qdot = lu.solve(rhs).head<kNumCoords>();
  }
  return out;
}

SystemState step(const SystemState& s, const PlantParams& p, const MotorTrajectory& motor,
                 double t0, double dt, const StepOptions& opt) {
  if (!(dt > 0.0)) {
    throw ValidationError("step size must be positive");
  }
  const MotorSample m0 = motor(t0);
  // Velocity consistent with the motor rate that holds over this step.
  SystemState start = s;
  {
    const RowJacobian j = jacobian_rows(s.q, p);
    RowVector target = RowVector::Zero();
    target[kMotorRow] = m0.rate;
    if ((j * s.qdot - target).cwiseAbs().maxCoeff() > 1e-13) {
      const Matrix12 m = mass_matrix(s.q, p);
      KktVector rhs;
      rhs << m * s.qdot, target;
      start.qdot = factor_kkt(kkt_matrix(m, j), opt, s.q).solve(rhs).head<kNumCoords>();
    }
  }

  auto accel = [&](const Vector12& q, const Vector12& v, double t) {
    SystemState st;
    st.q = q;
    st.qdot = v;
    return solve_dynamics(st, p, motor(t), opt).qddot;
  };
  const Vector12& q0 = start.q;
  const Vector12& v0 = start.qdot;
  const Vector12 a1 = accel(q0, v0, t0);
  const Vector12 q1 = q0 + 0.5 * dt * v0, v1 = v0 + 0.5 * dt * a1;
  const Vector12 a2 = accel(q1, v1, t0 + 0.5 * dt);
  const Vector12 q2 = q0 + 0.5 * dt * v1, v2 = v0 + 0.5 * dt * a2;
  const Vector12 a3 = accel(q2, v2, t0 + 0.5 * dt);
  const Vector12 q3 = q0 + dt * v2, v3 = v0 + dt * a3;
  const Vector12 a4 = accel(q3, v3, t0 + dt);

  SystemState next;
  next.q = q0 + dt / 6.0 * (v0 + 2.0 * v1 + 2.0 * v2 + v3);
  next.qdot = v0 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  const MotorSample m1 = motor(t0 + dt);
  return project(next, p, m1.angle, m1.rate, opt);
}

SystemState step(const SystemState& s, const PlantParams& p, const MotorSample& motor, double dt,
                 const StepOptions& opt) {
  const MotorTrajectory quadratic = [motor](double t) {
    return MotorSample{motor.angle + motor.rate * t + 0.5 * motor.accel * t * t,
                       motor.rate + motor.accel * t, motor.accel};
  };
  return step(s, p, quadratic, 0.0, dt, opt);
}

SystemState settle_equilibrium(const SystemState& guess, const PlantParams& p) {
  p.validate();
  using Vector9 = Eigen::Matrix<double, 9, 1>;
  using Matrix9 = Eigen::Matrix<double, 9, 9>;
  SystemState s = guess;
  s.qdot.setZero();

  // Unknowns: belt coordinates and the three cable multipliers.
  auto residual = [&](const Vector9& x) {
    SystemState st = s;
    st.q.segment<6>(body_offset(1)) = x.head<6>();
    const DaeWorkspace w = assemble(st, p, MotorSample{st.q[kYaw], 0.0, 0.0});
    Vector9 r;
    r.head<6>() = w.forces.segment<6>(body_offset(1)) -
                  w.jacobian.block<3, 6>(kFirstCableRow, body_offset(1)).transpose() * x.tail<3>();
    r.tail<3>() = w.constraints.segment<3>(kFirstCableRow);
    return r;
  };

  Vector9 x;
  x.head<6>() = s.q.segment<6>(body_offset(1));
  x.tail<3>().setConstant(p.belt_mass * p.gravity / 3.0);
  Vector9 r = residual(x);
  for (int it = 0; it < 60 && r.cwiseAbs().maxCoeff() > 1e-14; ++it) {
    Matrix9 jac;
    for (int i = 0; i < 9; ++i) {
      const double h = (i < 6) ? 1e-7 : 1e-6;
      Vector9 xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      jac.col(i) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Vector9 dx = jac.fullPivLu().solve(r);
    // Backtrack when a full Newton step increases the residual.
    double scale = 1.0;
    Vector9 trial = x - dx;
    Vector9 rt = residual(trial);
    while (rt.norm() > r.norm() && scale > 1e-4) {
      scale *= 0.5;
      trial = x - scale * dx;
      rt = residual(trial);
    }
    if (scale <= 1e-4) {
      break;
    }
    x = trial;
    r = rt;
  }
  if (r.cwiseAbs().maxCoeff() > 1e-9) {
    throw NumericalError(
        fmt::format("static equilibrium not found (residual {:.3g})", r.cwiseAbs().maxCoeff()));
  }
  s.q.segment<6>(body_offset(1)) = x.head<6>();
  return project(s, p, s.q[kYaw], 0.0);
}

Eigen::Vector3d buckle_position(const SystemState& s, const PlantParams& p) {
  const BodyFrame f(s.q, s.qdot, 1);
  return f.point(Eigen::Vector3d(p.belt_radius, 0.0, 0.0));
}

double torsion_angle(const SystemState& s, const PlantParams& p) {
  const Eigen::Vector3d b = buckle_position(s, p);
  return std::atan2(b.y(), b.x());
}

double nutation_angle(const SystemState& s) {
  const int o = body_offset(1);
  const Eigen::Matrix3d r = rotation(s.q[o + kRoll], s.q[o + kPitch], s.q[o + kYaw]);
  return std::atan2(std::hypot(r(0, 2), r(1, 2)), r(2, 2));
}

double mechanical_energy(const SystemState& s, const PlantParams& p) {
  double potential = 0.0;
  for (int b = 0; b < 2; ++b) {
    const BodyFrame f(s.q, s.qdot, b);
    const BodyInertia in = inertia_of(p, b);
    potential += in.mass * p.gravity * f.point(in.com).z();
  }
  return 0.5 * s.qdot.dot(mass_matrix(s.q, p) * s.qdot) + potential;
}

}  // namespace flybelt
