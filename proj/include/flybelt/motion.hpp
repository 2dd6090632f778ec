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

// Motor command generation: rate-limited and jerk-limited reference moves,
// shaped steps, and the causal command pipeline fed by asynchronous angle
// updates.

#ifndef FLYBELT_MOTION_HPP_
#define FLYBELT_MOTION_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flybelt/profile.hpp"
#include "flybelt/shaper.hpp"

namespace flybelt {

// Equivalent of `requested` closest to `current`: the move lies in (-pi, pi],
// so a half turn goes in the positive direction.
double shortest_path_target(double current, double requested);

// Constant-rate move sampled at ts; the last segment is shortened so the
// final sample lands exactly on `to`.
MotionProfile const_velocity_profile(double from, double to, double rate, double ts);

struct Poly3Limits {
  double vmax = 0.0;
  double amax = 0.0;
  double jmax = 0.0;

  void validate() const;

  // Limits with amax^2 = vmax jmax that make a rest-to-rest move of
  // `distance` take exactly `duration`.
  static Poly3Limits for_duration(double distance, double duration, double vmax);
  // Half turn in 5.3 s at pi/3 rad/s peak rate.
  static Poly3Limits defaults();
};

// Phase durations of a seven-segment rest-to-rest move.
struct Poly3Timing {
  double tj = 0.0;  // each jerk phase
  double ta = 0.0;  // acceleration (and deceleration) phase
  double tv = 0.0;  // cruise
  double vlim = 0.0;
  double alim = 0.0;

  double total() const { return 2.0 * ta + tv; }
};

Poly3Timing poly3_timing(double distance, const Poly3Limits& lim);

// Jerk-limited move; throws ValidationError if it would last longer than
// `max_duration`.
MotionProfile poly3_profile(double from, double to, const Poly3Limits& lim, double ts,
                            double max_duration = 120.0);

// Two samples: from, then to.
MotionProfile step_profile(double from, double to, double ts);

// Streams `raw`, held at its final value for n - 1 extra samples, through the
// shaper with base raw.start().
MotionProfile shaped_profile(const MotionProfile& raw, const ShaperFir& sh, Strategy tag);

struct LimiterConfig {
  int steps_per_rev = 10000;
  bool quantize = false;
};

struct AngleUpdate {
  double t = 0.0;
  double angle = 0.0;
};

// Causal command chain: zero-order hold of the latest update on the shaper
// clock, shortest-path unwrapping, optional step quantization, then the
// shaper. Updates must be time ordered. A negative duration runs until the
// filter has flushed the last update.
MotionProfile run_pipeline(std::span<const AngleUpdate> updates, const ShaperFir& sh,
                           const LimiterConfig& limiter, double initial = 0.0,
                           double duration = -1.0);

// CSV with header t,alpha.
std::string profile_csv(const MotionProfile& p);
MotionProfile profile_from_csv(std::string_view text);

// CSV with header t,angle.
std::vector<AngleUpdate> updates_from_csv(std::string_view text);
std::string updates_csv(std::span<const AngleUpdate> updates);

}  // namespace flybelt

#endif  // FLYBELT_MOTION_HPP_
