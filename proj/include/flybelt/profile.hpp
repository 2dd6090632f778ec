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

#ifndef FLYBELT_PROFILE_HPP_
#define FLYBELT_PROFILE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flybelt/multibody.hpp"

namespace flybelt {

enum class Strategy { kConstVelocity, kPolynomial, kTimeOptimalShaped, kH2Shaped, kCustom };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

// Commanded motor angle on the uniform grid t_k = k * ts. Between samples the
// command is linear; after the last sample it holds.
struct MotionProfile {
  double ts = 0.01;
  std::vector<double> alpha;
  Strategy strategy = Strategy::kCustom;

  double duration() const { return alpha.empty() ? 0.0 : ts * double(alpha.size() - 1); }
  double start() const { return alpha.front(); }
  double target() const { return alpha.back(); }

  // Linear interpolation on the segment that contains (t, t + eps]; the rate
  // is that segment's slope and the acceleration is zero.
  MotorSample sample(double t) const;
  // Index k of the segment [t_k, t_k+1] used for times just after t.
  std::size_t segment(double t) const;
};

}  // namespace flybelt

#endif  // FLYBELT_PROFILE_HPP_
