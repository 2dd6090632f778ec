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

#ifndef FLYBELT_MODAL_SET_HPP_
#define FLYBELT_MODAL_SET_HPP_

namespace flybelt {

struct Mode {
  double omega = 1.0;  // natural frequency, rad/s
  double xi = 0.0;     // damping ratio
};

// The two dominant oscillatory modes, slower one first.
struct ModalSet {
  double omega1 = 2.58;
  double xi1 = 0.0;
  double omega2 = 3.55;
  double xi2 = 0.0;

  Mode first() const { return {omega1, xi1}; }
  Mode second() const { return {omega2, xi2}; }

  // Requires 0 < omega1 < omega2 and 0 <= xi < 1; throws ValidationError.
  void validate() const;
};

}  // namespace flybelt

#endif  // FLYBELT_MODAL_SET_HPP_
