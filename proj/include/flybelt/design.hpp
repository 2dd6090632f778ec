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

// Shaper synthesis: the shortest feasible filter length by bisection over LP
// feasibility, then the minimum-energy filter of the requested length.

#ifndef FLYBELT_DESIGN_HPP_
#define FLYBELT_DESIGN_HPP_

#include <functional>

#include "flybelt/lp.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/qp.hpp"
#include "flybelt/shaper.hpp"

namespace flybelt {

using ConstraintBuilder = std::function<ConstraintSystem(int n)>;

struct NminSearch {
  int n_min = 0;
  int lp_solves = 0;
  LpResult witness;  // feasible point at n_min
};

// Smallest n with a feasible constraint system, assuming feasibility is
// monotone in n. The upper bound starts at `n_start`, doubles while
// infeasible and is capped at `n_cap`; beyond that NumericalError is thrown.
// Feasibility at n_min and infeasibility at n_min - 1 are checked before
// returning.
NminSearch find_nmin(const ConstraintBuilder& build, int n_start, int n_cap,
                     const LpOptions& opt = {});

// Dual-mode robust system: starts at ceil(2 pi / (omega1 ts)), capped at ten
// times that.
NminSearch find_nmin(const ModalSet& modes, double ts, const LpOptions& opt = {});

// n = n_min + round(s_f n_min).
int taps_for_smoothing(int n_min, double smoothing);

struct DesignRequest {
  ModalSet modes;
  double ts = 0.01;
  double smoothing = 0.0;  // s_f in [0, 1]: n runs from n_min to 2 n_min

  void validate() const;
};

struct ShaperDesign {
  ShaperFir shaper;
  int n_min = 0;
  int n = 0;
  QpResult qp;
};

ShaperDesign design_shaper(const DesignRequest& req);

}  // namespace flybelt

#endif  // FLYBELT_DESIGN_HPP_
