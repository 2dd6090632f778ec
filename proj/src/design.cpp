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

#include "flybelt/design.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {

NminSearch find_nmin(const ConstraintBuilder& build, int n_start, int n_cap,
                     const LpOptions& opt) {
  if (n_start < 2 || n_cap < n_start) {
    throw ValidationError(fmt::format("n_min search needs 2 <= start <= cap ({}, {})", n_start,
                                      n_cap));
  }
  NminSearch out;
  auto feasible = [&](int n, LpResult* keep) {
    ++out.lp_solves;
    LpResult r = lp_feasible(build(n), opt);
    const bool ok = r.feasible();
    if (keep) {
      *keep = std::move(r);
    }
    return ok;
  };

  int lo = 1;  // largest n known infeasible (a single tap cannot cancel a mode)
  int hi = n_start;
  LpResult hi_witness;
  while (!feasible(hi, &hi_witness)) {
    lo = hi;
    if (hi >= n_cap) {
      throw NumericalError(
          fmt::format("no feasible shaper with up to {} taps; check the modal set", n_cap));
    }
    hi = std::min(2 * hi, n_cap);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    LpResult r;
    if (feasible(mid, &r)) {
      hi = mid;
      hi_witness = std::move(r);
    } else {
      lo = mid;
    }
  }
  // Re-check both sides of the boundary explicitly.
  if (!feasible(hi, nullptr) || (hi - 1 >= 2 && feasible(hi - 1, nullptr))) {
    throw NumericalError(fmt::format("n_min search is inconsistent around n = {}", hi));
  }
  out.n_min = hi;
  out.witness = std::move(hi_witness);
  return out;
}

NminSearch find_nmin(const ModalSet& modes, double ts, const LpOptions& opt) {
  modes.validate();
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw ValidationError(fmt::format("sampling period must be positive, got {}", ts));
  }
  const int start =
      std::max(2, int(std::ceil(2.0 * std::numbers::pi / (modes.omega1 * ts) - 1e-9)));
  return find_nmin([&](int n) { return build_constraints(modes, n, ts); }, start, 10 * start,
                   opt);
}

int taps_for_smoothing(int n_min, double smoothing) {
  return n_min + int(std::lround(smoothing * double(n_min)));
}

void DesignRequest::validate() const {
  modes.validate();
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw ValidationError(fmt::format("sampling period must be positive, got {}", ts));
  }
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) {
    throw ValidationError(fmt::format("smoothing factor must lie in [0, 1], got {}", smoothing));
  }
}

ShaperDesign design_shaper(const DesignRequest& req) {
  req.validate();
  const NminSearch search = find_nmin(req.modes, req.ts);
  ShaperDesign d;
  d.n_min = search.n_min;
  d.n = taps_for_smoothing(d.n_min, req.smoothing);
  const ConstraintSystem cs = build_constraints(req.modes, d.n, req.ts);
  d.qp = qp_solve(QpProblem{cs.a_eq, cs.b_eq, true});
  d.shaper.ts = req.ts;
  d.shaper.h.assign(d.qp.h.data(), d.qp.h.data() + d.qp.h.size());
  return d;
}

}  // namespace flybelt
