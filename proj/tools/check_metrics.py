#!/usr/bin/env python3
# Copyright 2026 The flybelt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recomputes a `flybelt compare` report from its exported CSV traces.

Usage: check_metrics.py OUT_DIR [--tol 1e-9]

Every metric in OUT_DIR/metrics.json is recomputed with numpy from
OUT_DIR/<strategy>.csv and OUT_DIR/<strategy>_command.csv and compared to the
reported value. Exits 0 when all agree, 1 otherwise.
"""

import argparse
import json
import math
import pathlib
import sys

import numpy as np


def load_csv(path):
  data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
  return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def recompute(trace, command, band_deg, hold):
  t, alpha = trace["t"], trace["alpha"]
  eps2, theta2 = trace["eps2"], trace["theta2"]
  n = len(t)
  # Command arrival: first sample of the final constant stretch of alpha.
  changed = np.nonzero(alpha != alpha[-1])[0]
  start = 0 if changed.size == 0 else changed[-1] + 1
  torsion = np.degrees(eps2 - eps2[0] - (alpha[-1] - alpha[0]))
  nutation = np.degrees(theta2 - theta2[0])
  window_t, window_n = torsion[start:], nutation[start:]

  outside = np.nonzero(np.abs(torsion) > band_deg)[0]
  settling = None
  if outside.size == 0:
    settling = t[0]
  elif outside[-1] + 1 < n:
    settling = t[outside[-1] + 1]
  if settling is not None and t[-1] - settling < hold - 1e-12:
    settling = None

  tension = np.column_stack([trace["tensionA"], trace["tensionB"], trace["tensionC"]])
  return {
      "torsion_pkpk": np.ptp(window_t),
      "torsion_rms": math.sqrt(np.mean(window_t**2)),
      "nutation_pkpk": np.ptp(window_n),
      "nutation_rms": math.sqrt(np.mean(window_n**2)),
      "transient_time": t[start],
      "settling_time": settling,
      "command_duration": command["t"][-1],
      "compression_samples": int(np.count_nonzero((tension < 0).any(axis=1))),
  }


def command_matches_trace(trace, command, atol):
  """The simulated alpha must pass through every command sample."""
  idx = np.searchsorted(trace["t"], command["t"] - 1e-9)
  idx = idx[idx < len(trace["t"])]
  return np.allclose(trace["alpha"][idx], command["alpha"][: len(idx)], rtol=0, atol=atol)


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("out_dir", type=pathlib.Path)
  parser.add_argument("--tol", type=float, default=1e-9)
  args = parser.parse_args()

  report = json.loads((args.out_dir / "metrics.json").read_text())
  if report.get("status") != "complete":
    print(f"FAIL report status is {report.get('status')!r}: {report.get('error', '')}")
    return 1
  if not report["strategies"]:
    print("FAIL report lists no strategies")
    return 1

  failures = 0
  for entry in report["strategies"]:
    name = entry["strategy"]
    trace = load_csv(args.out_dir / f"{name}.csv")
    command = load_csv(args.out_dir / f"{name}_command.csv")
    mine = recompute(trace, command, report["settle_band_deg"], report["settle_hold"])
    problems = []
    for key, value in mine.items():
      theirs = entry[key]
      if value is None or theirs is None:
        if (value is None) != (theirs is None):
          problems.append(f"{key} {theirs} vs {value}")
      elif abs(theirs - value) > args.tol * max(1.0, abs(value)):
        problems.append(f"{key} {theirs!r} vs {value!r}")
    if not command_matches_trace(trace, command, 1e-12):
      problems.append("traced alpha does not pass through the command samples")
    if abs(trace["t"][-1] - report["horizon"]) > 1e-9:
      problems.append(f"trace ends at {trace['t'][-1]}, horizon {report['horizon']}")
    if problems:
      failures += 1
      print(f"FAIL {name}: " + "; ".join(problems))
    else:
      print(f"ok   {name}: torsion pk-pk {mine['torsion_pkpk']:.4f} deg, "
            f"rms {mine['torsion_rms']:.4f} deg")
  return 1 if failures else 0


if __name__ == "__main__":
  sys.exit(main())
