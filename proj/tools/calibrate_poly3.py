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
"""Derives the default jerk-limited move limits numerically.

The polynomial strategy uses a seven-segment (piecewise-constant jerk) move
with amax^2 = vmax * jmax, so the jerk phases exactly fill the acceleration
phase. Given the move distance, its duration and the peak rate, this script
finds jmax by root-finding on a brute-force integration of the jerk schedule,
and prints the limits that Poly3Limits::defaults() derives in closed form.

Usage: calibrate_poly3.py [--distance RAD] [--duration S] [--vmax RAD_PER_S]
"""

import argparse
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.optimize import brentq


def integrate_move(vmax, jmax, samples=200001):
  """Integrates accelerate-cruise-decelerate with amax = sqrt(vmax jmax).

  Returns (distance covered during the acceleration ramp, ramp duration).
  """
  tj = math.sqrt(vmax / jmax)
  t = np.linspace(0.0, 2.0 * tj, samples)
  acc = jmax * np.minimum(t, 2.0 * tj - t)  # triangular acceleration pulse
  vel = cumulative_trapezoid(acc, t, initial=0.0)
  return float(trapezoid(vel, t)), 2.0 * tj


def move_duration(distance, vmax, jmax):
  ramp_distance, ramp_time = integrate_move(vmax, jmax)
  cruise = (distance - 2.0 * ramp_distance) / vmax
  if cruise < 0.0:
    raise ValueError("peak rate not reached")
  return 2.0 * ramp_time + cruise


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("--distance", type=float, default=math.pi)
  parser.add_argument("--duration", type=float, default=5.3)
  parser.add_argument("--vmax", type=float, default=math.pi / 3.0)
  args = parser.parse_args()

  def excess(log_j):
    return move_duration(args.distance, args.vmax, math.exp(log_j)) - args.duration

  # Duration falls monotonically as the jerk limit rises.
  lo, hi = math.log(1e-3), math.log(1e3)
  while True:
    try:
      excess(lo)
      break
    except ValueError:
      lo += 0.5
  jmax = math.exp(brentq(excess, lo, hi, xtol=1e-12))
  amax = math.sqrt(args.vmax * jmax)
  closed_amax = 2.0 * args.vmax / (args.duration - args.distance / args.vmax)
  print(f"vmax {args.vmax:.10f} rad/s")
  print(f"amax {amax:.10f} rad/s^2   (closed form {closed_amax:.10f})")
  print(f"jmax {jmax:.10f} rad/s^3   (closed form {closed_amax**2 / args.vmax:.10f})")
  print(f"duration {move_duration(args.distance, args.vmax, jmax):.6f} s")


if __name__ == "__main__":
  main()
