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
"""Suspended-belt simulation and input-shaper design."""

from flybelt._core import (
    ModalSet,
    NumericalError,
    ValidationError,
    design_shaper,
    find_nmin,
    identify_modes,
    identify_reference_modes,
    poly3_profile,
    run_scenario,
    sensitivity,
    shaped_step,
)

__all__ = [
    "ModalSet",
    "NumericalError",
    "ValidationError",
    "design_shaper",
    "find_nmin",
    "identify_modes",
    "identify_reference_modes",
    "poly3_profile",
    "run_scenario",
    "sensitivity",
    "shaped_step",
]
