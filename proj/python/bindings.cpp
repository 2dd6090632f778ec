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

// Python bindings: shaper design, motion profiles, scenario runs and modal
// identification. Traces cross the boundary as NumPy arrays.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flybelt/config.hpp"
#include "flybelt/csv.hpp"
#include "flybelt/design.hpp"
#include "flybelt/error.hpp"
#include "flybelt/modal.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/motion.hpp"
#include "flybelt/scenario.hpp"
#include "flybelt/shaper.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(py::ssize_t(v.size()), v.data());
}

std::vector<double> to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) {
    throw flybelt::ValidationError("expected a one-dimensional array");
  }
  return std::vector<double>(a.data(), a.data() + a.size());
}

flybelt::ShaperFir make_shaper(const DoubleArray& taps, double ts) {
  flybelt::ShaperFir sh{ts, to_vector(taps)};
  sh.validate(1e-9);
  return sh;
}

flybelt::Strategy strategy_from(const std::string& name) {
  const auto s = flybelt::parse_strategy(name);
  if (!s) {
    throw flybelt::ValidationError("unknown strategy '" + name + "'");
  }
  return *s;
}

py::dict metrics_dict(const flybelt::StrategyMetrics& m) {
  py::dict d;
  d["torsion_pkpk"] = m.torsion_pkpk;
  d["torsion_rms"] = m.torsion_rms;
  d["nutation_pkpk"] = m.nutation_pkpk;
  d["nutation_rms"] = m.nutation_rms;
  d["transient_time"] = m.transient_time;
  d["settling_time"] = m.settling_time ? py::cast(*m.settling_time) : py::none();
  return d;
}

py::dict run_dict(const flybelt::StrategyRun& r) {
  py::dict d;
  d["strategy"] = std::string(flybelt::strategy_name(r.strategy));
  d["metrics"] = metrics_dict(r.metrics);
  d["command"] = to_array(r.command.alpha);
  d["command_ts"] = r.command.ts;
  d["t"] = to_array(r.sim.t);
  d["alpha"] = to_array(r.sim.alpha);
  d["eps2"] = to_array(r.sim.eps2);
  d["theta2"] = to_array(r.sim.theta2);
  d["max_constraint_residual"] = r.sim.max_constraint_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Suspended-belt simulation and input-shaper design";

  py::register_exception<flybelt::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<flybelt::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<flybelt::ModalSet>(m, "ModalSet")
      .def(py::init([](double omega1, double xi1, double omega2, double xi2) {
             flybelt::ModalSet s{omega1, xi1, omega2, xi2};
             s.validate();
             return s;
           }),
           py::arg("omega1") = 2.58, py::arg("xi1") = 0.0, py::arg("omega2") = 3.55,
           py::arg("xi2") = 0.0)
      .def_readwrite("omega1", &flybelt::ModalSet::omega1)
      .def_readwrite("xi1", &flybelt::ModalSet::xi1)
      .def_readwrite("omega2", &flybelt::ModalSet::omega2)
      .def_readwrite("xi2", &flybelt::ModalSet::xi2)
      .def("__repr__", [](const flybelt::ModalSet& s) {
        return "ModalSet(omega1=" + flybelt::format_real(s.omega1) +
               ", xi1=" + flybelt::format_real(s.xi1) +
               ", omega2=" + flybelt::format_real(s.omega2) +
               ", xi2=" + flybelt::format_real(s.xi2) + ")";
      });

  m.def(
      "find_nmin",
      [](const flybelt::ModalSet& modes, double ts) {
        return flybelt::find_nmin(modes, ts).n_min;
      },
      py::arg("modes"), py::arg("ts") = 0.01,
      "Smallest tap count for which the zero-vibration system is feasible.");

  m.def(
      "design_shaper",
      [](const flybelt::ModalSet& modes, double ts, double sf) {
        const flybelt::ShaperDesign d = flybelt::design_shaper({modes, ts, sf});
        py::dict out;
        out["taps"] = to_array(d.shaper.h);
        out["ts"] = d.shaper.ts;
        out["n_min"] = d.n_min;
        out["n"] = d.n;
        out["norm"] = std::sqrt(d.qp.objective);
        return out;
      },
      py::arg("modes"), py::arg("ts") = 0.01, py::arg("sf") = 0.15,
      "Minimum-norm nonnegative shaper; returns a dict with 'taps', 'ts', 'n_min', 'n'.");

  m.def(
      "sensitivity",
      [](const DoubleArray& taps, double ts, double omega, double xi) {
        return flybelt::sensitivity(make_shaper(taps, ts), omega, xi);
      },
      py::arg("taps"), py::arg("ts"), py::arg("omega"), py::arg("xi") = 0.0,
      "Residual vibration of a mode after the impulse train.");

  m.def(
      "shaped_step",
      [](double from, double to, const DoubleArray& taps, double ts) {
        const flybelt::ShaperFir sh = make_shaper(taps, ts);
        return to_array(flybelt::shaped_profile(flybelt::step_profile(from, to, ts), sh,
                                                flybelt::Strategy::kCustom)
                            .alpha);
      },
      py::arg("start"), py::arg("target"), py::arg("taps"), py::arg("ts"),
      "Step from start to target passed through the shaper, sampled every ts.");

  m.def(
      "poly3_profile",
      [](double from, double to, double ts) {
        return to_array(
            flybelt::poly3_profile(from, to, flybelt::Poly3Limits::defaults(), ts).alpha);
      },
      py::arg("start"), py::arg("target"), py::arg("ts") = 0.01,
      "Jerk-limited move with the default limits.");

  m.def(
      "run_scenario",
      [](std::optional<std::string> config_json, std::optional<std::vector<std::string>> only) {
        flybelt::ScenarioConfig cfg;
        if (config_json) {
          cfg = flybelt::scenario_from_json(*config_json);
        }
        if (only) {
          cfg.strategies.clear();
          for (const auto& name : *only) cfg.strategies.push_back(strategy_from(name));
        }
        py::list runs;
        for (const auto& r : flybelt::run_scenario(cfg)) runs.append(run_dict(r));
        return runs;
      },
      py::arg("config_json") = py::none(), py::arg("strategies") = py::none(),
      "Simulates the repositioning scenario; one dict of traces and metrics per strategy.");

  m.def(
      "identify_modes",
      [](const DoubleArray& torsion, const DoubleArray& nutation, double dt) {
        const auto a = to_vector(torsion), b = to_vector(nutation);
        return flybelt::identify_modes(a, b, dt);
      },
      py::arg("torsion"), py::arg("nutation"), py::arg("dt"),
      "Two dominant modes from free-decay records of torsion and nutation.");

  m.def(
      "identify_reference_modes",
      []() { return flybelt::identify_modes(flybelt::free_decay(flybelt::reference_plant())); },
      "Free decay of the reference plant followed by modal identification.");
}
