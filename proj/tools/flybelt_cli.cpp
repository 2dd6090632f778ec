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

// flybelt: design shapers, simulate the suspended belt, identify its modes
// and compare motion strategies.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "flybelt/config.hpp"
#include "flybelt/csv.hpp"
#include "flybelt/design.hpp"
#include "flybelt/error.hpp"
#include "flybelt/modal.hpp"
#include "flybelt/scenario.hpp"
#include "flybelt/shaper.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr const char* kOutDirEnv = "FLYBELT_OUT_DIR";

struct CommonArgs {
  std::string config;
  std::string out;
  std::string strategy;
  std::optional<double> sf;
  std::optional<double> ts;
};

fs::path output_dir(const CommonArgs& args) {
  if (!args.out.empty()) {
    return args.out;
  }
  if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    return env;
  }
  return "out";
}

flybelt::ScenarioConfig load_scenario(const CommonArgs& args) {
  flybelt::ScenarioConfig cfg;
  if (!args.config.empty()) {
    cfg = flybelt::scenario_from_json(flybelt::read_file(args.config));
  }
  if (args.ts) {
    cfg.ts = *args.ts;
  }
  if (args.sf) {
    cfg.h2_sf = *args.sf;
  }
  if (!args.strategy.empty()) {
    const auto s = flybelt::parse_strategy(args.strategy);
    if (!s || *s == flybelt::Strategy::kCustom) {
      throw flybelt::ValidationError(fmt::format("unknown strategy '{}'", args.strategy));
    }
    cfg.strategies = {*s};
  }
  cfg.validate();
  return cfg;
}

int cmd_design(const CommonArgs& args) {
  flybelt::DesignRequest req;
  if (!args.config.empty()) {
    req.modes = flybelt::modal_set_from_json(flybelt::read_file(args.config));
  }
  req.ts = args.ts.value_or(0.01);
  req.smoothing = args.sf.value_or(0.15);
  const flybelt::ShaperDesign d = flybelt::design_shaper(req);
  const fs::path dir = output_dir(args);
  flybelt::write_file_atomic(dir / "shaper.xml", flybelt::shaper_to_xml(d.shaper));
  flybelt::write_file_atomic(dir / "shaper.json", flybelt::shaper_to_json(d.shaper));
  fmt::print("n_min {}  n {}  duration {:.2f} s  |h|_2 {:.6g}\n", d.n_min, d.n,
             d.shaper.duration(), std::sqrt(d.qp.objective));
  fmt::print("V(omega1) {:.3g}  V(omega2) {:.3g}\n",
             flybelt::sensitivity(d.shaper, req.modes.omega1, req.modes.xi1),
             flybelt::sensitivity(d.shaper, req.modes.omega2, req.modes.xi2));
  fmt::print("wrote {}\n", (dir / "shaper.xml").string());
  return kExitOk;
}

// Runs every configured strategy, writing traces as they complete. On a
// failure the report is still written, marked as failed.
int run_and_report(const flybelt::ScenarioConfig& cfg, const fs::path& dir, bool table) {
  std::vector<flybelt::StrategyRun> runs;
  int code = kExitOk;
  std::optional<std::string> failure;
  try {
    const flybelt::ScenarioShapers shapers = flybelt::design_scenario_shapers(cfg);
    const flybelt::SystemState initial = flybelt::scenario_initial_state(cfg);
    for (flybelt::Strategy s : cfg.strategies) {
      flybelt::StrategyRun run = flybelt::run_strategy(s, cfg, shapers, initial);
      const std::string name(flybelt::strategy_name(s));
      flybelt::write_file_atomic(dir / (name + ".csv"), flybelt::sim_output_csv(run.sim));
      flybelt::write_file_atomic(dir / (name + "_command.csv"),
                                 flybelt::profile_csv(run.command));
      runs.push_back(std::move(run));
    }
  } catch (const flybelt::ValidationError& e) {
    failure = e.what();
    code = kExitValidation;
  } catch (const flybelt::NumericalError& e) {
    failure = e.what();
    code = kExitNumerical;
  }
  flybelt::write_file_atomic(dir / "metrics.json", flybelt::metrics_json(cfg, runs, failure));
  if (table) {
    fmt::print("{:<16}{:>14}{:>12}{:>14}{:>12}{:>12}\n", "strategy", "torsion pkpk", "rms",
               "nutation pkpk", "rms", "transient");
    for (const auto& r : runs) {
      const auto& m = r.metrics;
      fmt::print("{:<16}{:>14.4f}{:>12.4f}{:>14.4f}{:>12.4f}{:>12.2f}\n",
                 flybelt::strategy_name(r.strategy), m.torsion_pkpk, m.torsion_rms,
                 m.nutation_pkpk, m.nutation_rms, m.transient_time);
    }
    fmt::print("angles in deg, window from command arrival to {} s\n", cfg.horizon);
  }
  if (failure) {
    fmt::print(stderr, "error: {}\n", *failure);
  }
  fmt::print("wrote {}\n", (dir / "metrics.json").string());
  return code;
}

int cmd_simulate(const CommonArgs& args) {
  return run_and_report(load_scenario(args), output_dir(args), false);
}

int cmd_compare(const CommonArgs& args) {
  flybelt::ScenarioConfig cfg = load_scenario(args);
  if (args.strategy.empty()) {
    cfg.strategies = {flybelt::Strategy::kConstVelocity, flybelt::Strategy::kPolynomial,
                      flybelt::Strategy::kTimeOptimalShaped, flybelt::Strategy::kH2Shaped};
  }
  return run_and_report(cfg, output_dir(args), true);
}

int cmd_modal(const CommonArgs& args, double duration, int points, double wmin, double wmax) {
  flybelt::PlantParams plant = flybelt::reference_plant();
  if (!args.config.empty()) {
    plant = flybelt::plant_from_json(flybelt::read_file(args.config));
  }
  if (points < 2 || !(wmin > 0.0) || !(wmax > wmin)) {
    throw flybelt::ValidationError("FRF grid needs >= 2 points and 0 < min < max");
  }
  flybelt::FreeDecayOptions fd;
  fd.duration = duration;
  const flybelt::ModalSet modes = flybelt::identify_modes(flybelt::free_decay(plant, fd));

  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = wmin + (wmax - wmin) * double(i) / double(points - 1);
  }
  const flybelt::FrfCurve frf = flybelt::compute_frf(plant, grid);
  const fs::path dir = output_dir(args);
  flybelt::write_file_atomic(dir / "frf.csv", flybelt::frf_csv(frf));

  std::string json = flybelt::modal_set_to_json(modes);
  std::string capped;
  for (std::size_t i = 0; i < frf.omega.size(); ++i) {
    if (frf.capped[i]) {
      capped += fmt::format("{}{}", capped.empty() ? "" : ", ", flybelt::format_real(frf.omega[i]));
    }
  }
  json.resize(json.rfind('}'));
  while (!json.empty() && (json.back() == '\n' || json.back() == ' ')) {
    json.pop_back();
  }
  json += fmt::format(",\n  \"frf_capped_omega\": [{}]\n}}\n", capped);
  flybelt::write_file_atomic(dir / "modal.json", json);
  fmt::print("omega1 {:.4f} rad/s  xi1 {:.3g}\nomega2 {:.4f} rad/s  xi2 {:.3g}\n", modes.omega1,
             modes.xi1, modes.omega2, modes.xi2);
  fmt::print("wrote {}\n", (dir / "modal.json").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suspended-belt simulation and input-shaper design"};
  app.require_subcommand(1);
  CommonArgs args;
  double sf = 0.0, ts = 0.0;

  auto add_common = [&](CLI::App* sub, bool with_strategy, bool with_shaper) {
    sub->add_option("--config", args.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out,
                    fmt::format("Output directory (default ${} or ./out)", kOutDirEnv));
    if (with_strategy) {
      sub->add_option("--strategy", args.strategy,
                      "const-velocity | polynomial | t-opt-shaped | h2-opt-shaped");
    }
    if (with_shaper) {
      sub->add_option("--sf", sf, "Smoothing factor in [0, 1]")->check(CLI::Range(0.0, 1.0));
      sub->add_option("--ts", ts, "Shaper sampling period, s")
          ->check(CLI::PositiveNumber);
    }
  };

  CLI::App* design = app.add_subcommand("design", "Design a shaper for a modal set");
  add_common(design, false, true);
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate the configured strategies");
  add_common(simulate, true, true);
  CLI::App* compare = app.add_subcommand("compare", "Compare all four motion strategies");
  add_common(compare, true, true);
  CLI::App* modal = app.add_subcommand("modal", "Identify modes and the frequency response");
  add_common(modal, false, false);
  double duration = 60.0, wmin = 0.2, wmax = 6.0;
  int points = 30;
  modal->add_option("--duration", duration, "Free-decay length, s")->check(CLI::PositiveNumber);
  modal->add_option("--frf-points", points, "FRF grid size");
  modal->add_option("--frf-min", wmin, "Lowest FRF frequency, rad/s");
  modal->add_option("--frf-max", wmax, "Highest FRF frequency, rad/s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  for (CLI::App* sub : {design, simulate, compare}) {
    if (sub->parsed()) {
      if (sub->count("--sf")) {
        args.sf = sf;
      }
      if (sub->count("--ts")) {
        args.ts = ts;
      }
    }
  }

  try {
    if (design->parsed()) {
      return cmd_design(args);
    }
    if (simulate->parsed()) {
      return cmd_simulate(args);
    }
    if (compare->parsed()) {
      return cmd_compare(args);
    }
    return cmd_modal(args, duration, points, wmin, wmax);
  } catch (const flybelt::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const flybelt::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "failure: {}\n", e.what());
    return kExitNumerical;
  }
}
