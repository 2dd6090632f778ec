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

#include "flybelt/config.hpp"

#include <initializer_list>

#include <fmt/format.h>
#include <json.hpp>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"

namespace flybelt {
namespace {

using nlohmann::json;

void only_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) {
    throw ValidationError(fmt::format("{}: expected an object", where));
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view k : keys) {
      known = known || item.key() == k;
    }
    if (!known) {
      throw ValidationError(fmt::format("{}: unknown key '{}'", where, item.key()));
    }
  }
}

void read(const json& j, const char* key, double& out) {
  if (j.contains(key)) {
    if (!j[key].is_number()) {
      throw ValidationError(fmt::format("'{}' must be a number", key));
    }
    out = j[key].get<double>();
  }
}

void read_plant(const json& j, PlantParams& p) {
  only_keys(j, "plant",
            {"cable_length", "arm_radius", "belt_radius", "belt_mass", "com_offset",
             "belt_inertia", "buckle_angle", "mcsu_mass", "mcsu_inertia_zz", "gravity",
             "translational_damping", "rotational_damping"});
  if (j.contains("cable_length")) {
    const auto v = j["cable_length"].get<std::vector<double>>();
    if (v.size() != 3) {
      throw ValidationError("'cable_length' needs three values");
    }
    std::copy(v.begin(), v.end(), p.cable_length.begin());
  }
  if (j.contains("belt_inertia")) {
    const auto v = j["belt_inertia"].get<std::vector<double>>();
    if (v.size() != 3) {
      throw ValidationError("'belt_inertia' needs three values");
    }
    p.belt_inertia = Eigen::Vector3d(v[0], v[1], v[2]);
  }
  read(j, "arm_radius", p.arm_radius);
  read(j, "belt_radius", p.belt_radius);
  read(j, "belt_mass", p.belt_mass);
  read(j, "com_offset", p.com_offset);
  read(j, "buckle_angle", p.buckle_angle);
  read(j, "mcsu_mass", p.mcsu_mass);
  read(j, "mcsu_inertia_zz", p.mcsu_inertia_zz);
  read(j, "gravity", p.gravity);
  read(j, "translational_damping", p.translational_damping);
  read(j, "rotational_damping", p.rotational_damping);
}

void check_version(const json& j) {
  if (j.contains("version") && j["version"] != kConfigVersion) {
    throw ValidationError(fmt::format("unsupported config version {}", j["version"].dump()));
  }
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("config: {}", e.what()));
  }
}

std::string plant_body(const PlantParams& p, std::string_view indent) {
  return fmt::format(
      "{{\n{0}  \"cable_length\": [{1}, {2}, {3}],\n{0}  \"arm_radius\": {4},\n"
      "{0}  \"belt_radius\": {5},\n{0}  \"belt_mass\": {6},\n{0}  \"com_offset\": {7},\n"
      "{0}  \"belt_inertia\": [{8}, {9}, {10}],\n{0}  \"buckle_angle\": {11},\n"
      "{0}  \"mcsu_mass\": {12},\n{0}  \"mcsu_inertia_zz\": {13},\n{0}  \"gravity\": {14},\n"
      "{0}  \"translational_damping\": {15},\n{0}  \"rotational_damping\": {16}\n{0}}}",
      indent, format_real(p.cable_length[0]), format_real(p.cable_length[1]),
      format_real(p.cable_length[2]), format_real(p.arm_radius), format_real(p.belt_radius),
      format_real(p.belt_mass), format_real(p.com_offset), format_real(p.belt_inertia[0]),
      format_real(p.belt_inertia[1]), format_real(p.belt_inertia[2]),
      format_real(p.buckle_angle), format_real(p.mcsu_mass), format_real(p.mcsu_inertia_zz),
      format_real(p.gravity), format_real(p.translational_damping),
      format_real(p.rotational_damping));
}

}  // namespace

ScenarioConfig scenario_from_json(std::string_view text) {
  const json j = parse(text);
  ScenarioConfig cfg;
  try {
    only_keys(j, "config",
              {"format", "version", "plant", "maneuver", "simulation", "command", "shaper",
               "strategies"});
    check_version(j);
    if (j.contains("plant")) {
      read_plant(j["plant"], cfg.plant);
    }
    if (j.contains("maneuver")) {
      const json& m = j["maneuver"];
      only_keys(m, "maneuver", {"from", "to"});
      read(m, "from", cfg.from);
      read(m, "to", cfg.to);
    }
    if (j.contains("simulation")) {
      const json& s = j["simulation"];
      only_keys(s, "simulation", {"dt", "horizon", "settle_band_deg", "settle_hold"});
      read(s, "dt", cfg.dt);
      read(s, "horizon", cfg.horizon);
      read(s, "settle_band_deg", cfg.settle_band_deg);
      read(s, "settle_hold", cfg.settle_hold);
    }
    if (j.contains("command")) {
      const json& c = j["command"];
      only_keys(c, "command", {"ts", "rate_limit", "poly"});
      read(c, "ts", cfg.ts);
      read(c, "rate_limit", cfg.rate_limit);
      if (c.contains("poly")) {
        only_keys(c["poly"], "command.poly", {"vmax", "amax", "jmax"});
        read(c["poly"], "vmax", cfg.poly.vmax);
        read(c["poly"], "amax", cfg.poly.amax);
        read(c["poly"], "jmax", cfg.poly.jmax);
      }
    }
    if (j.contains("shaper")) {
      const json& s = j["shaper"];
      only_keys(s, "shaper", {"modes", "time_optimal_sf", "h2_sf"});
      if (s.contains("modes")) {
        const json& m = s["modes"];
        only_keys(m, "shaper.modes", {"omega1", "xi1", "omega2", "xi2"});
        read(m, "omega1", cfg.modes.omega1);
        read(m, "xi1", cfg.modes.xi1);
        read(m, "omega2", cfg.modes.omega2);
        read(m, "xi2", cfg.modes.xi2);
      }
      read(s, "time_optimal_sf", cfg.time_optimal_sf);
      read(s, "h2_sf", cfg.h2_sf);
    }
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& name : j["strategies"].get<std::vector<std::string>>()) {
        const auto s = parse_strategy(name);
        if (!s) {
          throw ValidationError(fmt::format("unknown strategy '{}'", name));
        }
        cfg.strategies.push_back(*s);
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  std::string strategies;
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    strategies += fmt::format("{}\"{}\"", i ? ", " : "", strategy_name(cfg.strategies[i]));
  }
  return fmt::format(
      "{{\n  \"version\": {},\n  \"plant\": {},\n"
      "  \"maneuver\": {{\"from\": {}, \"to\": {}}},\n"
      "  \"simulation\": {{\"dt\": {}, \"horizon\": {}, \"settle_band_deg\": {},\n"
      "                 \"settle_hold\": {}}},\n"
      "  \"command\": {{\"ts\": {}, \"rate_limit\": {},\n"
      "              \"poly\": {{\"vmax\": {}, \"amax\": {}, \"jmax\": {}}}}},\n"
      "  \"shaper\": {{\"modes\": {{\"omega1\": {}, \"xi1\": {}, \"omega2\": {}, \"xi2\": {}}},\n"
      "             \"time_optimal_sf\": {}, \"h2_sf\": {}}},\n"
      "  \"strategies\": [{}]\n}}\n",
      kConfigVersion, plant_body(cfg.plant, "  "), format_real(cfg.from), format_real(cfg.to),
      format_real(cfg.dt), format_real(cfg.horizon), format_real(cfg.settle_band_deg),
      format_real(cfg.settle_hold), format_real(cfg.ts), format_real(cfg.rate_limit),
      format_real(cfg.poly.vmax), format_real(cfg.poly.amax), format_real(cfg.poly.jmax), format_real(cfg.modes.omega1),
      format_real(cfg.modes.xi1), format_real(cfg.modes.omega2), format_real(cfg.modes.xi2),
      format_real(cfg.time_optimal_sf), format_real(cfg.h2_sf), strategies);
}

PlantParams plant_from_json(std::string_view text) {
  const json j = parse(text);
  PlantParams p;
  try {
    if (j.is_object() && j.contains("plant")) {
      return scenario_from_json(text).plant;
    }
    json body = j;
    if (body.is_object()) {
      check_version(body);
      body.erase("version");
      body.erase("format");
    }
    read_plant(body, p);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("plant config: {}", e.what()));
  }
  p.validate();
  return p;
}

std::string plant_to_json(const PlantParams& p) {
  return fmt::format("{}\n", plant_body(p, ""));
}

}  // namespace flybelt
