#pragma once

// JSON manipulator configuration.
//
//   {
//     "r_a": 200, "r_b": 450, "l": 687,          // millimetres
//     "unit": "mm",                              // working unit: "mm" | "m"
//     "limbs": [{"angle_deg": 0, "kind": "PUS"}, ...],
//     "actuator": "linear",                      // "linear" | "rotational" | "mixed"
//     "mobility": {"lambda": 6, "n": 10, "j": 12, "f_sum": 22},
//     "envelope": {"theta_deg": 50, "psi_deg": 50, "z_min": 100, "z_max": 200},  // optional
//     "seed": 42                                 // optional
//   }
//
// Lengths in the file are always millimetres; `unit` selects the unit the
// computation runs in and the lengths are rescaled on load.

#include "dhj/model.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace dhj {

inline LengthUnit parse_unit(std::string_view s) {
  if (s == "mm") return LengthUnit::mm;
  if (s == "m") return LengthUnit::m;
  throw Error(ErrorCode::config_error, "unknown unit '" + std::string(s) + "'");
}

inline LimbKind parse_limb_kind(std::string_view s) {
  if (s == "PUS" || s == "pus") return LimbKind::pus;
  if (s == "PRS" || s == "prs") return LimbKind::prs;
  throw Error(ErrorCode::config_error, "unknown limb kind '" + std::string(s) + "'");
}

inline ActuatorKind parse_actuator(std::string_view s) {
  if (s == "linear") return ActuatorKind::linear;
  if (s == "rotational") return ActuatorKind::rotational;
  if (s == "mixed") return ActuatorKind::mixed;
  throw Error(ErrorCode::config_error, "unknown actuator kind '" + std::string(s) + "'");
}

namespace detail {

inline Vec3 parse_axis(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::config_error, "axis must be a 3-element array");
  Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  if (v.norm() < 1e-12) throw Error(ErrorCode::config_error, "axis must be nonzero");
  return v.normalized();
}

}  // namespace detail

inline ManipulatorConfig config_from_json(const nlohmann::json& j) {
  ManipulatorConfig cfg;
  try {
    cfg.r_a = j.at("r_a").get<double>();
    cfg.r_b = j.at("r_b").get<double>();
    cfg.l = j.at("l").get<double>();
    const LengthUnit unit = parse_unit(j.value("unit", std::string("mm")));
    for (const auto& jl : j.at("limbs")) {
      LimbSpec limb;
      limb.base_angle = deg2rad(jl.at("angle_deg").get<double>());
      limb.kind = parse_limb_kind(jl.at("kind").get<std::string>());
      if (jl.contains("base_axis")) limb.base_axis = detail::parse_axis(jl["base_axis"]);
      if (jl.contains("second_axis")) limb.second_axis = detail::parse_axis(jl["second_axis"]);
      cfg.limbs.push_back(limb);
    }
    cfg.actuator = parse_actuator(j.value("actuator", std::string("linear")));
    if (j.contains("mobility")) {
      const auto& m = j["mobility"];
      cfg.mobility.lambda = m.at("lambda").get<int>();
      cfg.mobility.n = m.at("n").get<int>();
      cfg.mobility.j = m.at("j").get<int>();
      cfg.mobility.joint_freedom_sum = m.at("f_sum").get<int>();
    }
    if (j.contains("envelope")) {
      const auto& e = j["envelope"];
      cfg.envelope.theta_max = deg2rad(e.value("theta_deg", 50.0));
      cfg.envelope.psi_max = deg2rad(e.value("psi_deg", 50.0));
      cfg.envelope.z_min = e.value("z_min", cfg.envelope.z_min);
      cfg.envelope.z_max = e.value("z_max", cfg.envelope.z_max);
    }
    cfg.seed = j.value("seed", std::uint64_t{42});
    validate_config(cfg);
    return in_unit(cfg, unit);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config_error, e.what());
  }
}

/// Serializes back to the file schema (lengths in millimetres).
inline nlohmann::json config_to_json(const ManipulatorConfig& cfg) {
  const ManipulatorConfig mm = scaled(cfg, 1.0 / from_mm(cfg.unit));
  nlohmann::json j;
  j["r_a"] = mm.r_a;
  j["r_b"] = mm.r_b;
  j["l"] = mm.l;
  j["unit"] = std::string(to_string(cfg.unit));
  j["limbs"] = nlohmann::json::array();
  for (const auto& limb : cfg.limbs) {
    j["limbs"].push_back({{"angle_deg", rad2deg(limb.base_angle)},
                          {"kind", std::string(to_string(limb.kind))},
                          {"base_axis", {limb.base_axis.x(), limb.base_axis.y(), limb.base_axis.z()}},
                          {"second_axis", {limb.second_axis.x(), limb.second_axis.y(), limb.second_axis.z()}}});
  }
  j["actuator"] = std::string(to_string(cfg.actuator));
  j["mobility"] = {{"lambda", cfg.mobility.lambda},
                   {"n", cfg.mobility.n},
                   {"j", cfg.mobility.j},
                   {"f_sum", cfg.mobility.joint_freedom_sum}};
  j["envelope"] = {{"theta_deg", rad2deg(cfg.envelope.theta_max)},
                   {"psi_deg", rad2deg(cfg.envelope.psi_max)},
                   {"z_min", mm.envelope.z_min},
                   {"z_max", mm.envelope.z_max}};
  j["seed"] = cfg.seed;
  j["rotation_convention"] = "R = Rx(theta) Ry(psi) Rz(phi_z)";
  return j;
}

inline ManipulatorConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config_error, "malformed JSON in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace dhj
