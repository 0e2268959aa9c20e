#pragma once

// Dimensionally homogeneous Jacobian J_dh = V_ps J_a and its conditioning.

#include "dhj/forward_map.hpp"
#include "dhj/model.hpp"
#include "dhj/selection.hpp"

#include <map>
#include <string>

namespace dhj {

inline MatX assemble_dhj(const MatX& vps, const MatX& ja) {
  if (vps.cols() != ja.rows()) throw Error(ErrorCode::invalid_argument, "V_ps and J_a shapes do not chain");
  return vps * ja;
}

/// Descending singular values.
inline VecX singular_values(const MatX& m) { return Eigen::JacobiSVD<MatX>(m).singularValues(); }

/// 2-norm condition number; +inf when the smallest singular value underflows.
inline double condition_number(const MatX& m) { return condition_2norm(m); }

struct DexterityRecord {
  PlatformPose pose;
  MatX j_dh;
  VecX singular_values;
  double k = 1.0;
  double k_conventional = 1.0;
  LengthUnit unit = LengthUnit::mm;
};

/// Everything computed for one pose, in pipeline order.
struct PoseAnalysis {
  std::vector<LimbKinematics> limbs;
  VecX q;
  InverseJacobian g;
  ForwardJacobian j;
  PointVelocityMap vp;
  SelectionMatrix s;
  NominalMap nominal;
  DexterityRecord record;
};

struct PipelineOptions {
  SelectionPlan plan = primary_plan();
  SelectionScheme scheme = SelectionScheme::alternating;
  RowRecipe recipe = kAdoptedRecipe;
  EnvelopeCheck envelope = EnvelopeCheck::enforce;
};

inline std::vector<Vec3> spherical_centres(const std::vector<LimbKinematics>& limbs) {
  std::vector<Vec3> pts;
  pts.reserve(limbs.size());
  for (const auto& k : limbs) pts.push_back(k.a);
  return pts;
}

inline PoseAnalysis evaluate_pose(const ManipulatorConfig& cfg, const TaskCoords& coords,
                                  const PipelineOptions& opt = {}) {
  if (cfg.actuator != ActuatorKind::linear)
    throw Error(ErrorCode::unsupported, "only the linear-actuator reference model has a kinematic model");
  PoseAnalysis out;
  const PlatformPose pose = resolve_pose(cfg, coords, opt.envelope);
  out.limbs = inverse_kinematics(cfg, pose);
  out.q = actuator_values(out.limbs);
  out.g = build_inverse_jacobian(out.limbs, opt.recipe);
  out.j = invert_full(out.g);
  const auto pts = spherical_centres(out.limbs);
  out.vp = build_vp(pts);
  out.s = build_selection_matrix(opt.plan, pts, opt.scheme);
  out.nominal = nominal_map(out.s, out.vp);

  DexterityRecord& rec = out.record;
  rec.pose = pose;
  rec.j_dh = assemble_dhj(out.nominal.vps, out.j.ja());
  rec.singular_values = singular_values(rec.j_dh);
  rec.k = condition_number(rec.j_dh);
  rec.k_conventional = condition_number(out.g.gt);
  rec.unit = cfg.unit;
  return out;
}

/// Symbolic length exponents of every block in the pipeline.
struct UnitTable {
  ActuatorKind actuator = ActuatorKind::linear;
  std::map<std::string, int> exponent;
  bool homogeneous = false;
  int j_dh = 0;
};

inline UnitTable dimensional_audit(ActuatorKind kind) {
  if (kind == ActuatorKind::mixed) throw Error(ErrorCode::mixed_actuation, "units of G depend on the actuator type");
  const ActuationUnits u = actuation_row_units(kind);
  UnitTable t;
  t.actuator = kind;
  t.exponent["V_p.translation"] = 0;
  t.exponent["V_p.skew"] = 1;
  t.exponent["S"] = 0;
  t.exponent["G_v"] = u.g_v;
  t.exponent["G_w"] = u.g_w;
  t.exponent["J_a1"] = u.j_a1;
  t.exponent["J_a2"] = u.j_a2;
  // J_dh = S (V_p.translation J_a1 + V_p.skew J_a2)
  const int lin = t.exponent["S"] + t.exponent["V_p.translation"] + u.j_a1;
  const int ang = t.exponent["S"] + t.exponent["V_p.skew"] + u.j_a2;
  t.homogeneous = lin == ang;
  t.j_dh = lin;
  t.exponent["J_dh"] = lin;
  return t;
}

inline UnitTable dimensional_audit(const ManipulatorConfig& cfg) { return dimensional_audit(cfg.actuator); }

}  // namespace dhj
