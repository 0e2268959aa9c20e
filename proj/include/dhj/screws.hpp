#pragma once

// Constraint-embedded inverse Jacobian G^T = [G_a^T; G_c^T]:
//
//   [q_dot; 0] = [G_av^T  G_aw^T; G_cv^T  G_cw^T] [v; w]
//
// Actuation row of limb i along wrench direction w_i through B_i:
//   [w_i^T, (a_i x w_i)^T] / (w_i . s_1i)
// Constraint row of PRS limb i (force along the R axis through B_i):
//   [s_2i^T, (a_i x s_2i)^T]

#include "dhj/model.hpp"

#include <vector>

namespace dhj {

/// Which wrench direction drives each limb kind's actuation row.
enum class RowAssignment {
  literal,  // PUS -> n_i, PRS -> l_i
  swapped,  // PUS -> l_i, PRS -> n_i
};

/// Order of the cross product in the moment half of a row.
enum class MomentOrder {
  direction_first,  // (w x a_i)
  point_first,      // (a_i x w)
};

struct RowRecipe {
  RowAssignment assignment = RowAssignment::swapped;
  MomentOrder moment = MomentOrder::point_first;
};

/// Recipe that agrees with finite differences of the inverse kinematics.
inline constexpr RowRecipe kAdoptedRecipe{RowAssignment::swapped, MomentOrder::point_first};

inline std::string_view to_string(RowAssignment a) { return a == RowAssignment::literal ? "literal" : "swapped"; }
inline std::string_view to_string(MomentOrder m) {
  return m == MomentOrder::direction_first ? "w_cross_a" : "a_cross_w";
}

struct InverseJacobian {
  Mat6 gt = Mat6::Identity();
  int f = 4;

  MatX actuation() const { return gt.topRows(f); }
  MatX constraint() const { return gt.bottomRows(6 - f); }
  MatX g_av() const { return gt.topLeftCorner(f, 3); }
  MatX g_aw() const { return gt.topRightCorner(f, 3); }
  MatX g_cv() const { return gt.bottomLeftCorner(6 - f, 3); }
  MatX g_cw() const { return gt.bottomRightCorner(6 - f, 3); }
};

inline Vec6 screw_row(const Vec3& w, const Vec3& a, MomentOrder moment) {
  Vec6 row;
  row.head<3>() = w;
  row.tail<3>() = moment == MomentOrder::point_first ? Vec3(a.cross(w)) : Vec3(w.cross(a));
  return row;
}

/// Generic actuation row: unit-rate response of the actuator along `s1` to a
/// wrench along `w` through the point at `a`.
inline Vec6 actuation_row(const Vec3& w, const Vec3& s1, const Vec3& a, MomentOrder moment = MomentOrder::point_first) {
  const double den = w.dot(s1);
  if (std::abs(den) < 1e-12 * std::max(w.norm(), 1e-300))
    throw Error(ErrorCode::singular_limb, "limb wrench reciprocal to the actuator axis");
  return screw_row(w, a, moment) / den;
}

inline Vec6 constraint_row(const Vec3& s, const Vec3& a, MomentOrder moment = MomentOrder::point_first) {
  return screw_row(s, a, moment);
}

inline InverseJacobian build_inverse_jacobian(const std::vector<LimbKinematics>& limbs,
                                              const RowRecipe& recipe = kAdoptedRecipe) {
  const int f = static_cast<int>(limbs.size());
  int prs = 0;
  for (const auto& k : limbs) prs += k.kind == LimbKind::prs;
  if (f + prs != 6)
    throw Error(ErrorCode::invalid_argument, "limbs do not provide six independent rows");

  InverseJacobian g;
  g.f = f;
  for (int i = 0; i < f; ++i) {
    const auto& k = limbs[i];
    const bool use_n = (recipe.assignment == RowAssignment::literal) == (k.kind == LimbKind::pus);
    g.gt.row(i) = actuation_row(use_n ? k.n : k.l, k.s1, k.a, recipe.moment).transpose();
  }
  int r = f;
  for (const auto& k : limbs)
    if (k.kind == LimbKind::prs) g.gt.row(r++) = constraint_row(k.s2, k.a, recipe.moment).transpose();
  return g;
}

/// Length exponents: 0 dimensionless, 1 length, -1 inverse length.
struct ActuationUnits {
  int g_v = 0;   // G_av^T, G_cv^T
  int g_w = 1;   // G_aw^T, G_cw^T
  int j_a1 = 0;  // linear part of J_a
  int j_a2 = -1; // angular part of J_a
};

inline ActuationUnits actuation_row_units(ActuatorKind kind) {
  switch (kind) {
    case ActuatorKind::linear: return {0, 1, 0, -1};
    case ActuatorKind::rotational: return {-1, 0, 1, 0};
    case ActuatorKind::mixed: break;
  }
  throw Error(ErrorCode::unsupported, "mixed linear and rotational actuation");
}

inline ActuationUnits actuation_row_units(const ManipulatorConfig& cfg) { return actuation_row_units(cfg.actuator); }

}  // namespace dhj
