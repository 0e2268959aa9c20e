#pragma once

// Extended selection matrices for the TyTzRxRy motion class.
//
// Point-velocity components (column order of v_p):
//   v_1x v_1y v_1z  v_2x ...  v_fz
// A plan assigns one pair (v_iy, v_jz) to every row. The row combines the
// y-components of points i and j with weights that remove w_z,
//
//   w_i + w_j = 1,   w_i a_ix + w_j a_jx = 0,
//
// plus a unit-magnitude z-component. v_x never enters a y/z component, so
// both constrained freedoms (v_x, w_z) vanish from S V_p.

#include "dhj/pointmap.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace dhj {

enum class Component { x = 0, y = 1, z = 2 };

struct ComponentRef {
  int point = 0;  // 0-based
  Component comp = Component::y;

  bool operator==(const ComponentRef&) const = default;
};

struct ComponentPair {
  ComponentRef first;   // v_iy
  ComponentRef second;  // v_jz

  bool operator==(const ComponentPair&) const = default;
};

struct SelectionPlan {
  std::vector<ComponentPair> pairs;

  bool operator==(const SelectionPlan&) const = default;
};

enum class SelectionScheme {
  /// Unit z weight on the lower-indexed point of the pair, as typeset for the
  /// primary plan. Every row then has v_y and v_z coefficients equal to 1,
  /// so S V_p is rank deficient; kept as a regression reference.
  typeset,
  /// z weight on the pair's z-point with sign (+1, -1, +1, ...) by row.
  alternating,
};

inline std::string_view to_string(SelectionScheme s) {
  return s == SelectionScheme::typeset ? "typeset" : "alternating";
}

inline SelectionScheme parse_scheme(std::string_view s) {
  if (s == "typeset" || s == "literal") return SelectionScheme::typeset;
  if (s == "alternating") return SelectionScheme::alternating;
  throw Error(ErrorCode::invalid_argument, "unknown selection scheme '" + std::string(s) + "'");
}

inline ComponentPair yz_pair(int i, int j) { return {{i, Component::y}, {j, Component::z}}; }

/// Admissible pairs per limb: limb i pairs v_iy with v_jz for every j != i.
inline std::vector<std::vector<ComponentPair>> enumerate_pairings(int f) {
  std::vector<std::vector<ComponentPair>> out(static_cast<std::size_t>(f));
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      if (j != i) out[static_cast<std::size_t>(i)].push_back(yz_pair(i, j));
  return out;
}

/// {(v1y,v2z), (v2y,v3z), (v3y,v4z), (v4y,v1z)}
inline SelectionPlan primary_plan() { return {{yz_pair(0, 1), yz_pair(1, 2), yz_pair(2, 3), yz_pair(3, 0)}}; }

/// {(v1y,v3z), (v2y,v4z), (v3y,v1z), (v4y,v2z)}
inline SelectionPlan alternate_plan() { return {{yz_pair(0, 2), yz_pair(1, 3), yz_pair(2, 0), yz_pair(3, 1)}}; }

inline std::string to_string(const ComponentRef& c) {
  static constexpr char names[] = {'x', 'y', 'z'};
  return std::to_string(c.point + 1) + names[static_cast<int>(c.comp)];
}

inline ComponentRef parse_component(std::string_view s) {
  if (s.size() < 2) throw Error(ErrorCode::invalid_argument, "bad component '" + std::string(s) + "'");
  const char c = s.back();
  ComponentRef ref;
  if (c == 'x') ref.comp = Component::x;
  else if (c == 'y') ref.comp = Component::y;
  else if (c == 'z') ref.comp = Component::z;
  else throw Error(ErrorCode::invalid_argument, "bad component '" + std::string(s) + "'");
  int idx = 0;
  for (char d : s.substr(0, s.size() - 1)) {
    if (d < '0' || d > '9') throw Error(ErrorCode::invalid_argument, "bad component '" + std::string(s) + "'");
    idx = 10 * idx + (d - '0');
  }
  if (idx < 1) throw Error(ErrorCode::invalid_argument, "point indices are 1-based");
  ref.point = idx - 1;
  return ref;
}

/// Throws unless every pair is (v_iy, v_jz) with i != j, both within [0, f).
inline void validate_plan(const SelectionPlan& plan, int f) {
  if (static_cast<int>(plan.pairs.size()) != f)
    throw Error(ErrorCode::invalid_argument, "plan needs one pair per limb");
  for (const auto& p : plan.pairs) {
    if (p.first.comp != Component::y || p.second.comp != Component::z)
      throw Error(ErrorCode::invalid_argument, "pairs must be (v_iy, v_jz)");
    if (p.first.point == p.second.point)
      throw Error(ErrorCode::invalid_argument, "pair must combine two different points");
    if (p.first.point < 0 || p.first.point >= f || p.second.point < 0 || p.second.point >= f)
      throw Error(ErrorCode::invalid_argument, "pair point index out of range");
  }
}

struct SelectionMatrix {
  MatX s;  // f x 3n
  SelectionPlan plan;
  SelectionScheme scheme = SelectionScheme::alternating;
};

struct PairWeights {
  double wi = 0.0;  // on v_iy
  double wj = 0.0;  // on v_jy
};

/// Solves the w_z cancellation for one pair. When both points already carry
/// no w_z (a_ix = a_jx = 0) the minimum-norm weights (1/2, 1/2) are used.
inline PairWeights pair_weights(double a_ix, double a_jx, double scale) {
  const double tol = 1e-9 * scale;
  const double den = a_ix - a_jx;
  if (std::abs(den) <= tol) {
    if (std::max(std::abs(a_ix), std::abs(a_jx)) <= tol) return {0.5, 0.5};
    throw Error(ErrorCode::degenerate_pair, "a_ix = a_jx; pick another pair");
  }
  return {-a_jx / den, a_ix / den};
}

inline SelectionMatrix build_selection_matrix(const SelectionPlan& plan, const std::vector<Vec3>& points,
                                              SelectionScheme scheme = SelectionScheme::alternating) {
  const int n = static_cast<int>(points.size());
  validate_plan(plan, static_cast<int>(plan.pairs.size()));
  for (const auto& p : plan.pairs)
    if (p.first.point >= n || p.second.point >= n)
      throw Error(ErrorCode::invalid_argument, "plan references a missing point");

  double scale = 0.0;
  for (const auto& a : points) scale = std::max(scale, std::abs(a.x()));
  if (scale == 0.0)
    for (const auto& a : points) scale = std::max(scale, a.norm());

  SelectionMatrix out;
  out.plan = plan;
  out.scheme = scheme;
  out.s.setZero(static_cast<Eigen::Index>(plan.pairs.size()), 3 * n);
  for (std::size_t r = 0; r < plan.pairs.size(); ++r) {
    const int i = plan.pairs[r].first.point;
    const int j = plan.pairs[r].second.point;
    const PairWeights w = pair_weights(points[i].x(), points[j].x(), scale);
    const auto row = static_cast<Eigen::Index>(r);
    out.s(row, 3 * i + 1) += w.wi;
    out.s(row, 3 * j + 1) += w.wj;
    if (scheme == SelectionScheme::typeset) {
      out.s(row, 3 * std::min(i, j) + 2) += 1.0;
    } else {
      out.s(row, 3 * j + 2) += (r % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return out;
}

/// Twist components that the plan must not see.
inline constexpr int kConstrainedColumns[] = {0, 5};     // v_x, w_z
inline constexpr int kIndependentColumns[] = {1, 2, 3, 4};  // v_y, v_z, w_x, w_y

struct NominalMap {
  MatX vps;         // f x 6
  MatX restricted;  // f x 4 over (v_y, v_z, w_x, w_y)
};

inline NominalMap nominal_map(const SelectionMatrix& s, const PointVelocityMap& vp) {
  if (s.s.cols() != vp.vp.rows()) throw Error(ErrorCode::invalid_argument, "S and V_p built from different point sets");
  NominalMap m;
  m.vps = s.s * vp.vp;
  m.restricted.resize(m.vps.rows(), 4);
  for (int k = 0; k < 4; ++k) m.restricted.col(k) = m.vps.col(kIndependentColumns[k]);
  return m;
}

}  // namespace dhj
