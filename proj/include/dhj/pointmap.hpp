#pragma once

#include "dhj/common.hpp"

#include <vector>

namespace dhj {

/// Shifting property: velocity of the body point at `a` from the twist (v, w).
inline Vec3 point_velocity(const Vec3& v, const Vec3& w, const Vec3& a) { return v + w.cross(a); }

struct PointVelocityMap {
  std::vector<Vec3> points;
  MatX vp;  // 3n x 6, row-triples [I, -[a_i]x]
};

inline PointVelocityMap build_vp(const std::vector<Vec3>& points) {
  if (points.empty()) throw Error(ErrorCode::degenerate_points, "no points");
  if (points.size() >= 3) {
    // Noncollinear iff the difference vectors span at least two directions.
    MatX diffs(3, static_cast<Eigen::Index>(points.size() - 1));
    for (std::size_t i = 1; i < points.size(); ++i) diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
    Eigen::JacobiSVD<MatX> svd(diffs);
    const VecX& s = svd.singularValues();
    if (s[0] == 0.0 || s[1] <= 1e-12 * s[0]) throw Error(ErrorCode::degenerate_points, "points are collinear");
  }
  PointVelocityMap m;
  m.points = points;
  m.vp.setZero(3 * static_cast<Eigen::Index>(points.size()), 6);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto r = 3 * static_cast<Eigen::Index>(i);
    m.vp.block<3, 3>(r, 0).setIdentity();
    m.vp.block<3, 3>(r, 3) = -skew(points[i]);
  }
  return m;
}

}  // namespace dhj
