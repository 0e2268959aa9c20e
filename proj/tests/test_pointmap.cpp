#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dhj;

TEST(PointMap, MatchesShiftingProperty) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  auto rv = [&] { return Vec3(n(rng), n(rng), n(rng)); };
  const std::vector<Vec3> pts = {rv(), rv(), rv(), rv()};
  const auto m = build_vp(pts);
  ASSERT_EQ(m.vp.rows(), 12);
  ASSERT_EQ(m.vp.cols(), 6);
  for (int k = 0; k < 20; ++k) {
    const Vec3 v = rv(), w = rv();
    Vec6 x;
    x << v, w;
    const VecX vp = m.vp * x;
    for (int i = 0; i < 4; ++i) EXPECT_LT((vp.segment<3>(3 * i) - (v + w.cross(pts[i]))).norm(), 1e-12);
  }
}

TEST(PointMap, RigidBodyDistancesPreserved) {
  // (v_i - v_j) . (a_i - a_j) = 0 for any twist.
  const std::vector<Vec3> pts = {{1, 0, 0}, {0, 2, 0}, {-1, 0, 0.5}};
  const auto m = build_vp(pts);
  Vec6 x;
  x << 0.3, -1.2, 0.7, 2.0, -0.4, 1.1;
  const VecX vp = m.vp * x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR((vp.segment<3>(3 * i) - vp.segment<3>(3 * j)).dot(pts[i] - pts[j]), 0.0, 1e-12);
}

TEST(PointMap, PointVelocity) {
  EXPECT_LT((point_velocity(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX()) - Vec3::UnitY()).norm(), 1e-15);
}

TEST(PointMap, DegenerateInputs) {
  auto code = [](const std::vector<Vec3>& p) {
    try {
      build_vp(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  EXPECT_EQ(code({}), ErrorCode::degenerate_points);
  EXPECT_EQ(code({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}), ErrorCode::degenerate_points);
  EXPECT_NO_THROW(build_vp({{0, 0, 0}, {1, 1, 1}}));
}

TEST(PointMap, SquareLayoutIsFullRank) {
  const auto cfg = reference_config();
  const auto limbs = inverse_kinematics(cfg, resolve_pose(cfg, oracle::ref_pose()));
  const auto m = build_vp(spherical_centres(limbs));
  EXPECT_EQ(Eigen::JacobiSVD<MatX>(m.vp).rank(), 6);
}
