#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dhj;

namespace {

std::vector<TaskCoords> random_poses(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-deg2rad(50), deg2rad(50)), z(100, 200);
  std::vector<TaskCoords> out;
  while (static_cast<int>(out.size()) < n) {
    const TaskCoords c{0.0, z(rng), ang(rng), ang(rng)};
    if (std::abs(c.theta) > deg2rad(1)) out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(Screws, ActuationRowsMatchIkDifferences) {
  const auto cfg = reference_config();
  for (const auto& c : random_poses(30, 3)) {
    const auto g = build_inverse_jacobian(inverse_kinematics(cfg, resolve_pose(cfg, c)));
    const MatX t = oracle::pose_tangent(cfg, c, 1e-4, 1e-6);
    const MatX fd = oracle::ik_jacobian(cfg, c, 1e-4, 1e-6);
    EXPECT_LT(max_rel_error(g.actuation() * t, fd), 1e-6);
  }
}

TEST(Screws, ConstraintRowsAnnihilateTangent) {
  const auto cfg = reference_config();
  for (const auto& c : random_poses(30, 4)) {
    const auto g = build_inverse_jacobian(inverse_kinematics(cfg, resolve_pose(cfg, c)));
    EXPECT_LT(max_abs(g.constraint() * oracle::pose_tangent(cfg, c, 1e-4, 1e-6)), 1e-7);
  }
}

TEST(Screws, OtherRowRecipesDisagreeWithIk) {
  const auto cfg = reference_config();
  const auto c = oracle::ref_pose();
  const auto limbs = inverse_kinematics(cfg, resolve_pose(cfg, c));
  const MatX t = oracle::pose_tangent(cfg, c, 1e-4, 1e-6);
  const MatX fd = oracle::ik_jacobian(cfg, c, 1e-4, 1e-6);
  for (auto a : {RowAssignment::literal, RowAssignment::swapped})
    for (auto m : {MomentOrder::direction_first, MomentOrder::point_first}) {
      const double err = max_rel_error(build_inverse_jacobian(limbs, {a, m}).actuation() * t, fd);
      if (a == kAdoptedRecipe.assignment && m == kAdoptedRecipe.moment) EXPECT_LT(err, 1e-6);
      else EXPECT_GT(err, 1e-2);
    }
}

TEST(Screws, PrsWrenchIsAlongLink) {
  const auto cfg = reference_config();
  for (const auto& k : inverse_kinematics(cfg, resolve_pose(cfg, oracle::ref_pose())))
    if (k.kind == LimbKind::prs) EXPECT_LT(k.n.cross(k.l).norm(), 1e-9 * k.l.norm());
}

TEST(Screws, ActuationRowFormula) {
  const Vec3 w(0.0, 0.6, 0.8), s1 = Vec3::UnitZ(), a(1.0, 2.0, 3.0);
  const Vec6 r = actuation_row(w, s1, a);
  EXPECT_NEAR((r.head<3>() - w / 0.8).norm(), 0.0, 1e-15);
  EXPECT_NEAR((r.tail<3>() - a.cross(w) / 0.8).norm(), 0.0, 1e-15);
}

TEST(Screws, ReciprocalWrenchIsSingularLimb) {
  try {
    actuation_row(Vec3::UnitX(), Vec3::UnitZ(), Vec3::Ones());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_limb);
  }
}

TEST(Screws, RowCountMustBeSix) {
  auto limbs = inverse_kinematics(reference_config(), resolve_pose(reference_config(), oracle::ref_pose()));
  limbs.pop_back();
  EXPECT_THROW(build_inverse_jacobian(limbs), Error);
}

TEST(Screws, RowUnitsPerActuatorType) {
  const auto lin = actuation_row_units(ActuatorKind::linear);
  EXPECT_EQ(lin.g_v, 0);
  EXPECT_EQ(lin.g_w, 1);
  EXPECT_EQ(lin.j_a1, 0);
  EXPECT_EQ(lin.j_a2, -1);
  const auto rot = actuation_row_units(ActuatorKind::rotational);
  EXPECT_EQ(rot.g_v, -1);
  EXPECT_EQ(rot.g_w, 0);
  try {
    actuation_row_units(ActuatorKind::mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported);
  }
}

TEST(Screws, MomentBlockScalesWithLength) {
  const auto cfg = reference_config();
  const auto m = in_unit(cfg, LengthUnit::m);
  const auto gmm = build_inverse_jacobian(inverse_kinematics(cfg, resolve_pose(cfg, oracle::ref_pose())));
  const auto gm = build_inverse_jacobian(inverse_kinematics(m, resolve_pose(m, {0.0, 0.15, deg2rad(10), deg2rad(10)})));
  EXPECT_LT(max_rel_error(gm.g_av(), gmm.g_av()), 1e-12);
  EXPECT_LT(max_rel_error(gm.g_aw(), gmm.g_aw() * 1e-3), 1e-12);
}
