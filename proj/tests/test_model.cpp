#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dhj;

TEST(Mobility, ReferenceCountsGiveFour) {
  EXPECT_EQ(tsai_mobility(reference_config().mobility), 4);
  EXPECT_EQ(tsai_mobility({6, 10, 12, 22}), 4);
}

TEST(Mobility, NegativeCountsRejected) {
  EXPECT_THROW(tsai_mobility({6, -1, 12, 22}), Error);
}

TEST(Model, ReferenceGeometry) {
  const auto cfg = reference_config();
  ASSERT_EQ(cfg.f(), 4);
  EXPECT_EQ(cfg.limbs[0].kind, LimbKind::pus);
  EXPECT_EQ(cfg.limbs[1].kind, LimbKind::prs);
  EXPECT_EQ(cfg.limbs[2].kind, LimbKind::pus);
  EXPECT_EQ(cfg.limbs[3].kind, LimbKind::prs);
  EXPECT_NEAR(cfg.base_point(1).y(), 450.0, 1e-12);
  EXPECT_NEAR(cfg.platform_anchor(2).x(), -200.0, 1e-12);
}

TEST(Model, HomeInverseKinematicsMatchesClosedForm) {
  const auto cfg = reference_config();
  const VecX q = inverse_kinematics_q(cfg, oracle::home_pose());
  const double expect = oracle::level_q(200.0, 450.0, 687.0, 150.0);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(q[i], expect, 1e-10);
}

TEST(Model, PureZShiftMovesAllActuatorsEqually) {
  const auto cfg = reference_config();
  const VecX q0 = inverse_kinematics_q(cfg, {0, 150, 0, 0});
  const VecX q1 = inverse_kinematics_q(cfg, {0, 170, 0, 0});
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(q1[i] - q0[i], 20.0, 1e-10);
}

TEST(Model, ResolvedPoseSatisfiesConstraintsAndLinkLength) {
  const auto cfg = reference_config();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-deg2rad(50), deg2rad(50)), z(100, 200);
  for (int k = 0; k < 200; ++k) {
    const TaskCoords c{0.0, z(rng), ang(rng), ang(rng)};
    const auto pose = resolve_pose(cfg, c);
    const auto limbs = inverse_kinematics(cfg, pose);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(limbs[i].l.norm(), cfg.l, 1e-9);
      EXPECT_NEAR((limbs[i].a - pose.rotation * cfg.platform_anchor(i)).norm(), 0.0, 1e-9);
      if (limbs[i].kind == LimbKind::prs) EXPECT_NEAR(limbs[i].s2.dot(limbs[i].B - limbs[i].A), 0.0, 1e-9);
      EXPECT_NEAR(limbs[i].s3.dot(limbs[i].s2), 0.0, 1e-12);
      EXPECT_NEAR(limbs[i].s3.dot(limbs[i].l), 0.0, 1e-9);
    }
    EXPECT_NEAR(pose.rotation.determinant(), 1.0, 1e-12);
  }
}

TEST(Model, DependentCoordinatesVanishForSymmetricLayout) {
  // Both PRS planes are x = const through the base points on the y axis.
  const auto pose = resolve_pose(reference_config(), oracle::ref_pose());
  EXPECT_NEAR(pose.x, 0.0, 1e-12);
  EXPECT_NEAR(pose.phi_z, 0.0, 1e-12);
}

TEST(Model, EnvelopeViolationIsUnreachable) {
  const auto cfg = reference_config();
  try {
    resolve_pose(cfg, {0, 150, deg2rad(60), 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unreachable);
    EXPECT_NE(std::string(e.what()).find("Unreachable"), std::string::npos);
  }
  EXPECT_THROW(resolve_pose(cfg, {0, 250, 0, 0}), Error);
  EXPECT_NO_THROW(resolve_pose(cfg, {0, 250, 0, 0}, EnvelopeCheck::ignore));
}

TEST(Model, ShortLinkIsUnreachable) {
  auto cfg = reference_config();
  cfg.l = 100.0;
  try {
    inverse_kinematics_q(cfg, oracle::home_pose());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unreachable);
  }
}

TEST(Model, ForwardKinematicsRoundTrip) {
  const auto cfg = reference_config();
  const TaskCoords c{0.0, 140.0, deg2rad(20), deg2rad(-15)};
  const VecX q = inverse_kinematics_q(cfg, c);
  const auto pose = forward_kinematics(cfg, q, {0.0, 150.0, deg2rad(18), deg2rad(-12)});
  EXPECT_NEAR(pose.coords.y, c.y, 1e-8);
  EXPECT_NEAR(pose.coords.z, c.z, 1e-8);
  EXPECT_NEAR(pose.coords.theta, c.theta, 1e-10);
  EXPECT_NEAR(pose.coords.psi, c.psi, 1e-10);
}

TEST(Model, ScalingIsLinearInActuatorValues) {
  const auto cfg = reference_config();
  const auto m = in_unit(cfg, LengthUnit::m);
  EXPECT_EQ(m.unit, LengthUnit::m);
  EXPECT_DOUBLE_EQ(m.r_b, 0.45);
  const VecX qmm = inverse_kinematics_q(cfg, oracle::ref_pose());
  const VecX qm = inverse_kinematics_q(m, {0.0, 0.15, deg2rad(10), deg2rad(10)});
  EXPECT_LT((qmm * 1e-3 - qm).cwiseAbs().maxCoeff(), 1e-12);
  const auto back = in_unit(m, LengthUnit::mm);
  EXPECT_NEAR(back.l, 687.0, 1e-10);
}

TEST(ConfigIo, ReferenceFileMatchesBuiltIn) {
  const auto file = load_config(std::string(DHJ_SOURCE_DIR) + "/configs/reference_4dof.json");
  const auto ref = reference_config();
  EXPECT_DOUBLE_EQ(file.r_a, ref.r_a);
  EXPECT_DOUBLE_EQ(file.r_b, ref.r_b);
  EXPECT_DOUBLE_EQ(file.l, ref.l);
  ASSERT_EQ(file.f(), 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(file.limbs[i].kind, ref.limbs[i].kind);
    EXPECT_NEAR(file.limbs[i].base_angle, ref.limbs[i].base_angle, 1e-15);
  }
  EXPECT_EQ(file.seed, 42u);
  EXPECT_EQ(tsai_mobility(file.mobility), 4);
}

TEST(ConfigIo, UnitTagRescales) {
  auto j = config_to_json(reference_config());
  j["unit"] = "m";
  const auto cfg = config_from_json(j);
  EXPECT_DOUBLE_EQ(cfg.l, 0.687);
  EXPECT_DOUBLE_EQ(cfg.envelope.z_max, 0.2);
}

TEST(ConfigIo, RoundTrip) {
  const auto cfg = config_from_json(config_to_json(in_unit(reference_config(), LengthUnit::m)));
  EXPECT_EQ(cfg.unit, LengthUnit::m);
  EXPECT_NEAR(cfg.r_a, 0.2, 1e-15);
}

TEST(ConfigIo, ErrorsAreConfigErrors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_argument;
  };
  EXPECT_EQ(code([] { load_config("/nonexistent/file.json"); }), ErrorCode::config_error);
  EXPECT_EQ(code([] { config_from_json(nlohmann::json::parse(R"({"r_a": 1})")); }), ErrorCode::config_error);
  auto j = config_to_json(reference_config());
  j["limbs"][0]["kind"] = "PRS";
  EXPECT_EQ(code([&] { config_from_json(j); }), ErrorCode::config_error);
  j = config_to_json(reference_config());
  j["unit"] = "inch";
  EXPECT_EQ(code([&] { config_from_json(j); }), ErrorCode::config_error);
}
