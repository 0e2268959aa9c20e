#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dhj;

namespace {

std::vector<Vec3> ref_points(const ManipulatorConfig& cfg = reference_config()) {
  return spherical_centres(inverse_kinematics(cfg, resolve_pose(cfg, oracle::ref_pose())));
}

}  // namespace

TEST(Pairings, AdmissibleListPerLimb) {
  const auto p = enumerate_pairings(4);
  ASSERT_EQ(p.size(), 4u);
  std::size_t total = 0;
  for (const auto& l : p) total += l.size();
  EXPECT_EQ(total, 12u);
  const std::vector<ComponentPair> limb1 = {yz_pair(0, 1), yz_pair(0, 2), yz_pair(0, 3)};
  EXPECT_EQ(p[0], limb1);
  EXPECT_EQ(to_string(p[0][0].first), "1y");
  EXPECT_EQ(to_string(p[0][0].second), "2z");
}

TEST(Pairings, NamedPlans) {
  const SelectionPlan primary{{yz_pair(0, 1), yz_pair(1, 2), yz_pair(2, 3), yz_pair(3, 0)}};
  const SelectionPlan alternate{{yz_pair(0, 2), yz_pair(1, 3), yz_pair(2, 0), yz_pair(3, 1)}};
  EXPECT_EQ(primary_plan(), primary);
  EXPECT_EQ(alternate_plan(), alternate);
}

TEST(Pairings, ComponentParsing) {
  const auto c = parse_component("4z");
  EXPECT_EQ(c.point, 3);
  EXPECT_EQ(c.comp, Component::z);
  EXPECT_THROW(parse_component("0y"), Error);
  EXPECT_THROW(parse_component("1w"), Error);
  EXPECT_THROW(parse_component("y"), Error);
  EXPECT_EQ(parse_scheme("literal"), SelectionScheme::typeset);
  EXPECT_THROW(parse_scheme("other"), Error);
}

TEST(Pairings, PlanValidation) {
  EXPECT_THROW(validate_plan({{yz_pair(0, 0), yz_pair(1, 2), yz_pair(2, 3), yz_pair(3, 0)}}, 4), Error);
  EXPECT_THROW(validate_plan({{yz_pair(0, 1)}}, 4), Error);
  SelectionPlan bad = primary_plan();
  bad.pairs[0].first.comp = Component::x;
  EXPECT_THROW(validate_plan(bad, 4), Error);
}

TEST(Selection, TwoPointWeights) {
  // a_1x = 1, a_2x = -1: half of each y, unit v_1z.
  const std::vector<Vec3> pts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const auto s = build_selection_matrix(primary_plan(), pts, SelectionScheme::typeset);
  EXPECT_DOUBLE_EQ(s.s(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(s.s(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(s.s(0, 4), 0.5);
  EXPECT_DOUBLE_EQ(s.s(0, 5), 0.0);
}

TEST(Selection, LiteralSchemeReproducesTypesetMatrix) {
  const auto pts = ref_points();
  const auto s = build_selection_matrix(primary_plan(), pts, SelectionScheme::typeset).s;
  const auto ax = [&](int i) { return pts[i].x(); };
  // row, column of v_iy / v_jy weights and the unit z entry
  const int rows[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  for (int r = 0; r < 4; ++r) {
    const int i = rows[r][0], j = rows[r][1];
    EXPECT_NEAR(s(r, 3 * i + 1), -ax(j) / (ax(i) - ax(j)), 1e-12);
    EXPECT_NEAR(s(r, 3 * j + 1), ax(i) / (ax(i) - ax(j)), 1e-12);
    EXPECT_DOUBLE_EQ(s(r, 3 * std::min(i, j) + 2), 1.0);
  }
  // the fourth row takes v_1z
  EXPECT_DOUBLE_EQ(s(3, 2), 1.0);
  EXPECT_DOUBLE_EQ(s(3, 11), 0.0);
}

TEST(Selection, SparsityAtMostThreePerRow) {
  for (auto scheme : {SelectionScheme::typeset, SelectionScheme::alternating})
    for (const auto& plan : {primary_plan(), alternate_plan()}) {
      const auto s = build_selection_matrix(plan, ref_points(), scheme).s;
      for (int r = 0; r < 4; ++r) EXPECT_LE((s.row(r).array() != 0.0).count(), 3);
    }
}

TEST(Selection, DegeneratePair) {
  const std::vector<Vec3> pts = {{1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, -1, 0}};
  try {
    build_selection_matrix(primary_plan(), pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_pair);
  }
}

TEST(Selection, BothZeroXUsesEqualWeights) {
  const auto w = pair_weights(0.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(w.wi, 0.5);
  EXPECT_DOUBLE_EQ(w.wj, 0.5);
}

TEST(Selection, AnnihilationForEveryConsistentPlan) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  const auto lists = enumerate_pairings(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 4; ++i) pts.emplace_back(n(rng), n(rng), n(rng));
    SelectionPlan plan;
    for (int i = 0; i < 4; ++i) plan.pairs.push_back(lists[i][rng() % 3]);
    for (auto scheme : {SelectionScheme::typeset, SelectionScheme::alternating}) {
      const auto m = nominal_map(build_selection_matrix(plan, pts, scheme), build_vp(pts));
      for (int col : kConstrainedColumns) EXPECT_LT(m.vps.col(col).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Selection, ConstrainedTwistsHaveZeroNominalVelocity) {
  const auto pts = ref_points();
  const auto m = nominal_map(build_selection_matrix(primary_plan(), pts), build_vp(pts));
  for (int col : kConstrainedColumns) {
    Vec6 x = Vec6::Zero();
    x[col] = 1.0;
    EXPECT_LT((m.vps * x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Selection, WeightsAreScaleFree) {
  const auto a = build_selection_matrix(primary_plan(), ref_points()).s;
  std::vector<Vec3> scaled;
  for (const auto& p : ref_points()) scaled.push_back(1e-3 * p);
  const auto c = build_selection_matrix(primary_plan(), scaled).s;
  EXPECT_LT(max_abs(a - c), 1e-14);
}

TEST(NominalMap, TypesetColumnsForPrimaryPlan) {
  const auto pts = ref_points();
  const auto vp = build_vp(pts);
  const auto lit = nominal_map(build_selection_matrix(primary_plan(), pts, SelectionScheme::typeset), vp);
  // v_y and v_z coefficients all one, omega_y = -a_1x, -a_2x, -a_3x, -a_1x
  const double wy[4] = {-pts[0].x(), -pts[1].x(), -pts[2].x(), -pts[0].x()};
  for (int r = 0; r < 4; ++r) {
    EXPECT_NEAR(lit.restricted(r, 0), 1.0, 1e-12);
    EXPECT_NEAR(lit.restricted(r, 1), 1.0, 1e-12);
    EXPECT_NEAR(lit.restricted(r, 3), wy[r], 1e-9);
  }
  EXPECT_EQ(Eigen::JacobiSVD<MatX>(lit.restricted).rank(), 3);
}

TEST(NominalMap, AlternatingSchemeIsFullRank) {
  const auto pts = ref_points();
  const auto vp = build_vp(pts);
  for (const auto& plan : {primary_plan(), alternate_plan()}) {
    const auto m = nominal_map(build_selection_matrix(plan, pts), vp);
    ASSERT_EQ(m.restricted.rows(), 4);
    ASSERT_EQ(m.restricted.cols(), 4);
    const VecX s = Eigen::JacobiSVD<MatX>(m.restricted).singularValues();
    EXPECT_GT(s[3] / s[0], 1e-6);
    for (int r = 0; r < 4; ++r) {
      EXPECT_NEAR(m.restricted(r, 0), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(m.restricted(r, 1)), 1.0, 1e-12);
    }
  }
}

TEST(NominalMap, MismatchedShapesRejected) {
  const auto pts = ref_points();
  const auto s = build_selection_matrix(primary_plan(), pts);
  const auto vp = build_vp({pts[0], pts[1], pts[2]});
  EXPECT_THROW(nominal_map(s, vp), Error);
}
