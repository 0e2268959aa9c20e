#pragma once

// Finite-difference and brute-force oracles for every analytic matrix.

#include "dhj/config_io.hpp"
#include "dhj/sweep.hpp"

#include <numeric>
#include <random>

namespace dhj {

struct FdSteps {
  double length = 1e-6;
  double angle = 1e-6;

  std::array<double, 4> per_coord() const { return {length, length, angle, angle}; }
};

inline FdSteps default_steps(const ManipulatorConfig& cfg) { return {1e-6 * cfg.r_b, 1e-6}; }

/// Central differences of F: R^4 -> R^m, one column per task coordinate.
template <class F>
MatX central_difference(F&& fn, const std::array<double, 4>& u, const std::array<double, 4>& h) {
  MatX out;
  for (int k = 0; k < 4; ++k) {
    auto up = u, um = u;
    up[k] += h[k];
    um[k] -= h[k];
    const VecX d = (fn(up) - fn(um)) / (2.0 * h[k]);
    if (k == 0) out.resize(d.size(), 4);
    out.col(k) = d;
  }
  return out;
}

namespace detail {

/// Pose as (origin, rotation) packed so that differences give a twist after
/// post-processing.
inline VecX pose_vector(const PlatformPose& p) {
  VecX v(12);
  v.head<3>() = p.origin;
  v.segment<9>(3) = Eigen::Map<const VecX>(p.rotation.data(), 9);
  return v;
}

template <class F>
auto guarded(F&& fn) {
  return [fn = std::forward<F>(fn)](const std::array<double, 4>& u) -> VecX {
    try {
      return fn(u);
    } catch (const Error& e) {
      throw Error(ErrorCode::step_too_large, std::string("perturbed pose failed: ") + e.what());
    }
  };
}

}  // namespace detail

/// 6 x 4 basis of the constrained tangent: column k is the twist (v, w)
/// produced by a unit rate of task coordinate k, with w = vee(dR R^T).
inline MatX fd_constraint_tangent(const ManipulatorConfig& cfg, const TaskCoords& coords, const FdSteps& h) {
  const PlatformPose base = resolve_pose(cfg, coords, EnvelopeCheck::ignore);
  const MatX d = central_difference(detail::guarded([&](const std::array<double, 4>& u) {
                                      return detail::pose_vector(
                                          resolve_pose(cfg, TaskCoords::from_array(u), EnvelopeCheck::ignore));
                                    }),
                                    coords.as_array(), h.per_coord());
  MatX t(6, 4);
  for (int k = 0; k < 4; ++k) {
    t.col(k).head<3>() = d.col(k).head<3>();
    const Mat3 dr = Eigen::Map<const Mat3>(d.col(k).segment<9>(3).data());
    t.col(k).tail<3>() = vee(dr * base.rotation.transpose());
  }
  return t;
}

struct FdActuation {
  MatX dq_du;    // f x 4
  MatX tangent;  // 6 x 4
  MatX lifted;   // f x 6, dq_du T^+
};

inline FdActuation fd_actuation_jacobian(const ManipulatorConfig& cfg, const TaskCoords& coords, const FdSteps& h) {
  FdActuation out;
  out.dq_du = central_difference(detail::guarded([&](const std::array<double, 4>& u) {
                                   return inverse_kinematics_q(cfg, TaskCoords::from_array(u));
                                 }),
                                 coords.as_array(), h.per_coord());
  out.tangent = fd_constraint_tangent(cfg, coords, h);
  out.lifted = out.dq_du * out.tangent.completeOrthogonalDecomposition().pseudoInverse();
  return out;
}

/// Nominal velocity differentiated directly against the actuators: forward
/// kinematics at q +/- h e_k, stacked spherical centres, then S. Central
/// differences at h and h/2 are Richardson-combined; near type-II
/// singularities the plain O(h^2) term dominates otherwise.
inline MatX brute_force_dhj(const ManipulatorConfig& cfg, const TaskCoords& coords, const SelectionMatrix& s, double h) {
  const PlatformPose base = resolve_pose(cfg, coords, EnvelopeCheck::ignore);
  const VecX q0 = actuator_values(inverse_kinematics(cfg, base));
  const int f = cfg.f();
  auto centres = [&](const VecX& q) {
    const PlatformPose p = forward_kinematics(cfg, q, coords);
    VecX b(3 * f);
    for (int i = 0; i < f; ++i) b.segment<3>(3 * i) = p.origin + p.rotation * cfg.platform_anchor(i);
    return b;
  };
  auto diff = [&](double step) {
    MatX db(3 * f, f);
    for (int k = 0; k < f; ++k) {
      VecX qp = q0, qm = q0;
      qp[k] += step;
      qm[k] -= step;
      db.col(k) = (centres(qp) - centres(qm)) / (2.0 * step);
    }
    return db;
  };
  const MatX coarse = diff(h), fine = diff(0.5 * h);
  return s.s * ((4.0 * fine - coarse) / 3.0);
}

// ---------------------------------------------------------------------------
// Validation run

struct OracleCheck {
  std::string name;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  int poses_tested = 0;
  bool pass = false;
  std::string note;
};

struct ValidationOptions {
  int actuation_poses = 100;
  int dhj_poses = 50;
  int unit_grid = 11;
  int plan_grid = 11;
  double z_mm = 150.0;
};

struct ValidationReport {
  std::vector<OracleCheck> checks;
  nlohmann::json extra;  // variants, measured discrepancies, printed-vs-computed entries

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
  }
  const OracleCheck* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Uniform random poses inside the envelope with y = 0. Draws that land on a
/// type-II singularity (cond(G^T) above the singular threshold) are redrawn;
/// draws that fail for any other reason are kept and counted as unreachable.
struct PoseSample {
  std::vector<TaskCoords> poses;
  int unreachable = 0;
  int singular_redraws = 0;
  std::vector<std::string> failures;
};

inline PoseSample sample_poses(const ManipulatorConfig& cfg, std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> zdist(cfg.envelope.z_min, cfg.envelope.z_max);
  PoseSample out;
  int attempts = 0;
  while (static_cast<int>(out.poses.size()) < count && attempts < 20 * count) {
    ++attempts;
    TaskCoords c;
    c.theta = cfg.envelope.theta_max * unit(rng);
    c.psi = cfg.envelope.psi_max * unit(rng);
    c.z = zdist(rng);
    try {
      const auto limbs = inverse_kinematics(cfg, resolve_pose(cfg, c));
      invert_full(build_inverse_jacobian(limbs));
      out.poses.push_back(c);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::singular_configuration) {
        ++out.singular_redraws;
        continue;
      }
      ++out.unreachable;
      if (out.failures.size() < 5) out.failures.emplace_back(e.what());
      out.poses.push_back(c);  // keep so the pose count stays honest
    }
  }
  return out;
}

namespace detail {

inline OracleCheck make_check(std::string name, double tol) {
  OracleCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  return c;
}

inline void accumulate(OracleCheck& c, const MatX& got, const MatX& ref) {
  c.max_abs_err = std::max(c.max_abs_err, max_abs(got - ref));
  c.max_rel_err = std::max(c.max_rel_err, max_rel_error(got, ref));
  ++c.poses_tested;
}

inline std::array<double, 4> printed_omega_x_column(const std::vector<Vec3>& a) {
  // Rows of the restricted nominal map as typeset (1-based indices in names).
  const auto& a1 = a[0];
  const auto& a2 = a[1];
  const auto& a3 = a[2];
  const auto& a4 = a[3];
  return {(a1.y() * a1.x() - a2.x() * a1.z() + a1.x() * a3.z()) / (a1.x() - a2.x()),
          (a3.y() * a2.x() + a2.x() * a3.z() - a3.x() * a3.z()) / (a2.x() - a3.x()),
          (a3.y() * a3.x() + a3.x() * a4.z() - a4.x() * a3.z()) / (a3.x() - a4.x()),
          (a1.y() * a1.x() + a1.x() * a4.z() - a4.x() * a1.z()) / (a1.x() - a4.x())};
}

}  // namespace detail

inline constexpr double kTolActuation = 1e-5;
inline constexpr double kTolTangent = 1e-7;
inline constexpr double kTolInverse = 1e-10;
inline constexpr double kTolBlock = 1e-9;
inline constexpr double kTolDhj = 1e-5;
inline constexpr double kTolAnnihilation = 1e-12;
inline constexpr double kTolPlan = 1e-6;
inline constexpr double kMinStepOrder = 1.7;

/// A pose away from the theta = 0 singular line, used for single-pose checks.
inline TaskCoords reference_pose(const ManipulatorConfig& cfg) {
  return {0.0, 150.0 * from_mm(cfg.unit), deg2rad(10.0), deg2rad(10.0)};
}

inline double relative_to(const MatX& err, const MatX& ref) { return max_abs(err) / std::max(max_abs(ref), 1e-300); }

inline ValidationReport run_validation(const ManipulatorConfig& cfg, const ValidationOptions& opt = {}) {
  ValidationReport rep;
  std::mt19937_64 rng(cfg.seed);
  const FdSteps h = default_steps(cfg);

  // reachability over the random pose set
  const PoseSample sample = sample_poses(cfg, rng, opt.actuation_poses);
  {
    auto c = detail::make_check("reachability", 0.0);
    c.poses_tested = static_cast<int>(sample.poses.size());
    c.max_abs_err = sample.unreachable;
    c.pass = sample.unreachable == 0 && c.poses_tested == opt.actuation_poses;
    c.note = std::to_string(sample.unreachable) + " unreachable, " + std::to_string(sample.singular_redraws) +
             " singular redraws";
    for (const auto& f : sample.failures) c.note += "; " + f;
    rep.checks.push_back(c);
  }

  auto act = detail::make_check("actuation_fd", kTolActuation);
  auto tan = detail::make_check("constraint_tangent", kTolTangent);
  auto inv = detail::make_check("inversion_residual", kTolInverse);
  auto blk = detail::make_check("block_formula", kTolBlock);
  auto ann_p = detail::make_check("annihilation_primary", kTolAnnihilation);
  auto ann_a = detail::make_check("annihilation_alternate", kTolAnnihilation);
  std::array<double, 4> variant_err{};
  const RowRecipe variants[4] = {{RowAssignment::literal, MomentOrder::point_first},
                                 {RowAssignment::literal, MomentOrder::direction_first},
                                 {RowAssignment::swapped, MomentOrder::direction_first},
                                 {RowAssignment::swapped, MomentOrder::point_first}};

  for (const auto& c : sample.poses) {
    try {
      const PlatformPose pose = resolve_pose(cfg, c);
      const auto limbs = inverse_kinematics(cfg, pose);
      const InverseJacobian g = build_inverse_jacobian(limbs);
      const FdActuation fd = fd_actuation_jacobian(cfg, c, h);

      const MatX ga_t = g.actuation() * fd.tangent;
      detail::accumulate(act, ga_t, fd.dq_du);
      for (int v = 0; v < 4; ++v) {
        try {
          const MatX gv = build_inverse_jacobian(limbs, variants[v]).actuation() * fd.tangent;
          variant_err[v] = std::max(variant_err[v], max_rel_error(gv, fd.dq_du));
        } catch (const Error&) {
          variant_err[v] = std::numeric_limits<double>::infinity();
        }
      }

      // G_c^T T must vanish; relative to the scale of G_c^T T's ingredients.
      const MatX gct = g.constraint() * fd.tangent;
      tan.max_abs_err = std::max(tan.max_abs_err, max_abs(gct));
      tan.max_rel_err = std::max(tan.max_rel_err, max_abs(gct) / std::max(1e-300, max_abs(g.constraint()) * max_abs(fd.tangent)));
      ++tan.poses_tested;

      const ForwardJacobian j = invert_full(g);
      const MatX resid = MatX(g.gt * j.j) - MatX::Identity(6, 6);
      inv.max_abs_err = std::max(inv.max_abs_err, max_abs(resid));
      inv.max_rel_err = inv.max_abs_err;
      ++inv.poses_tested;
      detail::accumulate(blk, block_ja(g), j.ja());

      const auto pts = spherical_centres(limbs);
      const PointVelocityMap vp = build_vp(pts);
      for (int which = 0; which < 2; ++which) {
        const auto s = build_selection_matrix(which == 0 ? primary_plan() : alternate_plan(), pts);
        const MatX vps = nominal_map(s, vp).vps;
        OracleCheck& ann = which == 0 ? ann_p : ann_a;
        const double e = std::max(vps.col(0).cwiseAbs().maxCoeff(), vps.col(5).cwiseAbs().maxCoeff());
        ann.max_abs_err = std::max(ann.max_abs_err, e);
        ann.max_rel_err = std::max(ann.max_rel_err, e / std::max(max_abs(vps), 1e-300));
        ++ann.poses_tested;
      }
    } catch (const Error& e) {
      for (OracleCheck* k : {&act, &tan, &inv, &blk, &ann_p, &ann_a})
        if (k->note.empty()) k->note = std::string("pose failed: ") + e.what();
      act.max_rel_err = std::numeric_limits<double>::infinity();
    }
  }
  act.pass = act.poses_tested >= opt.actuation_poses && act.max_rel_err < kTolActuation;
  tan.pass = tan.poses_tested >= opt.actuation_poses && tan.max_abs_err < kTolTangent * std::max(1.0, cfg.r_b) &&
             tan.max_rel_err < kTolTangent;
  tan.note += tan.note.empty() ? "" : "; ";
  tan.note += "pass on relative error (|G_c^T T| / (|G_c^T| |T|))";
  inv.pass = inv.poses_tested >= opt.actuation_poses && inv.max_abs_err < kTolInverse;
  blk.pass = blk.poses_tested >= opt.actuation_poses && blk.max_rel_err < kTolBlock;
  ann_p.pass = ann_p.poses_tested > 0 && ann_p.max_rel_err < kTolAnnihilation;
  ann_a.pass = ann_a.poses_tested > 0 && ann_a.max_rel_err < kTolAnnihilation;
  for (auto* k : {&act, &tan, &inv, &blk, &ann_p, &ann_a}) rep.checks.push_back(*k);

  {
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < 4; ++i)
      v.push_back({{"assignment", to_string(variants[i].assignment)},
                   {"moment", to_string(variants[i].moment)},
                   {"max_rel_err_vs_fd", variant_err[i]},
                   {"adopted", variants[i].assignment == kAdoptedRecipe.assignment &&
                                   variants[i].moment == kAdoptedRecipe.moment}});
    rep.extra["row_recipe_variants"] = v;
    rep.extra["selection_scheme"] = "alternating";
    rep.extra["block_inverse"] = "pseudo-inverse partition with A = G_av^T";
    rep.extra["u_joint_axis"] = "s3 = unit(l x s2)";
  }

  // DHJ against forward-kinematics differences
  {
    auto c = detail::make_check("dhj_fd", kTolDhj);
    const double hq = 1e-6 * cfg.r_b;
    std::mt19937_64 rng2(cfg.seed + 1);
    const PoseSample dsample = sample_poses(cfg, rng2, opt.dhj_poses);
    for (const auto& p : dsample.poses) {
      try {
        const PoseAnalysis a = evaluate_pose(cfg, p);
        const MatX bf = brute_force_dhj(cfg, p, a.s, hq);
        detail::accumulate(c, a.record.j_dh, bf);
      } catch (const Error& e) {
        if (c.note.empty()) c.note = std::string("pose failed: ") + e.what();
        c.max_rel_err = std::numeric_limits<double>::infinity();
      }
    }
    c.pass = c.poses_tested >= opt.dhj_poses && c.max_rel_err < kTolDhj;
    rep.checks.push_back(c);
  }

  // step-size order of the actuation oracle, truncation-dominated steps
  {
    auto c = detail::make_check("fd_step_order", kMinStepOrder);
    const TaskCoords p = reference_pose(cfg);
    try {
      const auto limbs = inverse_kinematics(cfg, resolve_pose(cfg, p));
      const InverseJacobian g = build_inverse_jacobian(limbs);
      std::vector<double> logh, loge;
      for (int k = 0; k < 4; ++k) {
        const double scale = std::ldexp(1.0, -k);
        const FdSteps hs{2e-2 * cfg.r_b * scale, 2e-2 * scale};
        const FdActuation fd = fd_actuation_jacobian(cfg, p, hs);
        logh.push_back(std::log(scale));
        loge.push_back(std::log(max_abs(g.actuation() * fd.tangent - fd.dq_du)));
      }
      const double mh = std::accumulate(logh.begin(), logh.end(), 0.0) / 4.0;
      const double me = std::accumulate(loge.begin(), loge.end(), 0.0) / 4.0;
      double num = 0.0, den = 0.0;
      for (int k = 0; k < 4; ++k) {
        num += (logh[k] - mh) * (loge[k] - me);
        den += (logh[k] - mh) * (logh[k] - mh);
      }
      // both error fields carry the fitted order here
      c.max_abs_err = c.max_rel_err = num / den;
      c.poses_tested = 1;
      c.pass = c.max_rel_err >= kMinStepOrder;
      c.note = "value is the fitted log-log slope of the G_a^T T vs FD mismatch over 4 halvings";
    } catch (const Error& e) {
      c.note = e.what();
    }
    rep.checks.push_back(c);
  }

  SweepSpec grid;
  grid.theta_steps = grid.psi_steps = opt.unit_grid;
  grid.theta_min_deg = -rad2deg(cfg.envelope.theta_max);
  grid.theta_max_deg = rad2deg(cfg.envelope.theta_max);
  grid.psi_min_deg = -rad2deg(cfg.envelope.psi_max);
  grid.psi_max_deg = rad2deg(cfg.envelope.psi_max);
  grid.z_mm = opt.z_mm;
  // keep z inside the envelope when the config is not the reference one
  {
    const double z_work = grid.z_mm * from_mm(cfg.unit);
    if (z_work < cfg.envelope.z_min || z_work > cfg.envelope.z_max)
      grid.z_mm = 0.5 * (cfg.envelope.z_min + cfg.envelope.z_max) / from_mm(cfg.unit);
  }

  {
    auto c = detail::make_check("unit_invariance", kUnitInvarianceTol);
    try {
      const double s = cfg.unit == LengthUnit::mm ? 1e-3 : 1e3;
      const UnitScalingReport u = unit_scaling_experiment(cfg, grid, s);
      c.max_rel_err = u.max_dev_dh;
      c.max_abs_err = u.max_dev_g;
      c.poses_tested = u.compared;
      c.pass = u.dh_invariant;
      c.note = "max_abs_err holds the relative shift of cond(G^T): " + format_double(u.max_dev_g);
    } catch (const Error& e) {
      c.note = e.what();
    }
    rep.checks.push_back(c);
  }

  // Plan equivalence is measured, not assumed. The check passes when the
  // measurement is recorded; `within_tolerance` says whether the plans agree.
  {
    auto c = detail::make_check("plan_equivalence", kTolPlan);
    SweepSpec pg = grid;
    pg.theta_steps = pg.psi_steps = opt.plan_grid;
    SweepSpec ag = pg;
    ag.plan = alternate_plan();
    try {
      const SweepResult rp = run_sweep(cfg, pg), ra = run_sweep(cfg, ag);
      double worst = 0.0;
      int n = 0;
      for (std::size_t k = 0; k < rp.cells.size(); ++k) {
        if (!(rp.cells[k].ok() && ra.cells[k].ok())) continue;
        worst = std::max(worst, rel_dev(rp.cells[k].cond_dh, ra.cells[k].cond_dh));
        ++n;
      }
      c.max_rel_err = worst;
      c.poses_tested = n;
      c.pass = n > 0;
      rep.extra["plan_equivalence"] = {{"max_rel_discrepancy", worst},
                                       {"within_tolerance", worst < kTolPlan},
                                       {"cells_compared", n}};
      c.note = worst < kTolPlan ? "plans agree" : "plans disagree; discrepancy documented";
    } catch (const Error& e) {
      c.note = e.what();
    }
    rep.checks.push_back(c);
  }

  {
    auto c = detail::make_check("mobility", 0.0);
    try {
      const int m = tsai_mobility(cfg.mobility);
      c.max_abs_err = std::abs(m - cfg.f());
      c.pass = m == cfg.f();
      c.note = "F = " + std::to_string(m);
    } catch (const Error& e) {
      c.note = e.what();
    }
    c.poses_tested = 1;
    rep.checks.push_back(c);
  }

  // Typeset selection weights: rank of the restricted nominal map, and the
  // printed omega_x column compared to the computed one.
  try {
    const TaskCoords p = reference_pose(cfg);
    const auto limbs = inverse_kinematics(cfg, resolve_pose(cfg, p));
    const auto pts = spherical_centres(limbs);
    const auto vp = build_vp(pts);
    const auto lit = nominal_map(build_selection_matrix(primary_plan(), pts, SelectionScheme::typeset), vp);
    const auto alt = nominal_map(build_selection_matrix(primary_plan(), pts, SelectionScheme::alternating), vp);
    const auto rank = [](const MatX& m) {
      const VecX s = singular_values(m);
      return static_cast<int>((s.array() > 1e-9 * s[0]).count());
    };
    const auto printed = detail::printed_omega_x_column(pts);
    nlohmann::json rows = nlohmann::json::array();
    int mismatches = 0;
    for (int r = 0; r < 4; ++r) {
      const double computed = lit.restricted(r, 2);
      const bool match = std::abs(computed - printed[r]) <= 1e-9 * std::max(1.0, std::abs(computed));
      mismatches += !match;
      rows.push_back({{"row", r + 1}, {"printed", printed[r]}, {"computed", computed}, {"match", match}});
    }
    rep.extra["typeset_selection"] = {{"pose_deg", {0.0, rad2deg(p.theta), rad2deg(p.psi)}},
                                     {"literal_rank", rank(lit.restricted)},
                                     {"alternating_rank", rank(alt.restricted)},
                                     {"omega_x_column", rows},
                                     {"omega_x_mismatches", mismatches}};
  } catch (const Error& e) {
    rep.extra["typeset_selection"] = {{"error", e.what()}};
  }
  return rep;
}

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["all_pass"] = r.all_pass();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"max_abs_err", c.max_abs_err},
                      {"max_rel_err", c.max_rel_err},
                      {"tolerance", c.tolerance},
                      {"poses_tested", c.poses_tested},
                      {"pass", c.pass},
                      {"note", c.note}});
  j["checks"] = checks;
  j["details"] = r.extra;
  return j;
}

}  // namespace dhj
