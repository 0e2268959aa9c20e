#pragma once

// Geometry, constrained pose resolution and inverse kinematics for the
// TyTzRxRy 2-PUS/2-PRS reference manipulator.
//
// Conventions:
//   R = Rx(theta) * Ry(psi) * Rz(phi_z); phi_z and x are dependent.
//   Limb i has its base point A_i at angle alpha_i on the base circle and its
//   platform anchor at the same angle on the moving-plate circle.
//   Prismatic axes are parallel to z; C_i = A_i + q_i * z.

#include "dhj/common.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace dhj {

enum class LimbKind { pus, prs };
enum class ActuatorKind { linear, rotational, mixed };

inline std::string_view to_string(LimbKind k) { return k == LimbKind::pus ? "PUS" : "PRS"; }

inline std::string_view to_string(ActuatorKind k) {
  switch (k) {
    case ActuatorKind::linear: return "linear";
    case ActuatorKind::rotational: return "rotational";
    case ActuatorKind::mixed: return "mixed";
  }
  return "unknown";
}

struct LimbSpec {
  double base_angle = 0.0;  // rad
  LimbKind kind = LimbKind::pus;
  Vec3 base_axis = Vec3::UnitX();    // U first axis (PUS) or R axis (PRS)
  Vec3 second_axis = Vec3::UnitY();  // U second axis at the reference configuration
};

/// Counts for the Tsai mobility formula F = lambda (n - j - 1) + sum f_i.
struct MobilityInputs {
  int lambda = 6;
  int n = 10;
  int j = 12;
  int joint_freedom_sum = 22;
};

struct Envelope {
  double theta_max = deg2rad(50.0);
  double psi_max = deg2rad(50.0);
  double z_min = 100.0;
  double z_max = 200.0;
};

struct ManipulatorConfig {
  double r_a = 200.0;  // moving plate radius
  double r_b = 450.0;  // base radius
  double l = 687.0;    // fixed link length
  std::vector<LimbSpec> limbs;
  ActuatorKind actuator = ActuatorKind::linear;
  MobilityInputs mobility;
  LengthUnit unit = LengthUnit::mm;
  Envelope envelope;
  std::uint64_t seed = 42;

  int f() const { return static_cast<int>(limbs.size()); }

  Vec3 base_point(int i) const {
    const double a = limbs[i].base_angle;
    return {r_b * std::cos(a), r_b * std::sin(a), 0.0};
  }

  /// Anchor of limb i expressed in the moving frame.
  Vec3 platform_anchor(int i) const {
    const double a = limbs[i].base_angle;
    return {r_a * std::cos(a), r_a * std::sin(a), 0.0};
  }
};

/// Structural parameters of the reference mechanism, in millimetres.
inline ManipulatorConfig reference_config() {
  ManipulatorConfig cfg;
  for (int i = 0; i < 4; ++i) {
    LimbSpec limb;
    limb.base_angle = deg2rad(90.0 * i);
    limb.kind = (i % 2 == 0) ? LimbKind::pus : LimbKind::prs;
    cfg.limbs.push_back(limb);
  }
  return cfg;
}

/// Throws ConfigError unless the configuration describes a supported mechanism.
inline void validate_config(const ManipulatorConfig& cfg) {
  if (!(cfg.r_a > 0.0) || !(cfg.r_b > 0.0) || !(cfg.l > 0.0))
    throw Error(ErrorCode::config_error, "r_a, r_b and l must be positive");
  if (cfg.f() != 4)
    throw Error(ErrorCode::config_error, "only the 4-limb TyTzRxRy motion class is modelled");
  int prs = 0;
  for (const auto& limb : cfg.limbs) {
    if (limb.kind == LimbKind::prs) ++prs;
    if (std::abs(limb.base_axis.norm() - 1.0) > 1e-12)
      throw Error(ErrorCode::config_error, "joint axis templates must be unit vectors");
  }
  if (prs != 6 - cfg.f())
    throw Error(ErrorCode::config_error, "expected one PRS limb per constrained freedom (2)");
  // Anchors on a circle are collinear only if fewer than three angles are distinct.
  int distinct = 0;
  for (int i = 0; i < cfg.f(); ++i) {
    bool seen = false;
    for (int k = 0; k < i; ++k)
      if ((cfg.base_point(i) - cfg.base_point(k)).norm() < 1e-9 * cfg.r_b) seen = true;
    if (!seen) ++distinct;
  }
  if (distinct < 3) throw Error(ErrorCode::config_error, "limb anchors are collinear");
  if (cfg.envelope.z_min > cfg.envelope.z_max)
    throw Error(ErrorCode::config_error, "envelope z_min exceeds z_max");
}

/// Multiplies every length (geometry and envelope heights) by `s`.
inline ManipulatorConfig scaled(ManipulatorConfig cfg, double s) {
  cfg.r_a *= s;
  cfg.r_b *= s;
  cfg.l *= s;
  cfg.envelope.z_min *= s;
  cfg.envelope.z_max *= s;
  return cfg;
}

/// Re-expresses `cfg` in another working unit.
inline ManipulatorConfig in_unit(const ManipulatorConfig& cfg, LengthUnit unit) {
  ManipulatorConfig out = scaled(cfg, from_mm(unit) / from_mm(cfg.unit));
  out.unit = unit;
  return out;
}

/// Independent task coordinates (y, z in the working unit; angles in rad).
struct TaskCoords {
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double psi = 0.0;

  std::array<double, 4> as_array() const { return {y, z, theta, psi}; }
  static TaskCoords from_array(const std::array<double, 4>& u) { return {u[0], u[1], u[2], u[3]}; }
};

struct PlatformPose {
  TaskCoords coords;
  double x = 0.0;      // dependent translation
  double phi_z = 0.0;  // dependent rotation about z
  Mat3 rotation = Mat3::Identity();
  Vec3 origin = Vec3::Zero();
};

struct LimbKinematics {
  LimbKind kind = LimbKind::pus;
  Vec3 A, B, C;  // base point, spherical centre, U/R centre
  double q = 0.0;
  Vec3 a;  // moving origin -> B, fixed-frame components
  Vec3 b;  // fixed origin -> A
  Vec3 l;  // C -> B
  Vec3 s1, s2, s3;
  Vec3 n;  // s3 x s2
};

enum class EnvelopeCheck { enforce, ignore };

namespace detail {

inline Mat3 platform_rotation(double theta, double psi, double phi_z) {
  return rot_x(theta) * rot_y(psi) * rot_z(phi_z);
}

/// s2 . (B_i - A_i) for every PRS limb, in limb order.
inline Eigen::Vector2d plane_residual(const ManipulatorConfig& cfg, const Vec3& origin, const Mat3& rot) {
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  int k = 0;
  for (int i = 0; i < cfg.f() && k < 2; ++i) {
    if (cfg.limbs[i].kind != LimbKind::prs) continue;
    const Vec3 b = origin + rot * cfg.platform_anchor(i);
    r[k++] = cfg.limbs[i].base_axis.dot(b - cfg.base_point(i));
  }
  return r;
}

}  // namespace detail

inline bool within_envelope(const ManipulatorConfig& cfg, const TaskCoords& c) {
  constexpr double slack = 1e-12;
  const auto& env = cfg.envelope;
  const double zs = slack * std::max(1.0, std::abs(env.z_max));
  return std::abs(c.theta) <= env.theta_max + slack && std::abs(c.psi) <= env.psi_max + slack &&
         c.z >= env.z_min - zs && c.z <= env.z_max + zs;
}

/// Solves the PRS plane constraints for the dependent coordinates (x, phi_z)
/// by damped Newton from (0, 0).
inline PlatformPose resolve_pose(const ManipulatorConfig& cfg, const TaskCoords& coords,
                                 EnvelopeCheck check = EnvelopeCheck::enforce) {
  if (check == EnvelopeCheck::enforce && !within_envelope(cfg, coords))
    throw Error(ErrorCode::unreachable, "pose outside the workspace envelope");

  constexpr int kMaxIter = 50;
  const double tol = std::max(1e-12, 64.0 * std::numeric_limits<double>::epsilon() * cfg.r_b);
  const Mat3 tilt = rot_x(coords.theta) * rot_y(coords.psi);

  double x = 0.0, phi = 0.0;
  auto eval = [&](double xx, double pp) {
    const Vec3 o(xx, coords.y, coords.z);
    return detail::plane_residual(cfg, o, tilt * rot_z(pp));
  };

  Eigen::Vector2d r = eval(x, phi);
  for (int it = 0; r.lpNorm<Eigen::Infinity>() > tol; ++it) {
    if (it >= kMaxIter) throw Error(ErrorCode::no_convergence, "dependent-coordinate solve exceeded 50 iterations");
    const Mat3 rot = tilt * rot_z(phi);
    Eigen::Matrix2d jac;
    int k = 0;
    for (int i = 0; i < cfg.f() && k < 2; ++i) {
      if (cfg.limbs[i].kind != LimbKind::prs) continue;
      const Vec3& s = cfg.limbs[i].base_axis;
      jac(k, 0) = s.x();
      jac(k, 1) = s.dot(rot * Vec3::UnitZ().cross(cfg.platform_anchor(i)));
      ++k;
    }
    const auto lu = jac.fullPivLu();
    if (!lu.isInvertible()) throw Error(ErrorCode::no_convergence, "plane-constraint Jacobian is singular");
    const Eigen::Vector2d step = lu.solve(-r);
    double damping = 1.0;
    Eigen::Vector2d trial = eval(x + step[0], phi + step[1]);
    while (trial.norm() >= r.norm() && damping > 1e-6) {
      damping *= 0.5;
      trial = eval(x + damping * step[0], phi + damping * step[1]);
    }
    if (trial.norm() >= r.norm()) {
      // Stagnated at the rounding floor.
      if (r.lpNorm<Eigen::Infinity>() <= 1e-10 * std::max(1.0, cfg.r_b)) break;
      throw Error(ErrorCode::no_convergence, "dependent-coordinate solve stagnated");
    }
    x += damping * step[0];
    phi += damping * step[1];
    r = trial;
  }

  PlatformPose pose;
  pose.coords = coords;
  pose.x = x;
  pose.phi_z = phi;
  pose.rotation = detail::platform_rotation(coords.theta, coords.psi, phi);
  pose.origin = Vec3(x, coords.y, coords.z);
  return pose;
}

/// Elbow-down inverse kinematics: C_i lies below B_i on the prismatic axis.
inline std::vector<LimbKinematics> inverse_kinematics(const ManipulatorConfig& cfg, const PlatformPose& pose) {
  std::vector<LimbKinematics> out;
  out.reserve(cfg.limbs.size());
  for (int i = 0; i < cfg.f(); ++i) {
    const LimbSpec& spec = cfg.limbs[i];
    LimbKinematics k;
    k.kind = spec.kind;
    k.A = cfg.base_point(i);
    k.b = k.A;
    k.B = pose.origin + pose.rotation * cfg.platform_anchor(i);
    k.a = k.B - pose.origin;
    const double dxy2 = (k.B - k.A).head<2>().squaredNorm();
    const double disc = cfg.l * cfg.l - dxy2;
    if (disc < 0.0)
      throw Error(ErrorCode::unreachable, "limb " + std::to_string(i + 1) + " cannot reach its spherical joint");
    k.q = k.B.z() - std::sqrt(disc);
    k.C = k.A + k.q * Vec3::UnitZ();
    k.l = k.B - k.C;
    k.s1 = Vec3::UnitZ();
    k.s2 = spec.base_axis;
    // Axis normal to both the link and the first joint axis.
    Vec3 s3 = k.l.cross(k.s2);
    const double s3n = s3.norm();
    if (s3n < 1e-12 * k.l.norm())
      throw Error(ErrorCode::singular_limb, "link parallel to the first joint axis");
    s3 /= s3n;
    if (s3.dot(spec.second_axis) < 0.0) s3 = -s3;
    k.s3 = s3;
    k.n = k.s3.cross(k.s2);
    out.push_back(k);
  }
  return out;
}

inline VecX actuator_values(const std::vector<LimbKinematics>& limbs) {
  VecX q(static_cast<Eigen::Index>(limbs.size()));
  for (std::size_t i = 0; i < limbs.size(); ++i) q[static_cast<Eigen::Index>(i)] = limbs[i].q;
  return q;
}

inline VecX inverse_kinematics_q(const ManipulatorConfig& cfg, const TaskCoords& coords,
                                 EnvelopeCheck check = EnvelopeCheck::ignore) {
  return actuator_values(inverse_kinematics(cfg, resolve_pose(cfg, coords, check)));
}

inline int tsai_mobility(const MobilityInputs& m) {
  if (m.lambda < 0 || m.n < 0 || m.j < 0 || m.joint_freedom_sum < 0)
    throw Error(ErrorCode::invalid_argument, "mobility counts must be nonnegative");
  return m.lambda * (m.n - m.j - 1) + m.joint_freedom_sum;
}

/// Numeric forward kinematics: Newton on IK(u) = q over the independent
/// coordinates, starting from `guess`. The Jacobian is taken by central
/// differences of the inverse kinematics only.
inline PlatformPose forward_kinematics(const ManipulatorConfig& cfg, const VecX& q, const TaskCoords& guess,
                                       int max_iter = 50) {
  const double len = cfg.r_b;
  const std::array<double, 4> h = {1e-6 * len, 1e-6 * len, 1e-6, 1e-6};
  const double tol = 1e-13 * len;

  auto residual = [&](const std::array<double, 4>& u) {
    return VecX(inverse_kinematics_q(cfg, TaskCoords::from_array(u)) - q);
  };

  std::array<double, 4> u = guess.as_array();
  try {
    VecX r = residual(u);
    for (int it = 0; it < max_iter; ++it) {
      if (r.lpNorm<Eigen::Infinity>() <= tol) return resolve_pose(cfg, TaskCoords::from_array(u), EnvelopeCheck::ignore);
      MatX jac(q.size(), 4);
      for (int k = 0; k < 4; ++k) {
        auto up = u, um = u;
        up[k] += h[k];
        um[k] -= h[k];
        jac.col(k) = (residual(up) - residual(um)) / (2.0 * h[k]);
      }
      const VecX step = jac.colPivHouseholderQr().solve(-r);
      // Trial points that leave the reachable set count as rejected steps.
      double damping = 1.0;
      for (;;) {
        std::array<double, 4> trial = u;
        for (int k = 0; k < 4; ++k) trial[k] += damping * step[k];
        std::optional<VecX> rt;
        try {
          rt = residual(trial);
        } catch (const Error&) {
          if (damping < 1e-4) throw;
        }
        if (rt && (rt->norm() < r.norm() || damping < 1e-4)) {
          u = trial;
          r = *rt;
          break;
        }
        damping *= 0.5;
      }
    }
    if (r.lpNorm<Eigen::Infinity>() <= 1e3 * tol) return resolve_pose(cfg, TaskCoords::from_array(u), EnvelopeCheck::ignore);
  } catch (const Error& e) {
    throw Error(ErrorCode::no_forward_solution, e.what());
  }
  throw Error(ErrorCode::no_forward_solution, "forward refinement did not converge");
}

}  // namespace dhj
