#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dhj {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

enum class ErrorCode {
  no_convergence,
  unreachable,
  singular_limb,
  singular_configuration,
  block_singular,
  degenerate_points,
  degenerate_pair,
  unsupported,
  mixed_actuation,
  step_too_large,
  no_forward_solution,
  invalid_argument,
  config_error,
  io_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::unreachable: return "Unreachable";
    case ErrorCode::singular_limb: return "SingularLimb";
    case ErrorCode::singular_configuration: return "SingularConfiguration";
    case ErrorCode::block_singular: return "BlockSingular";
    case ErrorCode::degenerate_points: return "DegeneratePoints";
    case ErrorCode::degenerate_pair: return "DegeneratePair";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::mixed_actuation: return "MixedActuation";
    case ErrorCode::step_too_large: return "StepTooLarge";
    case ErrorCode::no_forward_solution: return "NoForwardSolution";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every recoverable failure in the toolkit is raised as an Error carrying a
/// code, so sweeps can turn it into a per-cell status instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class LengthUnit { mm, m };

inline std::string_view to_string(LengthUnit unit) { return unit == LengthUnit::mm ? "mm" : "m"; }

/// Factor that converts millimetres into `unit`.
inline double from_mm(LengthUnit unit) { return unit == LengthUnit::mm ? 1.0 : 1e-3; }

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

/// Axial vector of the skew-symmetric part of `m`.
inline Vec3 vee(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

inline Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

inline Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

inline Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

inline double max_abs(const MatX& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// max|a - b| / max|b|, with the denominator floored so zero references give
/// an absolute error.
inline double max_rel_error(const MatX& a, const MatX& b) {
  const double denom = std::max(max_abs(b), std::numeric_limits<double>::min());
  return max_abs(a - b) / denom;
}

}  // namespace dhj
