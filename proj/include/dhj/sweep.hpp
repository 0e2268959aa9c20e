#pragma once

// Condition-number maps over the (theta, psi) workspace at fixed y, z.

#include "dhj/dexterity.hpp"

#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>

namespace dhj {

struct SweepSpec {
  double theta_min_deg = -50.0, theta_max_deg = 50.0;
  double psi_min_deg = -50.0, psi_max_deg = 50.0;
  int theta_steps = 51;
  int psi_steps = 51;
  double y_mm = 0.0;
  double z_mm = 150.0;
  SelectionPlan plan = primary_plan();
  SelectionScheme scheme = SelectionScheme::alternating;
  unsigned threads = 1;
};

enum class CellStatus {
  ok,
  unreachable,
  no_convergence,
  singular_limb,
  singular_configuration,
  singular_dhj,
  degenerate_pair,
  error,
};

inline std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::unreachable: return "unreachable";
    case CellStatus::no_convergence: return "no_convergence";
    case CellStatus::singular_limb: return "singular_limb";
    case CellStatus::singular_configuration: return "singular_configuration";
    case CellStatus::singular_dhj: return "singular_dhj";
    case CellStatus::degenerate_pair: return "degenerate_pair";
    case CellStatus::error: return "error";
  }
  return "error";
}

inline CellStatus status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::unreachable: return CellStatus::unreachable;
    case ErrorCode::no_convergence: return CellStatus::no_convergence;
    case ErrorCode::singular_limb: return CellStatus::singular_limb;
    case ErrorCode::singular_configuration:
    case ErrorCode::block_singular: return CellStatus::singular_configuration;
    case ErrorCode::degenerate_pair: return CellStatus::degenerate_pair;
    default: return CellStatus::error;
  }
}

struct SweepCell {
  double theta_deg = 0.0;
  double psi_deg = 0.0;
  CellStatus status = CellStatus::error;
  double cond_g = 0.0;   // valid only when status == ok
  double cond_dh = 0.0;

  bool ok() const { return status == CellStatus::ok; }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // theta outer, psi inner
};

inline double grid_value(double lo, double hi, int steps, int k) {
  if (steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

inline void validate_sweep(const ManipulatorConfig& cfg, const SweepSpec& spec) {
  if (spec.theta_steps < 2 || spec.psi_steps < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least 2 steps per axis");
  const double slack = 1e-9;
  const double tmax = rad2deg(cfg.envelope.theta_max) + slack, pmax = rad2deg(cfg.envelope.psi_max) + slack;
  if (spec.theta_min_deg > spec.theta_max_deg || spec.psi_min_deg > spec.psi_max_deg)
    throw Error(ErrorCode::invalid_argument, "empty sweep range");
  if (std::abs(spec.theta_min_deg) > tmax || std::abs(spec.theta_max_deg) > tmax || std::abs(spec.psi_min_deg) > pmax ||
      std::abs(spec.psi_max_deg) > pmax)
    throw Error(ErrorCode::invalid_argument, "sweep range exceeds the workspace envelope");
}

inline SweepCell evaluate_cell(const ManipulatorConfig& cfg, const SweepSpec& spec, int it, int ip) {
  SweepCell c;
  c.theta_deg = grid_value(spec.theta_min_deg, spec.theta_max_deg, spec.theta_steps, it);
  c.psi_deg = grid_value(spec.psi_min_deg, spec.psi_max_deg, spec.psi_steps, ip);
  const double u = from_mm(cfg.unit);
  const TaskCoords coords{spec.y_mm * u, spec.z_mm * u, deg2rad(c.theta_deg), deg2rad(c.psi_deg)};
  PipelineOptions opt;
  opt.plan = spec.plan;
  opt.scheme = spec.scheme;
  try {
    const PoseAnalysis a = evaluate_pose(cfg, coords, opt);
    if (!(a.record.k <= kSingularCondition)) {
      c.status = CellStatus::singular_dhj;
      return c;
    }
    c.cond_g = a.record.k_conventional;
    c.cond_dh = a.record.k;
    c.status = CellStatus::ok;
  } catch (const Error& e) {
    c.status = status_for(e.code());
  }
  return c;
}

/// Cells may be computed on several threads; storage is by grid index so the
/// output order never depends on scheduling.
inline SweepResult run_sweep(const ManipulatorConfig& cfg, const SweepSpec& spec) {
  validate_sweep(cfg, spec);
  SweepResult r;
  r.spec = spec;
  const int n = spec.theta_steps * spec.psi_steps;
  r.cells.resize(static_cast<std::size_t>(n));
  auto work = [&](int begin, int stride) {
    for (int k = begin; k < n; k += stride)
      r.cells[static_cast<std::size_t>(k)] = evaluate_cell(cfg, spec, k / spec.psi_steps, k % spec.psi_steps);
  };
  const int threads = static_cast<int>(std::max(1u, spec.threads));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return r;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "theta_deg,psi_deg,cond_G,cond_Jdh,status\n";
  for (const auto& c : r.cells) {
    os << format_double(c.theta_deg) << ',' << format_double(c.psi_deg) << ',';
    if (c.ok()) os << format_double(c.cond_g) << ',' << format_double(c.cond_dh);
    else os << ',';
    os << ',' << to_string(c.status) << '\n';
  }
}

struct SweepSummary {
  int ok = 0;
  int skipped = 0;
  double median_cond_g = 0.0;
  double median_cond_dh = 0.0;
  double min_cond_dh = 0.0;
  double min_theta_deg = 0.0, min_psi_deg = 0.0;
  double max_cond_dh = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

inline SweepSummary summarize(const SweepResult& r) {
  SweepSummary s;
  std::vector<double> g, dh;
  s.min_cond_dh = std::numeric_limits<double>::infinity();
  for (const auto& c : r.cells) {
    if (!c.ok()) {
      ++s.skipped;
      continue;
    }
    ++s.ok;
    g.push_back(c.cond_g);
    dh.push_back(c.cond_dh);
    if (c.cond_dh < s.min_cond_dh) {
      s.min_cond_dh = c.cond_dh;
      s.min_theta_deg = c.theta_deg;
      s.min_psi_deg = c.psi_deg;
    }
    s.max_cond_dh = std::max(s.max_cond_dh, c.cond_dh);
  }
  s.median_cond_g = median(g);
  s.median_cond_dh = median(dh);
  return s;
}

inline double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

struct UnitCell {
  double theta_deg = 0.0, psi_deg = 0.0;
  CellStatus status = CellStatus::error;  // worst of the two runs
  double k_g_a = 0.0, k_g_b = 0.0;        // base unit, scaled unit
  double k_dh_a = 0.0, k_dh_b = 0.0;
};

struct UnitScalingReport {
  double scale = 1.0;
  std::vector<UnitCell> cells;
  int compared = 0;
  double max_dev_dh = 0.0;
  double max_dev_g = 0.0;
  bool dh_invariant = false;  // max_dev_dh < 1e-9
  bool g_varies = false;      // max_dev_g > 10 %
};

inline constexpr double kUnitInvarianceTol = 1e-9;
inline constexpr double kConventionalShift = 0.1;

/// Sweeps `cfg` and the same mechanism with every length multiplied by `s`.
/// Poses are the same physical poses in both runs.
inline UnitScalingReport unit_scaling_experiment(const ManipulatorConfig& cfg, const SweepSpec& spec, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::invalid_argument, "scale must be positive");
  ManipulatorConfig other = scaled(cfg, s);
  if (s == 1e-3 && cfg.unit == LengthUnit::mm) other.unit = LengthUnit::m;
  SweepSpec spec_b = spec;
  // SweepSpec lengths are mm in the base unit; keep the physical pose.
  spec_b.y_mm = spec.y_mm * s * from_mm(cfg.unit) / from_mm(other.unit);
  spec_b.z_mm = spec.z_mm * s * from_mm(cfg.unit) / from_mm(other.unit);
  const SweepResult a = run_sweep(cfg, spec);
  const SweepResult b = run_sweep(other, spec_b);

  UnitScalingReport rep;
  rep.scale = s;
  rep.cells.resize(a.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    UnitCell& u = rep.cells[k];
    const SweepCell &ca = a.cells[k], &cb = b.cells[k];
    u.theta_deg = ca.theta_deg;
    u.psi_deg = ca.psi_deg;
    u.status = ca.ok() ? cb.status : ca.status;
    if (!(ca.ok() && cb.ok())) continue;
    u.k_g_a = ca.cond_g;
    u.k_g_b = cb.cond_g;
    u.k_dh_a = ca.cond_dh;
    u.k_dh_b = cb.cond_dh;
    ++rep.compared;
    rep.max_dev_dh = std::max(rep.max_dev_dh, rel_dev(u.k_dh_a, u.k_dh_b));
    rep.max_dev_g = std::max(rep.max_dev_g, rel_dev(u.k_g_a, u.k_g_b));
  }
  rep.dh_invariant = rep.compared > 0 && rep.max_dev_dh < kUnitInvarianceTol;
  rep.g_varies = rep.max_dev_g > kConventionalShift;
  return rep;
}

inline void write_units_csv(std::ostream& os, const UnitScalingReport& r) {
  os << "theta_deg,psi_deg,cond_G_a,cond_G_b,cond_Jdh_a,cond_Jdh_b,rel_dev_G,rel_dev_Jdh,status\n";
  for (const auto& c : r.cells) {
    os << format_double(c.theta_deg) << ',' << format_double(c.psi_deg) << ',';
    if (c.status == CellStatus::ok)
      os << format_double(c.k_g_a) << ',' << format_double(c.k_g_b) << ',' << format_double(c.k_dh_a) << ','
         << format_double(c.k_dh_b) << ',' << format_double(rel_dev(c.k_g_a, c.k_g_b)) << ','
         << format_double(rel_dev(c.k_dh_a, c.k_dh_b));
    else
      os << ",,,,,";
    os << ',' << to_string(c.status) << '\n';
  }
}

}  // namespace dhj
