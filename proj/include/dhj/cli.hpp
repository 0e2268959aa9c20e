#pragma once

// Command implementations behind tools/dhj_cli. Each returns an exit code and
// writes only to the given streams or the requested output file.

#include "dhj/verify.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace dhj::cli {

enum Exit : int { ok = 0, validation_failed = 1, infeasible = 2, config_failed = 3, io_failed = 4 };

struct CommonOptions {
  std::string config;  // empty: built-in reference mechanism
  std::string unit;    // empty: unit from the config
  std::string plan = "primary";
  std::string scheme = "alternating";
  std::optional<double> theta_max_deg, psi_max_deg, z_min_mm, z_max_mm;
};

struct PoseOptions {
  double y_mm = 0.0, z_mm = 150.0, theta_deg = 10.0, psi_deg = 10.0;
  bool json = false;
};

struct SweepOptions {
  int grid = 51;
  double y_mm = 0.0, z_mm = 150.0;
  std::string out;  // empty: stdout
  unsigned threads = 1;
};

struct ValidateOptions {
  std::string out = "validation_report.json";
  std::optional<std::uint64_t> seed;
};

/// Accepts "primary", "alternate" or a JSON list such as [["1y","2z"],...].
inline SelectionPlan parse_plan(const std::string& s) {
  if (s == "primary") return primary_plan();
  if (s == "alternate") return alternate_plan();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("plan is not JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::invalid_argument, "plan must be a list of pairs");
  SelectionPlan plan;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw Error(ErrorCode::invalid_argument, "each plan entry must be a pair of component names");
    plan.pairs.push_back({parse_component(p[0].get<std::string>()), parse_component(p[1].get<std::string>())});
  }
  return plan;
}

inline ManipulatorConfig load(const CommonOptions& o) {
  ManipulatorConfig cfg = o.config.empty() ? reference_config() : load_config(o.config);
  const double u = from_mm(cfg.unit);
  if (o.theta_max_deg) cfg.envelope.theta_max = deg2rad(*o.theta_max_deg);
  if (o.psi_max_deg) cfg.envelope.psi_max = deg2rad(*o.psi_max_deg);
  if (o.z_min_mm) cfg.envelope.z_min = *o.z_min_mm * u;
  if (o.z_max_mm) cfg.envelope.z_max = *o.z_max_mm * u;
  if (!o.unit.empty()) {
    try {
      cfg = in_unit(cfg, parse_unit(o.unit));
    } catch (const Error& e) {
      throw Error(ErrorCode::config_error, e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

namespace detail {

inline nlohmann::json matrix_json(const MatX& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline void print_matrix(std::ostream& os, const char* name, const MatX& m) {
  os << name << " (" << m.rows() << "x" << m.cols() << ")\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << ' ';
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << std::setw(13) << std::setprecision(6) << m(r, c);
    os << '\n';
  }
}

inline int fail(std::ostream& err, const Error& e) {
  err << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::config_error: return config_failed;
    case ErrorCode::io_error: return io_failed;
    default: return infeasible;
  }
}

inline SweepSpec sweep_spec(const ManipulatorConfig& cfg, const CommonOptions& c, const SweepOptions& s) {
  SweepSpec spec;
  spec.theta_steps = spec.psi_steps = s.grid;
  spec.theta_max_deg = rad2deg(cfg.envelope.theta_max);
  spec.theta_min_deg = -spec.theta_max_deg;
  spec.psi_max_deg = rad2deg(cfg.envelope.psi_max);
  spec.psi_min_deg = -spec.psi_max_deg;
  spec.y_mm = s.y_mm;
  spec.z_mm = s.z_mm;
  spec.plan = parse_plan(c.plan);
  spec.scheme = parse_scheme(c.scheme);
  spec.threads = s.threads;
  return spec;
}

template <class W>
int write_file(const std::string& path, std::ostream& out, std::ostream& err, W&& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return ok;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "IOError: cannot open '" << path << "' for writing\n";
    return io_failed;
  }
  writer(f);
  f.flush();
  if (!f) {
    err << "IOError: write to '" << path << "' failed\n";
    return io_failed;
  }
  return ok;
}

}  // namespace detail

inline int cmd_pose(const CommonOptions& c, const PoseOptions& p, std::ostream& out, std::ostream& err) {
  ManipulatorConfig cfg;
  try {
    cfg = load(c);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return config_failed;
  }
  try {
    const double u = from_mm(cfg.unit);
    PipelineOptions opt;
    opt.plan = parse_plan(c.plan);
    opt.scheme = parse_scheme(c.scheme);
    const TaskCoords coords{p.y_mm * u, p.z_mm * u, deg2rad(p.theta_deg), deg2rad(p.psi_deg)};
    const PoseAnalysis a = evaluate_pose(cfg, coords, opt);
    const auto& rec = a.record;
    if (p.json) {
      nlohmann::json j;
      j["unit"] = to_string(cfg.unit);
      j["pose"] = {{"y", coords.y}, {"z", coords.z}, {"theta_deg", p.theta_deg}, {"psi_deg", p.psi_deg},
                   {"x", rec.pose.x}, {"phi_z_rad", rec.pose.phi_z}};
      j["q"] = detail::matrix_json(a.q.transpose());
      j["G_T"] = detail::matrix_json(a.g.gt);
      j["J_a"] = detail::matrix_json(a.j.ja());
      j["S"] = detail::matrix_json(a.s.s);
      j["V_ps"] = detail::matrix_json(a.nominal.vps);
      j["J_dh"] = detail::matrix_json(rec.j_dh);
      j["singular_values"] = detail::matrix_json(rec.singular_values.transpose())[0];
      j["cond_Jdh"] = rec.k;
      j["cond_G"] = rec.k_conventional;
      out << j.dump(2) << '\n';
    } else {
      out << "unit " << to_string(cfg.unit) << "  dependent x = " << rec.pose.x << "  phi_z = " << rec.pose.phi_z
          << " rad\n";
      detail::print_matrix(out, "q_a", a.q.transpose());
      detail::print_matrix(out, "G^T", a.g.gt);
      detail::print_matrix(out, "J_a", a.j.ja());
      detail::print_matrix(out, "S", a.s.s);
      detail::print_matrix(out, "V_ps", a.nominal.vps);
      detail::print_matrix(out, "J_dh", rec.j_dh);
      detail::print_matrix(out, "sigma(J_dh)", rec.singular_values.transpose());
      out << "cond(J_dh) = " << format_double(rec.k) << "\ncond(G^T)  = " << format_double(rec.k_conventional) << '\n';
    }
    return ok;
  } catch (const Error& e) {
    return detail::fail(err, e);
  }
}

inline int cmd_sweep(const CommonOptions& c, const SweepOptions& s, std::ostream& out, std::ostream& err) {
  ManipulatorConfig cfg;
  try {
    cfg = load(c);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return config_failed;
  }
  try {
    const SweepResult r = run_sweep(cfg, detail::sweep_spec(cfg, c, s));
    return detail::write_file(s.out, out, err, [&](std::ostream& os) { write_sweep_csv(os, r); });
  } catch (const Error& e) {
    return detail::fail(err, e);
  }
}

/// Compares the config's unit with its mm/m counterpart. Writes CSV deltas to
/// `s.out` and a JSON summary to `out`.
inline int cmd_units(const CommonOptions& c, const SweepOptions& s, std::ostream& out, std::ostream& err) {
  ManipulatorConfig cfg;
  try {
    cfg = load(c);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return config_failed;
  }
  try {
    const double scale = cfg.unit == LengthUnit::mm ? 1e-3 : 1e3;
    const UnitScalingReport r = unit_scaling_experiment(cfg, detail::sweep_spec(cfg, c, s), scale);
    nlohmann::json j;
    j["base_unit"] = to_string(cfg.unit);
    j["scale"] = scale;
    j["cells_compared"] = r.compared;
    j["max_rel_dev_cond_Jdh"] = r.max_dev_dh;
    j["max_rel_dev_cond_G"] = r.max_dev_g;
    j["cond_Jdh_invariant"] = r.dh_invariant;
    j["cond_G_shifted"] = r.g_varies;
    if (!s.out.empty()) {
      const int rc = detail::write_file(s.out, out, err, [&](std::ostream& os) { write_units_csv(os, r); });
      if (rc != ok) return rc;
    }
    out << j.dump(2) << '\n';
    return ok;
  } catch (const Error& e) {
    return detail::fail(err, e);
  }
}

inline int cmd_validate(const CommonOptions& c, const ValidateOptions& v, std::ostream& out, std::ostream& err) {
  ManipulatorConfig cfg;
  try {
    cfg = load(c);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return config_failed;
  }
  if (v.seed) cfg.seed = *v.seed;
  const ValidationReport rep = run_validation(cfg);
  nlohmann::json j = to_json(rep);
  j["seed"] = cfg.seed;
  j["unit"] = to_string(cfg.unit);
  const int rc = detail::write_file(v.out, out, err, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  if (rc != ok) return rc;
  for (const auto& ch : rep.checks)
    out << (ch.pass ? "PASS " : "FAIL ") << ch.name << "  max_rel_err=" << format_double(ch.max_rel_err)
        << "  poses=" << ch.poses_tested << (ch.note.empty() ? "" : "  (" + ch.note + ")") << '\n';
  return rep.all_pass() ? ok : validation_failed;
}

}  // namespace dhj::cli
