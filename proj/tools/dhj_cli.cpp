#include "dhj/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

void add_common(CLI::App* cmd, dhj::cli::CommonOptions& c) {
  cmd->add_option("--config", c.config, "manipulator JSON (default: built-in reference)");
  cmd->add_option("--unit", c.unit, "working length unit")->check(CLI::IsMember({"mm", "m"}));
  cmd->add_option("--plan", c.plan, "primary, alternate, or JSON pairs like [[\"1y\",\"2z\"],...]");
  cmd->add_option("--scheme", c.scheme, "selection weights: alternating or literal");
  cmd->add_option("--theta-max", c.theta_max_deg, "envelope override, deg");
  cmd->add_option("--psi-max", c.psi_max_deg, "envelope override, deg");
  cmd->add_option("--z-min", c.z_min_mm, "envelope override, mm");
  cmd->add_option("--z-max", c.z_max_mm, "envelope override, mm");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensionally homogeneous Jacobians for the 4-DoF PUS/PRS manipulator"};
  app.require_subcommand(1);

  dhj::cli::CommonOptions common;
  dhj::cli::PoseOptions pose;
  dhj::cli::SweepOptions sweep;
  dhj::cli::ValidateOptions validate;
  std::uint64_t seed = 0;

  auto* p = app.add_subcommand("pose", "evaluate one pose");
  add_common(p, common);
  p->add_option("--y", pose.y_mm, "mm");
  p->add_option("--z", pose.z_mm, "mm");
  p->add_option("--theta", pose.theta_deg, "deg");
  p->add_option("--psi", pose.psi_deg, "deg");
  p->add_flag("--json", pose.json, "machine-readable output");

  auto* s = app.add_subcommand("sweep", "condition-number grid over theta, psi");
  auto* u = app.add_subcommand("units", "mm vs m comparison over the grid");
  for (auto* cmd : {s, u}) {
    add_common(cmd, common);
    cmd->add_option("--grid", sweep.grid, "steps per axis")->check(CLI::Range(2, 100000));
    cmd->add_option("--y", sweep.y_mm, "mm");
    cmd->add_option("--z", sweep.z_mm, "mm");
    cmd->add_option("--out", sweep.out, "CSV path (default stdout for sweep)");
    cmd->add_option("--threads", sweep.threads, "worker threads");
  }

  auto* v = app.add_subcommand("validate", "run every oracle check");
  add_common(v, common);
  v->add_option("--out", validate.out, "report path");
  auto* seed_opt = v->add_option("--seed", seed, "RNG seed (default from config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dhj::cli::config_failed;
  }
  if (seed_opt->count()) validate.seed = seed;

  if (p->parsed()) return dhj::cli::cmd_pose(common, pose, std::cout, std::cerr);
  if (s->parsed()) return dhj::cli::cmd_sweep(common, sweep, std::cout, std::cerr);
  if (u->parsed()) return dhj::cli::cmd_units(common, sweep, std::cout, std::cerr);
  return dhj::cli::cmd_validate(common, validate, std::cout, std::cerr);
}
