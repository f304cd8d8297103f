// simulate run <config.json> [--duration S] [--output-dir DIR] [--mode adaptive|fixed]
//                            [--cfl C] [--fixed-dt DT]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bsq/config.hpp"
#include "bsq/error.hpp"
#include "bsq/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Extended Boussinesq wave solver"};
  app.require_subcommand(1);
  auto* cmd = app.add_subcommand("run", "run a simulation described by a JSON configuration");

  std::string path;
  std::optional<double> duration, cfl, fixed_dt;
  std::optional<std::string> output_dir, mode;
  bool quiet = false;
  cmd->add_option("config", path, "configuration file")->required();
  cmd->add_option("--duration", duration, "simulated seconds");
  cmd->add_option("--output-dir", output_dir, "output directory");
  cmd->add_option("--mode", mode, "time stepping mode")->check(CLI::IsMember({"adaptive", "fixed"}));
  cmd->add_option("--cfl", cfl, "target CFL number");
  cmd->add_option("--fixed-dt", fixed_dt, "run in fixed mode with this step");
  cmd->add_flag("--quiet", quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bsq::run::kExitConfig;
  }

  try {
    auto cfg = bsq::config::parse_config(path);
    if (duration) cfg.duration = *duration;
    if (output_dir) cfg.outputs.directory = *output_dir;
    if (mode) cfg.stepper.time.mode = *mode == "fixed" ? bsq::stepper::Mode::Fixed : bsq::stepper::Mode::Adaptive;
    if (cfl) cfg.stepper.numerics.cfl_target = *cfl;
    if (fixed_dt) {
      cfg.stepper.time.mode = bsq::stepper::Mode::Fixed;
      cfg.stepper.time.dt_init = *fixed_dt;
      if (cfg.stepper.time.dt_min > *fixed_dt) cfg.stepper.time.dt_min = *fixed_dt;
      if (cfg.stepper.time.dt_max > 0.0 && cfg.stepper.time.dt_max < *fixed_dt) cfg.stepper.time.dt_max = *fixed_dt;
    }
    bsq::config::validate(cfg);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

    const auto res = bsq::run::run(cfg, {.progress = !quiet});
    std::cerr << (res.exit_code == 0 ? "done" : "aborted") << ": " << res.steps << " steps, t = " << res.sim_time
              << " s, mean dt = " << res.dt_mean << " s, wall " << res.wall_time << " s\n";
    return res.exit_code;
  } catch (const bsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return bsq::run::kExitConfig;
  } catch (const bsq::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return bsq::run::kExitConfig;
  } catch (const bsq::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return bsq::run::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
