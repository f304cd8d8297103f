#pragma once

// Batch driver: builds the scenario from a RunConfig, advances to the
// requested duration and writes gauges, dt history, snapshots and a JSON
// summary into the output directory.

#include <cstddef>
#include <string>

#include "bsq/boundary.hpp"
#include "bsq/config.hpp"
#include "bsq/stepper.hpp"

namespace bsq::run {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInstability = 3;

struct RunResult {
  int exit_code = kExitOk;
  std::string abort_reason;
  std::size_t steps = 0;
  double sim_time = 0.0;
  double wall_time = 0.0;
  double dt_mean = 0.0;
  double dt_min = 0.0;
  double dt_max = 0.0;
  double max_cfl = 0.0;  // over post-bootstrap steps
  double initial_mass = 0.0;
  double final_mass = 0.0;
};

struct RunOptions {
  bool progress = true;  // one line on stderr per simulated second
};

/// Bathymetry described by the scenario block.
Bathymetry build_bathymetry(const config::RunConfig& cfg);

/// Initial state described by the scenario block.
FieldState build_initial(const config::RunConfig& cfg, const Bathymetry& bathy);

/// Boundary set with wavemaker components resolved at the side depths.
boundary::BoundarySet build_boundaries(const config::RunConfig& cfg, const Bathymetry& bathy);

/// Executes the run. Instability is reported through the exit code
/// (kExitInstability) after a diagnostic snapshot is written; other errors
/// propagate.
RunResult run(const config::RunConfig& cfg, const RunOptions& options = {});

}  // namespace bsq::run
