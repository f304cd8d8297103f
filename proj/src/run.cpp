#include "bsq/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "bsq/error.hpp"
#include "bsq/scenario.hpp"

namespace bsq::run {

namespace fs = std::filesystem;
using config::BathyKind;
using config::InitialKind;

Bathymetry build_bathymetry(const config::RunConfig& cfg) {
  const Grid& g = cfg.grid;
  const auto& sc = cfg.scenario;
  switch (sc.bathymetry) {
    case BathyKind::ConicalIsland:
      return scenario::conical_island_bathymetry(g, sc.island);
    case BathyKind::Hamm:
      return scenario::hamm_bathymetry(g);
    case BathyKind::GaussianHump:
      return scenario::gaussian_hump_bathymetry(g, sc.hump.depth, sc.hump.height, sc.hump.width, sc.hump.cx,
                                                sc.hump.cy);
    case BathyKind::Flat: {
      std::vector<double> bed(g.cells(), -sc.flat_depth);
      return bsq::build_bathymetry(g, bed, 0.0);
    }
    case BathyKind::File: {
      const AsciiGrid a = load_ascii_grid(sc.file.path);
      if (a.ncols != g.nx || a.nrows != g.ny) {
        throw ConfigError("scenario.path", "grid file is " + std::to_string(a.ncols) + "x" + std::to_string(a.nrows) +
                                               ", configuration expects " + std::to_string(g.nx) + "x" +
                                               std::to_string(g.ny));
      }
      if (std::abs(a.cellsize - g.dx) > 1e-9 * g.dx || std::abs(a.cellsize - g.dy) > 1e-9 * g.dy) {
        throw ConfigError("scenario.path", "grid file cell size does not match grid.dx / grid.dy");
      }
      return bsq::build_bathymetry(g, a.values, sc.file.ws);
    }
  }
  throw ConfigError("scenario.bathymetry", "unsupported bathymetry");
}

FieldState build_initial(const config::RunConfig& cfg, const Bathymetry& bathy) {
  const auto& sc = cfg.scenario;
  switch (sc.initial) {
    case InitialKind::Still:
      return still_water(bathy);
    case InitialKind::Solitary: {
      auto spec = sc.solitary;
      spec.g = cfg.stepper.phys.g;
      return scenario::solitary_wave_ic(spec, bathy);
    }
    case InitialKind::DamBreak:
      return scenario::dam_break_ic(bathy, sc.dam.x, sc.dam.w_left);
  }
  throw ConfigError("scenario.initial.type", "unsupported initial condition");
}

boundary::BoundarySet build_boundaries(const config::RunConfig& cfg, const Bathymetry& bathy) {
  using boundary::Side;
  boundary::BoundarySet set;
  const double g = cfg.stepper.phys.g;
  const char* names[] = {"west", "east", "south", "north"};
  for (int k = 0; k < 4; ++k) {
    const Side side = static_cast<Side>(k);
    const std::string key = std::string("boundaries.") + names[k];
    std::visit(
        [&](const auto& sc) {
          using T = std::decay_t<decltype(sc)>;
          if constexpr (std::is_same_v<T, config::SineParams>) {
            const double depth = boundary::side_depth(bathy, side);
            if (!(depth > 0.0)) throw ConfigError(key, "wavemaker side is dry");
            set[side] = boundary::SineMaker{boundary::make_component(sc.amplitude, sc.period, sc.phase, depth, g),
                                            sc.ramp};
          } else if constexpr (std::is_same_v<T, config::IrregularParams>) {
            const double depth = boundary::side_depth(bathy, side);
            if (!(depth > 0.0)) throw ConfigError(key, "wavemaker side is dry");
            set[side] = boundary::IrregularMaker{boundary::jonswap_components(sc.spectrum, depth, g), sc.ramp};
          } else {
            set[side] = sc;
          }
        },
        cfg.boundaries[k]);
  }
  return set;
}

namespace {

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%010.4f", t);
  return buf;
}

void write_snapshot(const fs::path& dir, const std::string& tag, const config::RunConfig& cfg, const Grid& grid,
                    const FieldState& s, const scenario::MaxTracker& mt) {
  for (const auto& name : cfg.outputs.fields) {
    const Field2D* f = name == "w" ? &s.w : name == "P" ? &s.P : name == "Q" ? &s.Q : &mt.field();
    write_file_atomic(dir / (name + "_" + tag + ".asc"), format_ascii_grid(to_ascii_grid(*f, grid)));
  }
}

}  // namespace

RunResult run(const config::RunConfig& cfg, const RunOptions& options) {
  const auto wall0 = std::chrono::steady_clock::now();
  const fs::path dir = cfg.outputs.directory;
  fs::create_directories(dir);

  Bathymetry bathy = build_bathymetry(cfg);
  FieldState initial = build_initial(cfg, bathy);
  boundary::BoundarySet bounds = build_boundaries(cfg, bathy);
  const double h_eps = cfg.stepper.phys.h_eps > 0.0 ? cfg.stepper.phys.h_eps : bathy.default_h_eps();
  // Snapshots on a square grid only; ESRI grids carry a single cell size.
  const bool square = std::abs(cfg.grid.dx - cfg.grid.dy) <= 1e-12 * cfg.grid.dx;

  stepper::Stepper st(bathy, bounds, std::move(initial), cfg.stepper);
  scenario::GaugeRecorder gauges(cfg.gauges, st.bathymetry(), h_eps);
  scenario::MaxTracker max_w(st.state());
  gauges.record(st.state(), 0.0);

  RunResult res;
  res.initial_mass = scenario::water_volume(st.state(), st.bathymetry());
  res.dt_min = std::numeric_limits<double>::infinity();
  std::string dt_log = std::string(stepper::kStepLogHeader) + "\n";
  double next_report = 1.0;
  double next_snapshot = cfg.outputs.snapshot_interval > 0.0 ? cfg.outputs.snapshot_interval : 0.0;
  double dt_sum = 0.0;

  try {
    while (st.time() < cfg.duration * (1.0 - 1e-12)) {
      const auto rec = st.advance();
      dt_log += stepper::format_step_record(rec);
      dt_log += '\n';
      ++res.steps;
      dt_sum += rec.dt;
      res.dt_min = std::min(res.dt_min, rec.dt);
      res.dt_max = std::max(res.dt_max, rec.dt);
      if (rec.step_index >= 2) res.max_cfl = std::max(res.max_cfl, rec.max_cfl);
      max_w.update(st.state());
      gauges.record(st.state(), st.time());

      if (next_snapshot > 0.0 && st.time() >= next_snapshot * (1.0 - 1e-12)) {
        if (square) write_snapshot(dir, time_tag(st.time()), cfg, bathy.grid, st.state(), max_w);
        next_snapshot += cfg.outputs.snapshot_interval;
      }
      if (options.progress && st.time() >= next_report) {
        std::fprintf(stderr, "t = %8.3f s  step %zu  dt = %.4e  max CFL = %.4f\n", st.time(), res.steps, rec.dt,
                     rec.max_cfl);
        while (next_report <= st.time()) next_report += 1.0;
      }
    }
  } catch (const InstabilityError& e) {
    res.exit_code = kExitInstability;
    res.abort_reason = e.what();
    if (options.progress) std::fprintf(stderr, "aborted: %s\n", e.what());
  }

  res.sim_time = st.time();
  res.dt_mean = res.steps ? dt_sum / static_cast<double>(res.steps) : 0.0;
  if (!res.steps) res.dt_min = 0.0;
  res.final_mass = scenario::water_volume(st.state(), st.bathymetry());

  for (std::size_t k = 0; k < gauges.gauges().size(); ++k) {
    write_file_atomic(dir / ("gauge_" + gauges.gauges()[k].id + ".csv"), gauges.csv(k));
  }
  write_file_atomic(dir / "dt_history.csv", dt_log);
  if (square) write_snapshot(dir, res.exit_code == kExitOk ? "final" : "abort", cfg, bathy.grid, st.state(), max_w);

  nlohmann::ordered_json summary;
  if (res.exit_code == kExitOk && cfg.outputs.runup) {
    const auto& ru = *cfg.outputs.runup;
    double ref = ru.reference_radius;
    if (ref <= 0.0 && cfg.scenario.bathymetry == BathyKind::ConicalIsland) ref = cfg.scenario.island.shoreline_radius();
    const auto profile = scenario::runup_profile(max_w.field(), st.bathymetry(), ru.spec, ru.n_azimuths, ref);
    write_file_atomic(dir / "runup.csv", scenario::runup_csv(profile));
    summary["runup_file"] = "runup.csv";
  }

  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  summary["status"] = res.exit_code == kExitOk ? "ok" : "instability";
  summary["wall_time_s"] = res.wall_time;
  summary["steps"] = res.steps;
  summary["sim_time_s"] = res.sim_time;
  summary["dt_mean"] = res.dt_mean;
  summary["dt_min"] = res.dt_min;
  summary["dt_max"] = res.dt_max;
  summary["max_cfl"] = res.max_cfl;
  summary["initial_mass"] = res.initial_mass;
  summary["final_mass"] = res.final_mass;
  summary["mass_drift_rel"] =
      res.initial_mass > 0.0 ? (res.final_mass - res.initial_mass) / res.initial_mass : 0.0;
  summary["abort_reason"] = res.abort_reason.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(res.abort_reason);
  if (cfg.outputs.averages && res.exit_code == kExitOk) {
    auto& avg = summary["averages"];
    for (std::size_t k = 0; k < gauges.gauges().size(); ++k) {
      const auto a = scenario::time_averages(gauges.samples(k), cfg.outputs.averages->t0, cfg.outputs.averages->t1);
      avg[gauges.gauges()[k].id] = {{"mwl", a.mwl}, {"u_avg", a.u_avg}, {"v_avg", a.v_avg}, {"Hs", a.Hs},
                                    {"samples", a.count}};
    }
  }
  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  return res;
}

}  // namespace bsq::run
