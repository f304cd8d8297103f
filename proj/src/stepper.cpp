#include "bsq/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bsq/error.hpp"

namespace bsq::stepper {

void TimeParams::validate() const {
  if (!(dt_init > 0.0) || !std::isfinite(dt_init)) throw InvalidInput("initial time step must be positive");
  if (!(dt_min > 0.0)) throw InvalidInput("dt_min must be positive");
  const double hi = dt_max > 0.0 ? dt_max : 10.0 * dt_init;
  if (!(dt_min <= dt_init && dt_init <= hi)) throw InvalidInput("need dt_min <= dt_init <= dt_max");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in (0, 1]");
}

void StepperConfig::validate() const {
  numerics.validate();
  phys.validate();
  time.validate();
  if (!(blowup_factor > 0.0) || !(blowup_offset >= 0.0)) throw InvalidInput("invalid blow-up bound");
}

std::string format_step_record(const StepRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g", r.step_index, r.time, r.dt, r.max_cfl,
                r.max_speed, r.max_depth);
  return buf;
}

SignalSpeeds signal_speeds(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys) {
  const Grid& grid = bathy.grid;
  const double hd = hydro::effective_h_dry(bathy, phys);
  const double e4 = hd * hd * hd * hd;
  SignalSpeeds out;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double h = std::max(s.w(i, j) - bathy.b(i, j), 0.0);
      const double c = std::sqrt(phys.g * h);
      const double u = std::abs(hydro::desingularized_velocity(s.P(i, j), h, e4)) + c;
      const double v = std::abs(hydro::desingularized_velocity(s.Q(i, j), h, e4)) + c;
      if (!std::isfinite(u) || !std::isfinite(v)) {
        throw InvalidInput("non-finite signal speed at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      out.max_rate = std::max({out.max_rate, u / grid.dx, v / grid.dy});
      out.max_speed = std::max({out.max_speed, u, v});
      out.max_depth = std::max(out.max_depth, h);
    }
  }
  return out;
}

double cfl_dt_from_rate(double max_rate, double cfl_target, double dt_min, double dt_max) {
  if (!(max_rate > 0.0)) return dt_max;
  return std::clamp(cfl_target / max_rate, dt_min, dt_max);
}

double compute_cfl_dt(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys, double cfl_target,
                      double dt_min, double dt_max) {
  return cfl_dt_from_rate(signal_speeds(s, bathy, phys).max_rate, cfl_target, dt_min, dt_max);
}

double lazy_ema(double dt_candidate, double dt_prev, double alpha) {
  if (dt_candidate <= dt_prev) return dt_candidate;
  return alpha * dt_candidate + (1.0 - alpha) * dt_prev;
}

multistep::StepTriple history_steps(const dispersion::StageHistory& h) {
  if (h.size() < 3) throw InvalidInput("AB3 prediction needs three stage levels");
  return {h[0].dt_after, h[1].dt_after, h[2].dt_after};
}

void predict_w(const Field2D& w_n, const dispersion::StageHistory& h, const multistep::StepTriple& steps,
               Field2D& out) {
  const auto q = multistep::ab3_weights(steps);
  const Field2D& e0 = h[0].E;
  const Field2D& e1 = h[1].E;
  const Field2D& e2 = h[2].E;
  const int nx = e0.nx();
  const int ny = e0.ny();
  if (out.nx() != nx || out.ny() != ny) out = Field2D(nx, ny, 0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      out(i, j) = w_n(i, j) + q.w_i * e0(i, j) + q.w_im1 * e1(i, j) + q.w_im2 * e2(i, j);
    }
  }
}

CrossWeights cross_weights(const multistep::StepTriple& steps) {
  using multistep::Level;
  const auto q = multistep::ab3_weights(steps);
  const auto back = multistep::vfd_weights(Level::AtI, steps.dt_im1, steps.dt_im2);
  const auto mid = multistep::vfd_weights(Level::AtIm1, steps.dt_im1, steps.dt_im2);
  const auto fwd = multistep::vfd_weights(Level::AtIm2, steps.dt_im1, steps.dt_im2);
  return {q.w_i * back.c_i + q.w_im1 * mid.c_i + q.w_im2 * fwd.c_i,
          q.w_i * back.c_im1 + q.w_im1 * mid.c_im1 + q.w_im2 * fwd.c_im1,
          q.w_i * back.c_im2 + q.w_im1 * mid.c_im2 + q.w_im2 * fwd.c_im2};
}

void predict_UVstar(const dispersion::ImplicitVariables& now, const dispersion::StageHistory& h,
                    const multistep::StepTriple& steps, dispersion::ImplicitVariables& out) {
  const auto q = multistep::ab3_weights(steps);
  const auto [s0, s1, s2] = cross_weights(steps);

  const int nx = now.Ustar.nx();
  const int ny = now.Ustar.ny();
  if (out.Ustar.nx() != nx || out.Ustar.ny() != ny) {
    out.Ustar = Field2D(nx, ny, 0);
    out.Vstar = Field2D(nx, ny, 0);
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      out.Ustar(i, j) = now.Ustar(i, j) + q.w_i * h[0].F(i, j) + q.w_im1 * h[1].F(i, j) + q.w_im2 * h[2].F(i, j) +
                        s0 * h[0].Fstar(i, j) + s1 * h[1].Fstar(i, j) + s2 * h[2].Fstar(i, j);
      out.Vstar(i, j) = now.Vstar(i, j) + q.w_i * h[0].G(i, j) + q.w_im1 * h[1].G(i, j) + q.w_im2 * h[2].G(i, j) +
                        s0 * h[0].Gstar(i, j) + s1 * h[1].Gstar(i, j) + s2 * h[2].Gstar(i, j);
    }
  }
}

Stepper::Stepper(Bathymetry bathy, boundary::BoundarySet bounds, FieldState initial, StepperConfig config)
    : bathy_(std::move(bathy)), bounds_(std::move(bounds)), config_(config), state_(std::move(initial)) {
  config_.validate();
  boundary::validate(bounds_, bathy_);
  const Grid& g = bathy_.grid;
  if (state_.w.nx() != g.nx || state_.w.ny() != g.ny || state_.w.ghost() != kGhost) {
    throw InvalidInput("initial state does not match the grid");
  }
  check_state(state_, bathy_, 0.0);

  auto& tp = config_.time;
  if (tp.dt_max <= 0.0) tp.dt_max = 10.0 * tp.dt_init;
  clock_.dt_n = tp.dt_init;
  clock_.cfl_target = config_.numerics.cfl_target;
  clock_.alpha = tp.alpha;
  clock_.dt_min = tp.dt_min;
  clock_.dt_max = tp.dt_max;
  clock_.mode = tp.mode;

  op_ = implicit::assemble_operator(bathy_, config_.phys);
  history_ = dispersion::StageHistory(g);
  work_ = dispersion::StageWorkspace(g);
  w_next_ = Field2D(g.nx, g.ny, 0);

  double amp = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) amp = std::max(amp, std::abs(state_.w(i, j) - bathy_.ws));
  blowup_bound_ = config_.blowup_factor * amp + config_.blowup_offset;

  refresh_ghosts();
  speeds_ = signal_speeds(state_, bathy_, config_.phys);
}

void Stepper::refresh_ghosts() { boundary::apply_ghosts(state_, bathy_, bounds_, clock_.sim_time); }

void Stepper::check_blowup() const {
  const Grid& g = bathy_.grid;
  auto where = [&](int i, int j) {
    return " at cell (" + std::to_string(i) + ", " + std::to_string(j) + "), step " +
           std::to_string(clock_.step_index) + ", t = " + std::to_string(clock_.sim_time);
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double w = state_.w(i, j);
      const double p = state_.P(i, j);
      const double q = state_.Q(i, j);
      if (!std::isfinite(w) || !std::isfinite(p) || !std::isfinite(q)) {
        throw InstabilityError("non-finite state" + where(i, j));
      }
      if (std::abs(w - bathy_.ws) > blowup_bound_) {
        throw InstabilityError("surface deviation " + std::to_string(w - bathy_.ws) + " exceeds bound " +
                               std::to_string(blowup_bound_) + where(i, j));
      }
    }
  }
}

StepRecord Stepper::advance() {
  const Grid& g = bathy_.grid;
  const double t = clock_.sim_time;
  const double dt = clock_.dt_n;
  StepRecord rec{clock_.step_index, t, dt, dt * speeds_.max_rate, speeds_.max_speed, speeds_.max_depth};

  // Stages at t_n.
  boundary::apply_ghosts(state_, bathy_, bounds_, t);
  dispersion::StageSet& stage = history_.push();
  try {
    dispersion::compute_stages(state_, bathy_, config_.numerics, config_.phys, work_, stage);
  } catch (const InvalidInput& e) {
    throw InstabilityError(std::string(e.what()) + ", step " + std::to_string(clock_.step_index));
  }
  stage.taken_at = t;
  stage.dt_after = dt;
  dispersion::compute_Ustar_Vstar(state_, bathy_, config_.phys, now_);

  if (history_.size() < 3) {
    // First-order bootstrap.
    if (next_.Ustar.nx() != g.nx) next_ = now_;
    const bool have_prev = history_.size() == 2;
    const double ratio = have_prev ? dt / history_[1].dt_after : 0.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        w_next_(i, j) = state_.w(i, j) + dt * stage.E(i, j);
        double u = now_.Ustar(i, j) + dt * stage.F(i, j);
        double v = now_.Vstar(i, j) + dt * stage.G(i, j);
        if (have_prev) {
          u += ratio * (stage.Fstar(i, j) - history_[1].Fstar(i, j));
          v += ratio * (stage.Gstar(i, j) - history_[1].Gstar(i, j));
        }
        next_.Ustar(i, j) = u;
        next_.Vstar(i, j) = v;
      }
    }
  } else {
    const auto steps = history_steps(history_);
    predict_w(state_.w, history_, steps, w_next_);
    predict_UVstar(now_, history_, steps, next_);
  }

  // Fluxes at t_{n+1}.
  const auto closures = boundary::line_closures(bathy_, bounds_, t + dt);
  implicit::solve_momentum(next_.Ustar, next_.Vstar, closures, op_, config_.solver, state_.P, state_.Q);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) state_.w(i, j) = w_next_(i, j);

  if (config_.refine_cross_terms) {
    // Swap the extrapolated F* increment for F*(predicted) - F*^n.
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    if (history_.size() >= 3) {
      const auto cw = cross_weights(history_steps(history_));
      c0 = cw.s0;
      c1 = cw.s1;
      c2 = cw.s2;
    } else if (history_.size() == 2) {
      c0 = dt / history_[1].dt_after;
      c1 = -c0;
    }
    const std::size_t levels = history_.size();
    boundary::apply_ghosts(state_, bathy_, bounds_, t + dt);
    dispersion::cross_terms(state_, bathy_, config_.phys, fstar_new_, gstar_new_);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        double fu = c0 * history_[0].Fstar(i, j);
        double gv = c0 * history_[0].Gstar(i, j);
        if (levels >= 2) {
          fu += c1 * history_[1].Fstar(i, j);
          gv += c1 * history_[1].Gstar(i, j);
        }
        if (levels >= 3) {
          fu += c2 * history_[2].Fstar(i, j);
          gv += c2 * history_[2].Gstar(i, j);
        }
        next_.Ustar(i, j) += fstar_new_(i, j) - stage.Fstar(i, j) - fu;
        next_.Vstar(i, j) += gstar_new_(i, j) - stage.Gstar(i, j) - gv;
      }
    }
    implicit::solve_momentum(next_.Ustar, next_.Vstar, closures, op_, config_.solver, state_.P, state_.Q);
  }
  boundary::apply_sponges(state_, bathy_, bounds_, dt);
  hydro::desingularize(state_, bathy_, hydro::effective_h_dry(bathy_, config_.phys));

  clock_.sim_time = t + dt;
  ++clock_.step_index;
  check_blowup();
  refresh_ghosts();
  speeds_ = signal_speeds(state_, bathy_, config_.phys);

  double dt_next = dt;
  if (clock_.mode == Mode::Fixed || clock_.step_index < 2) {
    dt_next = config_.time.dt_init;
  } else {
    const double cand = cfl_dt_from_rate(speeds_.max_rate, clock_.cfl_target, clock_.dt_min, clock_.dt_max);
    dt_next = std::clamp(lazy_ema(cand, dt, clock_.alpha), clock_.dt_min, clock_.dt_max);
    dt_next = multistep::guard_step(dt_next, dt, config_.time.guard);
  }
  clock_.dt_nm2 = clock_.dt_nm1;
  clock_.dt_nm1 = dt;
  clock_.dt_n = dt_next;
  return rec;
}

}  // namespace bsq::stepper
