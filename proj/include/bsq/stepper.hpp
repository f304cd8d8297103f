#pragma once

// One time step of the Boussinesq solver: stage evaluation, variable-step
// Adams-Bashforth prediction of w, U*, V*, implicit recovery of P, Q, and
// CFL-driven step-size control with a lazy moving average.

#include <cstddef>
#include <string>

#include "bsq/boundary.hpp"
#include "bsq/dispersion.hpp"
#include "bsq/grid.hpp"
#include "bsq/hydro.hpp"
#include "bsq/implicit.hpp"
#include "bsq/multistep.hpp"

namespace bsq::stepper {

enum class Mode { Adaptive, Fixed };

struct TimeParams {
  Mode mode = Mode::Adaptive;
  double dt_init = 1e-3;
  double dt_min = 1e-7;
  double dt_max = 0.0;  // <= 0 selects 10 * dt_init
  double alpha = 0.2;   // lazy EMA coefficient, (0, 1]
  multistep::RatioGuard guard{};

  void validate() const;
};

struct TimeController {
  double dt_n = 0.0;    // step about to be taken
  double dt_nm1 = 0.0;  // previous steps
  double dt_nm2 = 0.0;
  double cfl_target = 0.125;
  double alpha = 0.2;
  double dt_min = 0.0;
  double dt_max = 0.0;
  Mode mode = Mode::Adaptive;
  std::size_t step_index = 0;  // completed steps
  double sim_time = 0.0;
};

struct StepRecord {
  std::size_t step_index = 0;  // index of the step (0-based)
  double time = 0.0;           // start time of the step
  double dt = 0.0;
  double max_cfl = 0.0;    // dt * max((|u| + c) / dx, (|v| + c) / dy) at the start state
  double max_speed = 0.0;  // max over cells of max(|u|, |v|) + c
  double max_depth = 0.0;
};

/// CSV header of the dt-history log.
inline constexpr const char* kStepLogHeader = "step,time,dt,max_cfl,max_speed,max_depth";
std::string format_step_record(const StepRecord& r);

struct SignalSpeeds {
  double max_rate = 0.0;   // max of (|u| + c)/dx, (|v| + c)/dy  (1/s)
  double max_speed = 0.0;  // m/s
  double max_depth = 0.0;
};

/// Interior signal speeds with the desingularized cell velocity. Throws InvalidInput
/// naming the cell if a speed is not finite.
SignalSpeeds signal_speeds(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys);

/// dt = cfl_target / max_rate, clamped to [dt_min, dt_max]; dt_max when the
/// domain is still and dry.
double compute_cfl_dt(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys, double cfl_target,
                      double dt_min, double dt_max);
double cfl_dt_from_rate(double max_rate, double cfl_target, double dt_min, double dt_max);

/// Instant decrease, smoothed increase.
double lazy_ema(double dt_candidate, double dt_prev, double alpha);

/// Step triple for the newest level of a full history.
multistep::StepTriple history_steps(const dispersion::StageHistory& history);

/// w^{n+1} = w^n + sum of AB3 weights times E levels. Interior only.
void predict_w(const Field2D& w_n, const dispersion::StageHistory& history, const multistep::StepTriple& steps,
               Field2D& out);

/// Weights of the three stored F* levels once the AB3 quadrature is
/// composed with the variable-step difference stencils. Equal steps give
/// (2, -3, 1).
struct CrossWeights {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
};
CrossWeights cross_weights(const multistep::StepTriple& steps);

/// U*^{n+1} = U*^n + sum_k weight_k (F^k + (F*^k)_t), with (F*)_t from the
/// variable-step backward/central/forward stencils; V* likewise from G, G*.
void predict_UVstar(const dispersion::ImplicitVariables& now, const dispersion::StageHistory& history,
                    const multistep::StepTriple& steps, dispersion::ImplicitVariables& out);

struct StepperConfig {
  hydro::NumericsParams numerics{};
  PhysParams phys{};
  TimeParams time{};
  implicit::Solver solver = implicit::Solver::Thomas;
  double blowup_factor = 10.0;  // abort when max|w - ws| > factor * initial + offset
  double blowup_offset = 1.0;   // m
  // Re-evaluate the F*, G* increment from the predicted fluxes and solve
  // again. Extrapolation alone is unstable once (B + 1/3) d^2 / dx^2 is
  // of order one.
  bool refine_cross_terms = true;

  void validate() const;
};

class Stepper {
 public:
  Stepper(Bathymetry bathy, boundary::BoundarySet bounds, FieldState initial, StepperConfig config);

  /// Advances one step. Throws InstabilityError on blow-up or non-finite
  /// values; the state is left at the offending values for diagnostics.
  StepRecord advance();

  const FieldState& state() const { return state_; }
  const Bathymetry& bathymetry() const { return bathy_; }
  const TimeController& controller() const { return clock_; }
  const dispersion::StageHistory& history() const { return history_; }
  const StepperConfig& config() const { return config_; }
  const boundary::BoundarySet& boundaries() const { return bounds_; }
  double time() const { return clock_.sim_time; }
  double blowup_bound() const { return blowup_bound_; }

  /// Ghost cells of the current state filled at the current time.
  void refresh_ghosts();

 private:
  void check_blowup() const;

  Bathymetry bathy_;
  boundary::BoundarySet bounds_;
  StepperConfig config_;
  FieldState state_;
  TimeController clock_;
  implicit::MomentumOperator op_;
  dispersion::StageHistory history_;
  dispersion::StageWorkspace work_;
  dispersion::ImplicitVariables now_, next_;
  Field2D w_next_;
  Field2D fstar_new_, gstar_new_;
  SignalSpeeds speeds_;  // at the current state
  double blowup_bound_ = 0.0;
};

}  // namespace bsq::stepper
