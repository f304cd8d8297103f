#pragma once

// Variable-step third-order Adams-Bashforth quadrature and variable-step
// second-order finite-difference stencils on three time levels.
//
// Time levels are t_{i-2} < t_{i-1} < t_i, and the step being taken is
// dt_i = t_{i+1} - t_i. The previous spacings are dt_im1 = t_i - t_{i-1}
// and dt_im2 = t_{i-1} - t_{i-2}. Nothing here knows about the PDE.

namespace bsq::multistep {

struct StepTriple {
  double dt_i;
  double dt_im1;
  double dt_im2;
};

/// Weights multiplying the rate at t_i, t_{i-1}, t_{i-2}. Units of time:
/// the dt_i/6 prefactor is already folded in.
struct QuadratureWeights {
  double w_i;
  double w_im1;
  double w_im2;
};

/// Level at which a derivative is evaluated.
enum class Level { AtI, AtIm1, AtIm2 };

/// Weights (1/time) multiplying samples at t_i, t_{i-1}, t_{i-2}.
struct DifferenceWeights {
  double c_i;
  double c_im1;
  double c_im2;
  Level level;
};

/// Throws InvalidInput unless all three spacings are positive and finite.
void validate(const StepTriple& steps);

QuadratureWeights ab3_weights(const StepTriple& steps);

/// x_{i+1} = x_i + w_i f_i + w_im1 f_im1 + w_im2 f_im2.
double ab3_step(double x_i, double f_i, double f_im1, double f_im2, const StepTriple& steps);

/// Derivative stencil from the quadratic interpolant through the three
/// levels: backward at t_i, central at t_{i-1}, forward at t_{i-2}.
DifferenceWeights vfd_weights(Level level, double dt_im1, double dt_im2);

double euler_step(double x_i, double f_i, double dt);

/// How the stepper treats a new step whose ratio to the previous one falls
/// outside [min_ratio, max_ratio].
enum class RatioPolicy { Clamp, Reject };

struct RatioGuard {
  RatioPolicy policy = RatioPolicy::Clamp;
  double min_ratio = 0.1;
  double max_ratio = 10.0;
};

/// Applies the guard to dt_i relative to dt_im1. Clamp returns the limited
/// step; Reject throws InvalidInput.
double guard_step(double dt_i, double dt_im1, const RatioGuard& guard);

}  // namespace bsq::multistep
