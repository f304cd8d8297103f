#include "bsq/multistep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsq/error.hpp"

namespace bsq::multistep {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " is not finite");
}

}  // namespace

void validate(const StepTriple& s) {
  if (!positive_finite(s.dt_i) || !positive_finite(s.dt_im1) || !positive_finite(s.dt_im2)) {
    throw InvalidInput("step triple (" + std::to_string(s.dt_i) + ", " + std::to_string(s.dt_im1) +
                       ", " + std::to_string(s.dt_im2) + ") must be positive and finite");
  }
}

QuadratureWeights ab3_weights(const StepTriple& s) {
  validate(s);
  const double h0 = s.dt_i;
  const double h1 = s.dt_im1;
  const double h2 = s.dt_im2;
  const double h12 = h1 + h2;
  const double pre = h0 / 6.0;

  const double bracket_i = (h0 / h1) * (2.0 * h0 + 6.0 * h1 + 3.0 * h2) / h12 + 6.0;
  const double bracket_im1 = (h0 / h1) * (2.0 * h0 + 3.0 * h1 + 3.0 * h2) / h2;
  const double bracket_im2 = (h0 / h2) * (2.0 * h0 + 3.0 * h1) / h12;

  return {pre * bracket_i, -pre * bracket_im1, pre * bracket_im2};
}

double ab3_step(double x_i, double f_i, double f_im1, double f_im2, const StepTriple& steps) {
  require_finite(x_i, "x_i");
  require_finite(f_i, "f_i");
  require_finite(f_im1, "f_im1");
  require_finite(f_im2, "f_im2");
  const auto w = ab3_weights(steps);
  return x_i + w.w_i * f_i + w.w_im1 * f_im1 + w.w_im2 * f_im2;
}

DifferenceWeights vfd_weights(Level level, double h1, double h2) {
  if (!positive_finite(h1) || !positive_finite(h2)) {
    throw InvalidInput("difference spacings must be positive and finite");
  }
  const double h12 = h1 + h2;
  switch (level) {
    case Level::AtI:
      return {(2.0 * h1 + h2) / (h1 * h12), -h12 / (h1 * h2), h1 / (h2 * h12), level};
    case Level::AtIm1:
      return {h2 / (h1 * h12), (h1 - h2) / (h1 * h2), -h1 / (h2 * h12), level};
    case Level::AtIm2:
      return {-h2 / (h1 * h12), h12 / (h1 * h2), -(h1 + 2.0 * h2) / (h2 * h12), level};
  }
  throw InvalidInput("unknown difference level");
}

double euler_step(double x_i, double f_i, double dt) {
  if (!positive_finite(dt)) throw InvalidInput("Euler step must be positive and finite");
  require_finite(x_i, "x_i");
  require_finite(f_i, "f_i");
  return x_i + dt * f_i;
}

double guard_step(double dt_i, double dt_im1, const RatioGuard& guard) {
  if (!positive_finite(dt_i) || !positive_finite(dt_im1)) {
    throw InvalidInput("guarded steps must be positive and finite");
  }
  const double lo = guard.min_ratio * dt_im1;
  const double hi = guard.max_ratio * dt_im1;
  if (dt_i >= lo && dt_i <= hi) return dt_i;
  if (guard.policy == RatioPolicy::Reject) {
    throw InvalidInput("step ratio " + std::to_string(dt_i / dt_im1) + " outside [" +
                       std::to_string(guard.min_ratio) + ", " + std::to_string(guard.max_ratio) + "]");
  }
  return std::clamp(dt_i, lo, hi);
}

}  // namespace bsq::multistep
