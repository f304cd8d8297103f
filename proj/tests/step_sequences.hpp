#pragma once

#include <random>
#include <vector>

namespace bsq::testing {

/// Random step sequence of `n` steps summing to `total`, with consecutive
/// ratios drawn from [lo, hi]. The walk is kept inside a band around the
/// mean step so that refinement levels remain comparable.
inline std::vector<double> random_steps(std::size_t n, double total, double lo, double hi,
                                        std::mt19937_64& rng) {
  std::vector<double> dt(n);
  double cur = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double a = lo, b = hi;
    if (cur > 1.6) b = 1.0;
    if (cur < 0.6) a = 1.0;
    if (k > 0) cur *= std::uniform_real_distribution<double>(a, b)(rng);
    dt[k] = cur;
  }
  double sum = 0.0;
  for (double v : dt) sum += v;
  for (double& v : dt) v *= total / sum;
  return dt;
}

}  // namespace bsq::testing
