#pragma once

#include <cstdint>

namespace smalldev::oracles {

/// Exact P(max_{k<=n} |S_k| <= x) for the +-sigma walk: transfer-matrix DP over
/// states {-B..B}, B = floor(x / sigma), with absorbing exterior. O(n B).
double rademacher_oracle(std::int64_t n, double x, double sigma = 1.0);

/// log of rademacher_oracle, renormalised every step so it never underflows.
/// Returns -infinity when the probability is exactly zero.
double rademacher_oracle_log(std::int64_t n, double x, double sigma = 1.0);

struct GridOracleResult {
  double value = 0.0;
  double log_value = 0.0;
  double error_estimate = 0.0;  // |v(h) - v(2h)| / 3; value itself is Richardson-improved
  int grid_points = 0;
};

/// P(max_{k<=n} |S_k| <= x) for standard normal increments by iterated
/// trapezoidal convolution of the normal density on [-x, x] with absorbing
/// barriers. Requires 1 <= n <= 10^4 and grid_points >= 256.
GridOracleResult gaussian_grid_oracle(std::int64_t n, double x, int grid_points);

}  // namespace smalldev::oracles
