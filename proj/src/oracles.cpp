#include "smalldev/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "smalldev/errors.hpp"

namespace smalldev::oracles {
namespace {

struct Trapezoid {
  double value;
  double log_value;
};

Trapezoid trapezoid_stay(std::int64_t n, double x, int intervals) {
  const double h = 2.0 * x / intervals;
  const auto points = static_cast<std::size_t>(intervals) + 1;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto density = [&](double z) { return inv_sqrt_2pi * std::exp(-0.5 * z * z); };

  // The kernel is negligible (< 1e-18) beyond 9 standard deviations.
  const auto band = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(intervals), std::ceil(9.0 / h)));
  std::vector<double> kernel(band + 1);
  for (std::size_t d = 0; d <= band; ++d) kernel[d] = density(static_cast<double>(d) * h);

  std::vector<double> weight(points, h);
  weight.front() = weight.back() = 0.5 * h;

  std::vector<double> f(points);
  for (std::size_t i = 0; i < points; ++i) f[i] = density(-x + static_cast<double>(i) * h);

  std::vector<double> g(points);
  double log_scale = 0.0;
  for (std::int64_t step = 1; step <= n; ++step) {
    if (step > 1) {
      for (std::size_t j = 0; j < points; ++j) g[j] = weight[j] * f[j];
      for (std::size_t i = 0; i < points; ++i) {
        const std::size_t lo = i > band ? i - band : 0;
        const std::size_t hi = std::min(points - 1, i + band);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += kernel[i > j ? i - j : j - i] * g[j];
        f[i] = acc;
      }
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < points; ++i) mass += weight[i] * f[i];
    if (!(mass > 0.0)) return {0.0, -std::numeric_limits<double>::infinity()};
    log_scale += std::log(mass);
    for (double& v : f) v /= mass;
  }
  return {std::exp(log_scale), log_scale};
}

}  // namespace

double rademacher_oracle_log(std::int64_t n, double x, double sigma) {
  if (n < 1) throw DomainError("n", "n must be >= 1, got " + std::to_string(n));
  if (!(x >= 0.0)) throw DomainError("x", "x must be >= 0, got " + std::to_string(x));
  if (!(sigma > 0.0)) throw DomainError("sigma", "sigma must be positive");

  const auto bound = static_cast<std::int64_t>(std::floor(x / sigma));
  if (bound >= n) return 0.0;  // |S_k| <= k <= n <= B surely
  if (bound == 0) return -std::numeric_limits<double>::infinity();

  const auto width = static_cast<std::size_t>(2 * bound + 1);
  std::vector<double> p(width, 0.0), q(width, 0.0);
  p[static_cast<std::size_t>(bound)] = 1.0;
  double log_scale = 0.0;
  for (std::int64_t step = 0; step < n; ++step) {
    q[0] = 0.5 * p[1];
    for (std::size_t i = 1; i + 1 < width; ++i) q[i] = 0.5 * (p[i - 1] + p[i + 1]);
    q[width - 1] = 0.5 * p[width - 2];
    std::swap(p, q);
    if ((step & 63) == 63 || step + 1 == n) {
      double mass = 0.0;
      for (double v : p) mass += v;
      if (!(mass > 0.0)) return -std::numeric_limits<double>::infinity();
      log_scale += std::log(mass);
      for (double& v : p) v /= mass;
    }
  }
  return log_scale;
}

double rademacher_oracle(std::int64_t n, double x, double sigma) {
  return std::exp(rademacher_oracle_log(n, x, sigma));
}

GridOracleResult gaussian_grid_oracle(std::int64_t n, double x, int grid_points) {
  if (n < 1 || n > 10000) {
    throw InvalidParameter("n", "gaussian grid oracle needs 1 <= n <= 10^4, got " +
                                    std::to_string(n));
  }
  if (!(x > 0.0)) throw DomainError("x", "x must be positive, got " + std::to_string(x));
  if (grid_points < 256) {
    throw InvalidParameter("grid", "grid_points must be >= 256, got " + std::to_string(grid_points));
  }
  const auto fine = trapezoid_stay(n, x, grid_points);
  const auto coarse = trapezoid_stay(n, x, grid_points / 2);
  // One Richardson step removes the O(h^2) trapezoid term; the raw difference is kept as
  // the error estimate, which overstates the O(h^4) remainder.
  // Worked in log space so that tiny probabilities at large n do not underflow.
  const double rel = -std::expm1(coarse.log_value - fine.log_value);
  const double log_value = fine.log_value + std::log1p(rel / 3.0);
  return {std::exp(log_value), log_value, std::abs(rel) * fine.value / 3.0, grid_points};
}

}  // namespace smalldev::oracles
