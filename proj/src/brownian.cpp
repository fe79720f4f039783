#include "smalldev/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "smalldev/errors.hpp"

namespace smalldev::brownian {
namespace {

constexpr double kFourOverPi = 4.0 / std::numbers::pi;
constexpr double kPi2Over8 = std::numbers::pi * std::numbers::pi / 8.0;
constexpr double kSaturation = 40.0;

void check_x(double x) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw DomainError("x", "x must be positive, got " + std::to_string(x));
  }
}

// (4/pi) exp(-pi^2 m^2 / (8 x^2)) / m for odd m.
double scaled_term(double m, double inv_x2) {
  return kFourOverPi * std::exp(-kPi2Over8 * m * m * inv_x2) / m;
}

BrownianCdfResult sum_theta(double x, double abs_tol) {
  if (x >= kSaturation) {
    return {1.0, 0, 0.0};
  }
  const double inv_x2 = 1.0 / (x * x);
  double sum = 0.0;
  double comp = 0.0;  // Kahan compensation
  int k = 0;
  double term = scaled_term(1.0, inv_x2);
  for (;;) {
    const double signed_term = (k % 2 == 0) ? term : -term;
    const double y = signed_term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    ++k;
    term = scaled_term(2.0 * k + 1.0, inv_x2);
    if (term <= abs_tol) break;
  }
  return {std::clamp(sum, 0.0, 1.0), k, term};
}

}  // namespace

BrownianCdfResult sup_cdf(double x, double abs_tol) {
  check_x(x);
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) {
    throw DomainError("abs_tol", "abs_tol must lie in (0, 1), got " + std::to_string(abs_tol));
  }
  return sum_theta(x, abs_tol);
}

BrownianCdfResult sup_cdf_relative(double x, double rel_tol) {
  check_x(x);
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("rel_tol", "rel_tol must lie in (0, 1), got " + std::to_string(rel_tol));
  }
  const double lead = scaled_term(1.0, 1.0 / (x * x));
  if (lead == 0.0) {
    // Leading term underflows; every later term is smaller still.
    return {0.0, 1, 0.0};
  }
  const double tol = std::min(0.5, rel_tol * lead);
  return sum_theta(x, std::max(tol, std::numeric_limits<double>::denorm_min()));
}

double sup_cdf_asymptotic(double x) {
  check_x(x);
  // Same rounding as the series' leading term, so a one-term sum equals it exactly.
  return scaled_term(1.0, 1.0 / (x * x));
}

double wiener_threshold(double n, double eps, const DriftSpec& drift) {
  return std::sqrt(kPi2Over8 / floored_log(n)) * (eps + drift.at(n));
}

BrownianCdfResult wiener_term_prob(std::int64_t n, double eps, const DriftSpec& drift,
                                   double abs_tol) {
  if (n < 1) {
    throw DomainError("n", "n must be >= 1, got " + std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  const double shifted = eps + drift.at(nd);
  if (!(shifted > 0.0)) {
    throw DomainError("eps", "eps + a_n(eps) must be positive, got " + std::to_string(shifted) +
                                 " at n = " + std::to_string(n));
  }
  return sup_cdf(std::sqrt(kPi2Over8 / floored_log(nd)) * shifted, abs_tol);
}

}  // namespace smalldev::brownian
