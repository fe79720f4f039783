#include "smalldev/scaling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "smalldev/errors.hpp"

namespace smalldev {

double floored_log(double x) noexcept {
  return x > std::numbers::e ? std::log(x) : 1.0;
}

double iterated_log(double x) noexcept { return floored_log(floored_log(x)); }

double phi_scale(double n) noexcept {
  constexpr double pi2_over_8 = std::numbers::pi * std::numbers::pi / 8.0;
  return std::sqrt(pi2_over_8 * n / floored_log(n));
}

double DriftSpec::at(double n) const noexcept {
  if (is_zero()) return 0.0;
  return tau_ / floored_log(n);
}

WeightParams::WeightParams(double r, double a) : r_(r), a_(a) {
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw InvalidParameter("r", "r must be a finite real > 1, got " + std::to_string(r));
  }
  if (!(a > -1.0) || !std::isfinite(a)) {
    throw InvalidParameter("a", "a must be a finite real > -1, got " + std::to_string(a));
  }
}

double WeightParams::gap(double eps) const noexcept { return 1.0 / (eps * eps) - (r_ - 1.0); }

double WeightParams::eps_for_gap(double lambda) const noexcept {
  return 1.0 / std::sqrt(lambda + r_ - 1.0);
}

}  // namespace smalldev
