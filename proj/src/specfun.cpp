#include "smalldev/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smalldev/errors.hpp"

namespace smalldev::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 100000;

// x^s e^{-x}, evaluated in log space.
double power_exp(double s, double x) {
  if (x == 0.0) return 0.0;
  return std::exp(s * std::log(x) - x);
}

// gamma(s, x) / (x^s e^{-x}) = sum_k x^k / (s (s+1) ... (s+k)).
double lower_series(double s, double x, int& iterations) {
  double term = 1.0 / s;
  double sum = term;
  double denom = s;
  for (iterations = 1; iterations < kMaxIter; ++iterations) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum;
}

// Gamma(s, x) / (x^s e^{-x}) by the modified Lentz algorithm on
// 1/(x+1-s- 1(1-s)/(x+3-s- 2(2-s)/(x+5-s- ...))).
double upper_fraction(double s, double x, int& iterations) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (iterations = 1; iterations < kMaxIter; ++iterations) {
    const double an = -iterations * (iterations - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double gamma_fn(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("z", "gamma_fn requires z > 0, got " + std::to_string(z));
  }
  return std::tgamma(z);
}

IncompleteGammaResult upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("s", "upper_incomplete_gamma requires s > 0, got " + std::to_string(s));
  }
  if (!(x >= 0.0)) {
    throw DomainError("x", "upper_incomplete_gamma requires x >= 0, got " + std::to_string(x));
  }
  const double full = std::tgamma(s);
  if (x == 0.0) return {full, 4.0 * kEps};

  int iterations = 0;
  if (x < s + 1.0) {
    const double lower = power_exp(s, x) * lower_series(s, x, iterations);
    const double value = full - lower;
    // Rounding in both pieces, amplified by the cancellation Gamma(s) / value.
    const double amplification = (full + lower) / value;
    return {value, (8.0 + iterations) * kEps * amplification};
  }
  const double value = power_exp(s, x) * upper_fraction(s, x, iterations);
  return {value, (8.0 + 2.0 * iterations) * kEps};
}

TailIntegralResult tail_integral(double lambda, double a, double y0) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda", "tail_integral requires lambda > 0, got " + std::to_string(lambda));
  }
  if (!(a > -1.0) || !std::isfinite(a)) {
    throw DomainError("a", "tail_integral requires a > -1, got " + std::to_string(a));
  }
  if (!(y0 >= 0.0) || !std::isfinite(y0)) {
    throw DomainError("y0", "tail_integral requires y0 >= 0, got " + std::to_string(y0));
  }
  const double s = a + 1.0;
  const auto g = upper_incomplete_gamma(s, lambda * y0);
  const double scale = std::exp(-s * std::log(lambda));
  return {scale * g.value, g.rel_err_bound + 4.0 * kEps};
}

}  // namespace smalldev::specfun
