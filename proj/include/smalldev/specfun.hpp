#pragma once

namespace smalldev::specfun {

/// Gamma(z) for z > 0. Throws DomainError otherwise.
double gamma_fn(double z);

struct IncompleteGammaResult {
  double value = 0.0;
  double rel_err_bound = 0.0;
};

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt for s > 0, x >= 0.
/// Power series for the lower part when x < s + 1, Lentz continued fraction
/// otherwise.
IncompleteGammaResult upper_incomplete_gamma(double s, double x);

struct TailIntegralResult {
  double value = 0.0;
  double rel_err_bound = 0.0;
};

/// int_{y0}^inf y^a exp(-lambda y) dy = lambda^{-(a+1)} Gamma(a+1, lambda y0).
/// Requires lambda > 0, a > -1, y0 >= 0.
TailIntegralResult tail_integral(double lambda, double a, double y0);

}  // namespace smalldev::specfun
