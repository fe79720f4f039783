#pragma once

#include <cstdint>

#include "smalldev/scaling.hpp"

namespace smalldev::brownian {

/// P(sup_{0<=s<=1} |W(s)| <= x) together with its truncation certificate.
struct BrownianCdfResult {
  double value = 0.0;        // clamped to [0, 1]
  int k_terms = 0;           // theta-series terms summed (0: closed-form tail bound used)
  double error_bound = 0.0;  // magnitude of the first omitted term
};

/// Evaluates the theta series
///
///   (4/pi) sum_{k>=0} (-1)^k / (2k+1) exp(-pi^2 (2k+1)^2 / (8 x^2))
///
/// term by term until the first omitted term is at most abs_tol. The terms are
/// strictly decreasing in magnitude for every x > 0, so the alternating-series
/// remainder bound certifies the result.
///
/// For x >= 40 the reflection bound 1 - P <= 2 erfc(x / sqrt 2) is below the
/// smallest subnormal, and the value 1 is returned without summing.
///
/// Throws DomainError for x <= 0 or abs_tol outside (0, 1).
BrownianCdfResult sup_cdf(double x, double abs_tol = 1e-14);

/// Same series, truncated once the first omitted term is at most rel_tol times
/// the leading term. Used where the probability itself is tiny.
BrownianCdfResult sup_cdf_relative(double x, double rel_tol);

/// Leading-term asymptotic form (4/pi) exp(-pi^2 / (8 x^2)). Not a CDF: it
/// exceeds 1 for large x.
double sup_cdf_asymptotic(double x);

/// sqrt(pi^2 / (8 log n)) * (eps + a_n(eps)) with the floored logarithm.
double wiener_threshold(double n, double eps, const DriftSpec& drift);

/// P(sup |W| <= sqrt(pi^2/(8 log n)) (eps + a_n(eps))).
/// Throws DomainError when eps + a_n(eps) <= 0 or n < 1.
BrownianCdfResult wiener_term_prob(std::int64_t n, double eps, const DriftSpec& drift,
                                   double abs_tol = 1e-14);

}  // namespace smalldev::brownian
