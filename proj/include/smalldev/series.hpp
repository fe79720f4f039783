#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smalldev/scaling.hpp"

namespace smalldev::series {

enum class Scaling {
  phi,                // thresholds sigma * phi(n) * eps
  sqrt_n_over_log_n,  // thresholds eps * sqrt(n / log n)
};

/// Convergence boundary of sum n^{r-2} (log n)^a P(M_n <= threshold):
/// 1/sqrt(r-1) under the phi scaling (sigma absorbed), and
/// sigma * sqrt(pi^2 / (8 (r-1))) under the raw sqrt(n/log n) scaling.
double critical_threshold(const WeightParams& params, double sigma, Scaling scaling);

/// (4/pi) exp(2 tau (r-1)^{3/2}) Gamma(a+1).
double limit_constant(const WeightParams& params, double tau);

/// Exact series term n^{r-2} (log n)^a P(sup|W| <= sqrt(pi^2/(8 log n)) (eps + a_n)).
double summand(const WeightParams& params, double eps, const DriftSpec& drift, std::int64_t n);

struct SeriesOptions {
  double rel_tol = 1e-8;
  std::int64_t cutoff = 0;  // 0 selects the cutoff automatically
  unsigned workers = 1;
};

struct SeriesResult {
  double partial_sum = 0.0;      // exact terms n = 1..cutoff_n
  double tail_correction = 0.0;  // accelerated estimate of sum_{n > cutoff_n}
  double total = 0.0;            // partial_sum + tail_correction
  double normalized = 0.0;       // lambda^{a+1} * total
  double lambda = 0.0;           // eps^{-2} - (r - 1)
  std::int64_t cutoff_n = 0;
  double rel_err_bound = 0.0;

  // Pieces of tail_correction.
  double tail_gamma = 0.0;        // (4/pi) e^{h_inf} lambda^{-(a+1)} Gamma(a+1, lambda log N)
  double tail_drift = 0.0;        // drift correction to the tail integral (0 without drift)
  double tail_boundary = 0.0;     // Euler-Maclaurin boundary terms -f(N)/2 - f'(N)/12
};

/// Weighted Wiener series sum_{n>=1} n^{r-2} (log n)^a P_n and its normalisation.
///
/// Terms n <= N are summed exactly (theta series, deterministic pairwise
/// merge). The remainder is the integral of the continuous summand beyond N
/// plus Euler-Maclaurin boundary terms. Under y = ln x that integral becomes
///
///   (4/pi) int_{ln N}^inf y^a exp(-lambda y + h(y)) dy,
///   h(y) = y/eps^2 - y/(eps + tau/y)^2  ->  2 tau / eps^3,
///
/// which is split into the incomplete-gamma part with h frozen at its limit
/// and a bounded drift correction integrated by adaptive Gauss-Kronrod.
///
/// Throws DivergentSeries for eps >= 1/sqrt(r-1), DomainError for eps <= 0 or
/// rel_tol outside (0, 0.1).
SeriesResult weighted_series_wiener(const WeightParams& params, double eps, const DriftSpec& drift,
                                    const SeriesOptions& options);

inline SeriesResult weighted_series_wiener(const WeightParams& params, double eps,
                                           const DriftSpec& drift, double rel_tol,
                                           unsigned workers = 1) {
  return weighted_series_wiener(params, eps, drift, SeriesOptions{rel_tol, 0, workers});
}

/// 10, 100, ..., up to max_cutoff, with max_cutoff appended when it is not a power of ten.
std::vector<std::int64_t> decade_cutoffs(std::int64_t max_cutoff);

/// Raw partial sums and accelerated totals at cutoffs 10, 100, ..., max_cutoff.
struct StabilizationRow {
  std::int64_t cutoff = 0;
  double raw_partial_sum = 0.0;
  double accelerated_total = 0.0;
};

std::vector<StabilizationRow> stabilization_table(const WeightParams& params, double eps,
                                                  const DriftSpec& drift, std::int64_t max_cutoff,
                                                  unsigned workers = 1);

struct ProbeRow {
  double lambda = 0.0;
  double eps = 0.0;
  double normalized = 0.0;
  double rel_err_bound = 0.0;
  std::int64_t cutoff_n = 0;
};

struct LimitProbeResult {
  std::vector<ProbeRow> rows;
  double extrapolated = 0.0;  // structured Richardson estimate (all rows)
  double first_order = 0.0;   // two-point, leading error power, two smallest lambdas
  double analytic = 0.0;      // limit_constant(params, tau)
  std::vector<std::string> basis;
  double agree_tol = 0.0;
  bool agrees = false;        // |extrapolated / analytic - 1| <= agree_tol
};

/// Evaluates the normalised series at eps(lambda) = (lambda + r - 1)^{-1/2} for
/// every lambda in a strictly decreasing schedule and extrapolates to lambda = 0.
/// Throws InvalidParameter for an empty, non-positive or non-decreasing schedule.
LimitProbeResult limit_probe(const WeightParams& params, const DriftSpec& drift,
                             std::span<const double> lambda_schedule, double rel_tol,
                             double agree_tol, unsigned workers = 1);

}  // namespace smalldev::series
