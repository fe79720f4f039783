#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smalldev/increments.hpp"
#include "smalldev/rng.hpp"
#include "smalldev/scaling.hpp"

namespace smalldev::simulate {

/// M_n = max_{k<=n} |S_k| for one simulated path.
struct WalkMaxSample {
  double m_n = 0.0;
  std::int64_t n = 0;
};

/// Draws n increments from `stream` in a single pass and returns the running
/// maximum of |S_k|. Rademacher paths take 64 steps per 64-bit draw, so two
/// streams with the same address share the prefix of their paths for any n.
WalkMaxSample sample_walk_max(const IncrementLaw& law, std::int64_t n, rng::RandomStream& stream);

/// M_n for samples 0..samples-1 (sample i uses stream (seed, i)), in sample order.
std::vector<double> sample_walk_maxima(const IncrementLaw& law, std::int64_t n,
                                       std::int64_t samples, std::uint64_t seed, unsigned workers);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at two-sided
/// `confidence`. With zero successes the upper end is the one-sided bound
/// z^2 / (trials + z^2), z = Phi^{-1}(confidence).
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double confidence);

struct MCEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double confidence = 0.95;
  std::int64_t samples = 0;
  std::int64_t successes = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double threshold = 0.0;       // absolute threshold on M_n
  bool zero_successes = false;  // ci_high is then a one-sided upper bound
};

/// P(M_n <= sigma phi(n) (eps + a_n(eps))) by plain Monte Carlo. The event is
/// evaluated in units of sigma, so rescaling the law leaves every indicator
/// unchanged. Throws DomainError for a non-positive threshold, InvalidParameter
/// for samples < 100 or confidence outside (0, 1).
MCEstimate estimate_small_dev(const IncrementLaw& law, std::int64_t n, double eps,
                              const DriftSpec& drift, std::int64_t samples, std::uint64_t seed,
                              unsigned workers, double confidence = 0.95);

/// P(M_n <= threshold) by plain Monte Carlo, threshold in the law's own units.
MCEstimate estimate_stay_probability(const IncrementLaw& law, std::int64_t n, double threshold,
                                     std::int64_t samples, std::uint64_t seed, unsigned workers,
                                     double confidence = 0.95);

/// Summary of an MC estimate given an externally computed success count.
MCEstimate make_estimate(std::int64_t successes, std::int64_t samples, double confidence);

enum class ExponentSource { automatic, monte_carlo };

struct ExponentCheckOptions {
  ExponentSource source = ExponentSource::automatic;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  int grid_points = 1024;
  double confidence = 0.95;
};

struct ExponentRow {
  std::int64_t n = 0;
  double probability = 0.0;
  double exponent = 0.0;  // -log P / log n
  double target = 0.0;    // 1 / x^2
  bool bound_only = false;
  std::string_view method;  // "rademacher_dp", "gaussian_grid" or "monte_carlo"
};

/// Empirical small-deviation exponent -log P(M_n <= x sigma phi(n)) / log n along
/// a schedule. `automatic` uses the exact Rademacher DP or the Gaussian grid
/// oracle (n <= 10^4) where available and Monte Carlo otherwise. A Monte Carlo
/// estimate with no successes yields a lower bound on the exponent, flagged by
/// bound_only.
std::vector<ExponentRow> exponent_check(const IncrementLaw& law, double x,
                                        std::span<const std::int64_t> n_schedule,
                                        const ExponentCheckOptions& options = {});

}  // namespace smalldev::simulate
