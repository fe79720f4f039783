#include "smalldev/simulate.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "smalldev/errors.hpp"
#include "smalldev/oracles.hpp"
#include "smalldev/parallel.hpp"

namespace smalldev::simulate {
namespace {

constexpr std::int64_t kSampleChunk = 4096;

// Running max of |S_k| in units of sigma.
double unit_walk_max(const IncrementLaw& law, std::int64_t n, rng::RandomStream& stream) {
  if (law.kind() == LawKind::rademacher) {
    std::int64_t s = 0;
    std::int64_t m = 0;
    for (std::int64_t done = 0; done < n;) {
      const std::uint64_t bits = stream.next_u64();
      const int steps = static_cast<int>(std::min<std::int64_t>(64, n - done));
      for (int i = 0; i < steps; ++i) {
        s += static_cast<std::int64_t>((bits >> i) & 1u) * 2 - 1;
        m = std::max(m, s < 0 ? -s : s);
      }
      done += steps;
    }
    return static_cast<double>(m);
  }
  double s = 0.0;
  double m = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    s += law.draw_unit(stream);
    m = std::max(m, std::abs(s));
  }
  return m;
}

void check_mc_args(std::int64_t n, std::int64_t samples, double confidence) {
  if (n < 1) throw InvalidParameter("n", "n must be >= 1, got " + std::to_string(n));
  if (samples < 100) {
    throw InvalidParameter("samples", "samples must be >= 100, got " + std::to_string(samples));
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidParameter("confidence",
                           "confidence must lie in (0, 1), got " + std::to_string(confidence));
  }
}

std::int64_t count_stays(const IncrementLaw& law, std::int64_t n, double unit_threshold,
                         std::int64_t samples, std::uint64_t seed, unsigned workers) {
  const std::int64_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(chunks), 0);
  parallel::for_each_chunk(chunks, workers, [&](std::int64_t c) {
    const std::int64_t lo = c * kSampleChunk;
    const std::int64_t hi = std::min(samples, lo + kSampleChunk);
    std::int64_t hits = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      rng::RandomStream stream(seed, static_cast<std::uint64_t>(i));
      if (unit_walk_max(law, n, stream) <= unit_threshold) ++hits;
    }
    counts[static_cast<std::size_t>(c)] = hits;
  });
  std::int64_t total = 0;
  for (auto h : counts) total += h;
  return total;
}

MCEstimate finish(std::int64_t successes, std::int64_t samples, double confidence,
                  std::uint64_t seed, unsigned workers, double threshold) {
  MCEstimate est = make_estimate(successes, samples, confidence);
  est.seed = seed;
  est.workers = parallel::effective_workers(workers);
  est.threshold = threshold;
  return est;
}

}  // namespace

WalkMaxSample sample_walk_max(const IncrementLaw& law, std::int64_t n, rng::RandomStream& stream) {
  if (n < 1) throw InvalidParameter("n", "n must be >= 1, got " + std::to_string(n));
  return {law.sigma() * unit_walk_max(law, n, stream), n};
}

std::vector<double> sample_walk_maxima(const IncrementLaw& law, std::int64_t n,
                                       std::int64_t samples, std::uint64_t seed,
                                       unsigned workers) {
  if (n < 1) throw InvalidParameter("n", "n must be >= 1, got " + std::to_string(n));
  if (samples < 1) {
    throw InvalidParameter("samples", "samples must be >= 1, got " + std::to_string(samples));
  }
  std::vector<double> out(static_cast<std::size_t>(samples));
  const std::int64_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  parallel::for_each_chunk(chunks, workers, [&](std::int64_t c) {
    const std::int64_t lo = c * kSampleChunk;
    const std::int64_t hi = std::min(samples, lo + kSampleChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      rng::RandomStream stream(seed, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = law.sigma() * unit_walk_max(law, n, stream);
    }
  });
  return out;
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw InvalidParameter("trials", "need 0 <= successes <= trials and trials > 0");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidParameter("confidence",
                           "confidence must lie in (0, 1), got " + std::to_string(confidence));
  }
  const boost::math::normal standard;
  const double nt = static_cast<double>(trials);
  if (successes == 0) {
    const double z = boost::math::quantile(standard, confidence);
    return {0.0, z * z / (nt + z * z)};
  }
  const double z = boost::math::quantile(standard, 0.5 + confidence / 2.0);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

MCEstimate make_estimate(std::int64_t successes, std::int64_t samples, double confidence) {
  MCEstimate est;
  est.samples = samples;
  est.successes = successes;
  est.confidence = confidence;
  est.p_hat = static_cast<double>(successes) / static_cast<double>(samples);
  const auto ci = wilson_interval(successes, samples, confidence);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.zero_successes = successes == 0;
  return est;
}

MCEstimate estimate_small_dev(const IncrementLaw& law, std::int64_t n, double eps,
                              const DriftSpec& drift, std::int64_t samples, std::uint64_t seed,
                              unsigned workers, double confidence) {
  check_mc_args(n, samples, confidence);
  const double nd = static_cast<double>(n);
  const double unit_threshold = phi_scale(nd) * (eps + drift.at(nd));
  if (!(unit_threshold > 0.0)) {
    throw DomainError("eps", "threshold sigma phi(n) (eps + a_n) must be positive, got " +
                                 std::to_string(unit_threshold * law.sigma()));
  }
  const auto hits = count_stays(law, n, unit_threshold, samples, seed, workers);
  return finish(hits, samples, confidence, seed, workers, unit_threshold * law.sigma());
}

MCEstimate estimate_stay_probability(const IncrementLaw& law, std::int64_t n, double threshold,
                                     std::int64_t samples, std::uint64_t seed, unsigned workers,
                                     double confidence) {
  check_mc_args(n, samples, confidence);
  if (!(threshold > 0.0)) {
    throw DomainError("threshold", "threshold must be positive, got " + std::to_string(threshold));
  }
  const auto hits = count_stays(law, n, threshold / law.sigma(), samples, seed, workers);
  return finish(hits, samples, confidence, seed, workers, threshold);
}

std::vector<ExponentRow> exponent_check(const IncrementLaw& law, double x,
                                        std::span<const std::int64_t> n_schedule,
                                        const ExponentCheckOptions& options) {
  if (!(x > 0.0)) throw DomainError("x", "x must be positive, got " + std::to_string(x));
  if (n_schedule.empty()) throw InvalidParameter("ns", "n schedule must not be empty");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 2) throw InvalidParameter("ns", "every n must be >= 2");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1]) {
      throw InvalidParameter("ns", "n schedule must be increasing");
    }
  }

  std::vector<ExponentRow> rows;
  for (std::int64_t n : n_schedule) {
    const double nd = static_cast<double>(n);
    const double log_n = floored_log(nd);
    const double unit_threshold = x * phi_scale(nd);
    ExponentRow row;
    row.n = n;
    row.target = 1.0 / (x * x);

    double log_p = 0.0;
    const bool automatic = options.source == ExponentSource::automatic;
    if (automatic && law.kind() == LawKind::rademacher) {
      log_p = oracles::rademacher_oracle_log(n, unit_threshold, 1.0);
      row.method = "rademacher_dp";
    } else if (automatic && law.kind() == LawKind::gaussian && n <= 10000) {
      log_p = oracles::gaussian_grid_oracle(n, unit_threshold, options.grid_points).log_value;
      row.method = "gaussian_grid";
    } else {
      const auto est = estimate_stay_probability(law, n, unit_threshold * law.sigma(),
                                                 options.samples, options.seed, options.workers,
                                                 options.confidence);
      row.method = "monte_carlo";
      if (est.zero_successes) {
        row.bound_only = true;
        log_p = std::log(est.ci_high);
      } else {
        log_p = std::log(est.p_hat);
      }
    }
    row.probability = std::exp(log_p);
    row.exponent = -log_p / log_n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace smalldev::simulate
