#include "smalldev/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "smalldev/brownian.hpp"
#include "smalldev/errors.hpp"
#include "smalldev/parallel.hpp"
#include "smalldev/series.hpp"

namespace smalldev::dichotomy {
namespace {

constexpr double kPi2Over8 = std::numbers::pi * std::numbers::pi / 8.0;

bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

double weight(const WeightParams& params, double n) {
  double w = 1.0;
  if (params.r() != 2.0) w *= std::pow(n, params.r() - 2.0);
  if (params.a() != 0.0) w *= std::pow(floored_log(n), params.a());
  return w;
}

double boundary_factor(double psi_value, SummandMode mode, double n) {
  if (!(psi_value > 0.0)) {
    throw DomainError("psi", "psi(n) must be positive, got " + std::to_string(psi_value) +
                                 " at n = " + std::to_string(static_cast<std::int64_t>(n)));
  }
  if (mode == SummandMode::exponential) return std::exp(-psi_value);
  return brownian::sup_cdf_relative(std::sqrt(kPi2Over8 / psi_value), 1e-17).value;
}

PartialSumTable build_table(const std::function<double(std::int64_t)>& term, std::int64_t max_n,
                            SummandMode mode, unsigned workers) {
  PartialSumTable table;
  table.mode = mode;
  double running = 0.0;
  std::int64_t previous = 0;
  for (std::int64_t cutoff : series::decade_cutoffs(max_n)) {
    const double inc = parallel::deterministic_sum(previous + 1, cutoff, term, workers);
    running += inc;
    table.rows.push_back({cutoff, running, inc});
    previous = cutoff;
  }
  table.trend = classify_trend(table.rows);
  return table;
}

}  // namespace

double PsiSpec::operator()(double n) const noexcept {
  return c * floored_log(n) + b * iterated_log(n) + d;
}

bool PsiSpec::valid() const noexcept {
  if (!std::isfinite(c) || !std::isfinite(b) || !std::isfinite(d)) return false;
  if (c > 0.0) return true;
  if (c == 0.0 && b > 0.0) return true;
  return c == 0.0 && b == 0.0 && d > 0.0;
}

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::converges ? "Converges" : "Diverges";
}

std::string_view to_string(SummandMode m) noexcept {
  return m == SummandMode::exponential ? "exponential" : "wiener_prob";
}

std::string_view to_string(Trend t) noexcept {
  switch (t) {
    case Trend::geometric_decay:
      return "geometric_decay";
    case Trend::slow_decay:
      return "slow_decay";
    case Trend::no_decay:
      return "no_decay";
  }
  return "unknown";
}

Verdict classify_psi(const PsiSpec& psi, const WeightParams& params) {
  if (!psi.valid()) {
    throw DomainError("psi", "psi must be eventually positive and non-decreasing "
                             "(c > 0, or c = 0 and b > 0, or c = b = 0 and d > 0)");
  }
  const double critical = params.r() - 1.0;
  if (nearly_equal(psi.c, critical)) {
    const double excess = psi.b - params.a();
    return (excess > 1.0 && !nearly_equal(excess, 1.0)) ? Verdict::converges : Verdict::diverges;
  }
  return psi.c > critical ? Verdict::converges : Verdict::diverges;
}

Trend classify_trend(std::span<const DiagnosticRow> rows) noexcept {
  // Increments over full decades (10^k, 10^{k+1}]; a trailing partial decade is skipped.
  std::vector<double> decades;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].cutoff == rows[i - 1].cutoff * 10) decades.push_back(rows[i].increment);
  }
  if (decades.size() < 2) return Trend::no_decay;
  const double before = decades[decades.size() - 2];
  const double ratio = before > 0.0 ? decades.back() / before : 0.0;
  if (ratio < 0.5) return Trend::geometric_decay;
  if (ratio < 0.95) return Trend::slow_decay;
  return Trend::no_decay;
}

PartialSumTable partial_sum_diagnostic(const PsiSpec& psi, const WeightParams& params,
                                       std::int64_t max_n, SummandMode mode, unsigned workers) {
  if (!psi.valid()) {
    throw DomainError("psi", "psi must be eventually positive and non-decreasing");
  }
  if (max_n < 10) {
    throw InvalidParameter("N", "N must be >= 10, got " + std::to_string(max_n));
  }
  auto term = [&](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return weight(params, nd) * boundary_factor(psi(nd), mode, nd);
  };
  return build_table(term, max_n, mode, workers);
}

PartialSumTable partial_sum_diagnostic_tabulated(std::span<const double> psi_values,
                                                 const WeightParams& params, SummandMode mode,
                                                 unsigned workers) {
  if (psi_values.size() < 10) {
    throw InvalidParameter("psi", "need at least 10 tabulated psi values");
  }
  auto term = [&](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return weight(params, nd) *
           boundary_factor(psi_values[static_cast<std::size_t>(n - 1)], mode, nd);
  };
  return build_table(term, static_cast<std::int64_t>(psi_values.size()), mode, workers);
}

}  // namespace smalldev::dichotomy
