#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smalldev/scaling.hpp"

namespace smalldev::dichotomy {

/// Boundary family psi(n) = c log n + b log log n + d (floored logarithms).
/// Eventually positive and non-decreasing iff c > 0, or c = 0 and b > 0, or
/// c = b = 0 and d > 0.
struct PsiSpec {
  double c = 0.0;
  double b = 0.0;
  double d = 0.0;

  double operator()(double n) const noexcept;
  bool valid() const noexcept;
};

enum class Verdict { converges, diverges };

enum class SummandMode {
  exponential,  // n^{r-2} (log n)^a exp(-psi(n))
  wiener_prob,  // n^{r-2} (log n)^a P(sup|W| <= sqrt(pi^2 / (8 psi(n))))
};

/// Character of the decade increments of a partial-sum table.
enum class Trend {
  geometric_decay,  // last increment ratio < 0.5
  slow_decay,       // ratio in [0.5, 0.95)
  no_decay,         // ratio >= 0.95
};

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(SummandMode m) noexcept;
std::string_view to_string(Trend t) noexcept;

/// Decides convergence of sum n^{r-2} (log n)^a exp(-psi(n)) by the integral
/// test: Converges iff c > r - 1, or c = r - 1 and b - a > 1. Equalities are
/// tested with a relative tolerance of 1e-12. Throws DomainError for an
/// invalid psi.
Verdict classify_psi(const PsiSpec& psi, const WeightParams& params);

struct DiagnosticRow {
  std::int64_t cutoff = 0;
  double partial_sum = 0.0;
  double increment = 0.0;  // partial_sum minus the previous row's partial_sum
};

struct PartialSumTable {
  SummandMode mode = SummandMode::exponential;
  std::vector<DiagnosticRow> rows;
  Trend trend = Trend::no_decay;
};

/// Partial sums at cutoffs 10, 100, ..., N (N appended if not a power of ten).
/// Requires N >= 10 and psi(n) > 0 for all n <= N.
PartialSumTable partial_sum_diagnostic(const PsiSpec& psi, const WeightParams& params,
                                       std::int64_t max_n, SummandMode mode,
                                       unsigned workers = 1);

/// Same diagnostic for a tabulated boundary: psi_values[i] = psi(i + 1). The
/// initial segment is summed exactly as given; no verdict is offered.
PartialSumTable partial_sum_diagnostic_tabulated(std::span<const double> psi_values,
                                                 const WeightParams& params, SummandMode mode,
                                                 unsigned workers = 1);

/// Ratio-based trend of the last two decade increments.
Trend classify_trend(std::span<const DiagnosticRow> rows) noexcept;

}  // namespace smalldev::dichotomy
