#pragma once

#include <cstdint>

namespace smalldev {

/// ln(max(x, e)); the logarithm used wherever n appears inside a log, so that
/// log n >= 1 for every n >= 1.
double floored_log(double x) noexcept;

/// floored_log(floored_log(x)).
double iterated_log(double x) noexcept;

/// Small-deviation scale sqrt(pi^2 n / (8 log n)).
double phi_scale(double n) noexcept;

/// Canonical drift a_n(eps) = tau / log n, or the zero sequence.
/// a_n(eps) * log n equals tau for every n.
class DriftSpec {
 public:
  static DriftSpec none() noexcept { return DriftSpec(0.0, false); }
  static DriftSpec inverse_log(double tau) noexcept { return DriftSpec(tau, true); }

  double tau() const noexcept { return tau_; }
  bool is_zero() const noexcept { return !active_ || tau_ == 0.0; }

  /// a_n for a (possibly non-integer) index n >= 1.
  double at(double n) const noexcept;

 private:
  DriftSpec(double tau, bool active) noexcept : tau_(tau), active_(active) {}

  double tau_;
  bool active_;
};

/// Exponent pair (r, a) weighting the series sum n^{r-2} (log n)^a P_n.
/// Construction enforces r > 1 and a > -1.
class WeightParams {
 public:
  WeightParams(double r, double a);

  double r() const noexcept { return r_; }
  double a() const noexcept { return a_; }

  /// Normalisation gap lambda = eps^{-2} - (r - 1).
  double gap(double eps) const noexcept;
  /// Inverse of gap(): eps = (lambda + r - 1)^{-1/2}.
  double eps_for_gap(double lambda) const noexcept;

 private:
  double r_;
  double a_;
};

}  // namespace smalldev
