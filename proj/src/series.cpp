#include "smalldev/series.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "smalldev/brownian.hpp"
#include "smalldev/errors.hpp"
#include "smalldev/extrapolate.hpp"
#include "smalldev/parallel.hpp"
#include "smalldev/specfun.hpp"

namespace smalldev::series {
namespace {

constexpr double kFourOverPi = 4.0 / std::numbers::pi;
constexpr double kDoubleEps = std::numeric_limits<double>::epsilon();
constexpr std::int64_t kMinAutoCutoff = 1024;
constexpr std::int64_t kMaxCutoff = std::int64_t{1} << 40;

// Continuous extension of the summand beyond the cutoff, leading theta term only:
//   f(x) = (4/pi) x^{r-2} y^a exp(-g(y)),  y = ln x,  g(y) = y / (eps + tau/y)^2.
struct TailModel {
  double r;
  double a;
  double eps;
  double tau;
  double lambda;

  double g(double y) const {
    const double shifted = eps + tau / y;
    return y / (shifted * shifted);
  }
  // dg/dy = y^2 (eps y + 3 tau) / (eps y + tau)^3
  double g_prime(double y) const {
    const double base = eps * y + tau;
    return y * y * (eps * y + 3.0 * tau) / (base * base * base);
  }
  double f(double x) const {
    const double y = std::log(x);
    return kFourOverPi * std::exp((r - 2.0) * y + a * std::log(y) - g(y));
  }
  // Local power x f'(x) / f(x).
  double local_power(double x) const {
    const double y = std::log(x);
    return (r - 2.0) + a / y - g_prime(y);
  }
  double h_limit() const { return 2.0 * tau / (eps * eps * eps); }
  // h(y) - h_limit, written without cancellation: -(tau u / eps^3)(3 + 2u)/(1 + u)^2.
  double h_deficit(double y) const {
    const double u = tau / (eps * y);
    const double opu = 1.0 + u;
    return -(tau * u / (eps * eps * eps)) * (3.0 + 2.0 * u) / (opu * opu);
  }
};

struct TailEstimate {
  double value = 0.0;
  double gamma_part = 0.0;
  double drift_part = 0.0;
  double boundary = 0.0;
  double abs_err = 0.0;
  double em_first = 0.0;       // |f'(N)| / 12
  double asym_rel = 0.0;       // relative error of the leading theta term at N
  double local_power = 0.0;
};

TailEstimate tail_beyond(const TailModel& model, std::int64_t cutoff) {
  const double n = static_cast<double>(cutoff);
  const double y0 = std::log(n);
  TailEstimate out;

  const double h_inf = model.h_limit();
  const auto gamma_tail = specfun::tail_integral(model.lambda, model.a, y0);
  out.gamma_part = kFourOverPi * std::exp(h_inf) * gamma_tail.value;

  double drift_err = 0.0;
  if (model.tau != 0.0) {
    // y = y0 + t / lambda
    const double lambda = model.lambda;
    auto integrand = [&](double t) {
      const double y = y0 + t / lambda;
      const double weight = std::exp(model.a * std::log(y / y0) - t);
      return weight * std::expm1(model.h_deficit(y));
    };
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
    const double scale =
        kFourOverPi * std::exp(h_inf + model.a * std::log(y0) - lambda * y0) / lambda;
    out.drift_part = scale * integral;
    drift_err = scale * err;
  }

  const double f_n = model.f(n);
  const double p = model.local_power(n);
  const double f_prime = f_n * p / n;
  out.boundary = -0.5 * f_n - f_prime / 12.0;
  out.em_first = std::abs(f_prime) / 12.0;
  out.local_power = p;
  // Next Euler-Maclaurin term f'''(N)/720 with f ~ x^p locally.
  const double em_next = std::abs(f_n * p * (p - 1.0) * (p - 2.0) / (n * n * n)) / 720.0;

  const double integral_part = out.gamma_part + out.drift_part;
  out.value = integral_part + out.boundary;
  // Ratio of the second theta term to the first at the cutoff; later terms are smaller.
  out.asym_rel = std::exp(-8.0 * model.g(y0)) / 3.0;
  out.abs_err = em_next + drift_err + out.asym_rel * std::abs(integral_part) +
                gamma_tail.rel_err_bound * out.gamma_part;
  return out;
}

void check_subcritical(const WeightParams& params, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("eps", "eps must be positive, got " + std::to_string(eps));
  }
  const double critical = critical_threshold(params, 1.0, Scaling::phi);
  if (eps >= critical) {
    throw DivergentSeries("eps", "series diverges for eps >= 1/sqrt(r-1) = " +
                                     std::to_string(critical) + ", got eps = " +
                                     std::to_string(eps));
  }
}

TailModel make_model(const WeightParams& params, double eps, const DriftSpec& drift) {
  return {params.r(), params.a(), eps, drift.is_zero() ? 0.0 : drift.tau(), params.gap(eps)};
}

// The tail model needs eps + tau/y > 0 on [ln N, inf).
void check_tail_domain(const TailModel& model, std::int64_t cutoff) {
  const double y0 = std::log(static_cast<double>(cutoff));
  if (!(model.eps * y0 + model.tau > 0.0)) {
    throw DomainError("cutoff", "threshold eps + tau/log n is not positive beyond cutoff " +
                                    std::to_string(cutoff));
  }
}

// Smallest power-of-two multiple of kMinAutoCutoff meeting the accuracy targets.
std::int64_t choose_cutoff(const TailModel& model, double rel_tol) {
  const double target = rel_tol / 10.0;
  for (std::int64_t n = kMinAutoCutoff; n <= kMaxCutoff; n *= 2) {
    const double y0 = std::log(static_cast<double>(n));
    if (!(model.eps * y0 + model.tau > 0.0)) continue;
    if (std::abs(model.tau) / (model.eps * y0) > 0.5) continue;
    const auto tail = tail_beyond(model, n);
    if (tail.local_power >= 0.0) continue;
    const double integral = tail.gamma_part + tail.drift_part;
    if (tail.asym_rel <= target && tail.em_first <= target * integral) return n;
  }
  throw DomainError("rel_tol", "no cutoff up to 2^40 meets the requested tolerance");
}

}  // namespace

std::vector<std::int64_t> decade_cutoffs(std::int64_t max_cutoff) {
  std::vector<std::int64_t> cutoffs;
  for (std::int64_t c = 10; c <= max_cutoff; c *= 10) {
    cutoffs.push_back(c);
    if (c > max_cutoff / 10) break;
  }
  if (cutoffs.empty() || cutoffs.back() != max_cutoff) cutoffs.push_back(max_cutoff);
  return cutoffs;
}

double critical_threshold(const WeightParams& params, double sigma, Scaling scaling) {
  if (!(sigma > 0.0)) {
    throw DomainError("sigma", "sigma must be positive, got " + std::to_string(sigma));
  }
  const double rm1 = params.r() - 1.0;
  switch (scaling) {
    case Scaling::phi:
      return 1.0 / std::sqrt(rm1);
    case Scaling::sqrt_n_over_log_n:
      return sigma * std::sqrt(std::numbers::pi * std::numbers::pi / (8.0 * rm1));
  }
  return 0.0;
}

double limit_constant(const WeightParams& params, double tau) {
  const double rm1 = params.r() - 1.0;
  return kFourOverPi * std::exp(2.0 * tau * rm1 * std::sqrt(rm1)) *
         specfun::gamma_fn(params.a() + 1.0);
}

double summand(const WeightParams& params, double eps, const DriftSpec& drift, std::int64_t n) {
  const double nd = static_cast<double>(n);
  const double prob = [&] {
    const double shifted = eps + drift.at(nd);
    if (!(shifted > 0.0)) {
      throw DomainError("eps", "eps + a_n(eps) must be positive, got " +
                                   std::to_string(shifted) + " at n = " + std::to_string(n));
    }
    return brownian::sup_cdf_relative(brownian::wiener_threshold(nd, eps, drift), 1e-17).value;
  }();
  double weight = 1.0;
  if (params.r() != 2.0) weight *= std::pow(nd, params.r() - 2.0);
  if (params.a() != 0.0) weight *= std::pow(floored_log(nd), params.a());
  return weight * prob;
}

SeriesResult weighted_series_wiener(const WeightParams& params, double eps, const DriftSpec& drift,
                                    const SeriesOptions& options) {
  check_subcritical(params, eps);
  if (!(options.rel_tol > 0.0 && options.rel_tol < 0.1)) {
    throw DomainError("rel_tol",
                      "rel_tol must lie in (0, 0.1), got " + std::to_string(options.rel_tol));
  }
  const TailModel model = make_model(params, eps, drift);

  std::int64_t cutoff = options.cutoff;
  if (cutoff == 0) {
    cutoff = choose_cutoff(model, options.rel_tol);
  } else if (cutoff < 3) {
    throw InvalidParameter("cutoff", "explicit cutoff must be >= 3, got " + std::to_string(cutoff));
  }
  check_tail_domain(model, cutoff);

  SeriesResult out;
  out.lambda = model.lambda;
  out.cutoff_n = cutoff;
  out.partial_sum = parallel::deterministic_sum(
      1, cutoff, [&](std::int64_t n) { return summand(params, eps, drift, n); }, options.workers);

  const TailEstimate tail = tail_beyond(model, cutoff);
  out.tail_gamma = tail.gamma_part;
  out.tail_drift = tail.drift_part;
  out.tail_boundary = tail.boundary;
  out.tail_correction = tail.value;
  out.total = out.partial_sum + out.tail_correction;
  out.normalized = std::pow(out.lambda, params.a() + 1.0) * out.total;

  const double rounding = 2.0 * kDoubleEps * std::log2(static_cast<double>(cutoff) + 2.0) *
                          out.partial_sum;
  out.rel_err_bound = (tail.abs_err + rounding) / out.total;
  return out;
}

std::vector<StabilizationRow> stabilization_table(const WeightParams& params, double eps,
                                                  const DriftSpec& drift, std::int64_t max_cutoff,
                                                  unsigned workers) {
  check_subcritical(params, eps);
  if (max_cutoff < 10) {
    throw InvalidParameter("N", "max_cutoff must be >= 10, got " + std::to_string(max_cutoff));
  }
  const TailModel model = make_model(params, eps, drift);
  auto term = [&](std::int64_t n) { return summand(params, eps, drift, n); };

  std::vector<StabilizationRow> rows;
  double running = 0.0;
  std::int64_t previous = 0;
  for (std::int64_t cutoff : decade_cutoffs(max_cutoff)) {
    running += parallel::deterministic_sum(previous + 1, cutoff, term, workers);
    check_tail_domain(model, cutoff);
    rows.push_back({cutoff, running, running + tail_beyond(model, cutoff).value});
    previous = cutoff;
  }
  return rows;
}

LimitProbeResult limit_probe(const WeightParams& params, const DriftSpec& drift,
                             std::span<const double> lambda_schedule, double rel_tol,
                             double agree_tol, unsigned workers) {
  if (lambda_schedule.empty()) {
    throw InvalidParameter("lambdas", "lambda schedule must not be empty");
  }
  for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
    if (!(lambda_schedule[i] > 0.0)) {
      throw InvalidParameter("lambdas", "every lambda must be positive");
    }
    if (i > 0 && !(lambda_schedule[i] < lambda_schedule[i - 1])) {
      throw InvalidParameter("lambdas", "lambda schedule must be strictly decreasing");
    }
  }

  LimitProbeResult out;
  out.analytic = limit_constant(params, drift.is_zero() ? 0.0 : drift.tau());
  out.agree_tol = agree_tol;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double lambda : lambda_schedule) {
    const double eps = params.eps_for_gap(lambda);
    const auto res = weighted_series_wiener(params, eps, drift, rel_tol, workers);
    out.rows.push_back({lambda, eps, res.normalized, res.rel_err_bound, res.cutoff_n});
    xs.push_back(lambda);
    ys.push_back(res.normalized);
  }

  const std::size_t m = xs.size();
  if (m == 1) {
    out.first_order = ys[0];
    out.extrapolated = ys[0];
  } else {
    const auto basis =
        limit_error_basis(params.a(), drift.is_zero() ? 0.0 : drift.tau(), m - 1);
    for (const auto& b : basis) out.basis.push_back(b.label());
    // Two-point elimination of the leading power only.
    const double p = basis.front().power;
    const double l1 = std::pow(xs[m - 2], p), l2 = std::pow(xs[m - 1], p);
    out.first_order = (l1 * ys[m - 1] - l2 * ys[m - 2]) / (l1 - l2);
    out.extrapolated = extrapolate_to_zero(xs, ys, basis);
  }
  out.agrees = std::abs(out.extrapolated / out.analytic - 1.0) <= agree_tol;
  return out;
}

}  // namespace smalldev::series
