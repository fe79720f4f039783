#include "smalldev/extrapolate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "smalldev/errors.hpp"

namespace smalldev {
namespace {

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

}  // namespace

double BasisTerm::operator()(double lambda) const {
  const double base = std::pow(lambda, power);
  return with_log ? base * std::log(lambda) : base;
}

std::string BasisTerm::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, with_log ? "lambda^%g*ln(lambda)" : "lambda^%g", power);
  return buf;
}

std::vector<BasisTerm> limit_error_basis(double a, double tau, std::size_t count) {
  std::vector<double> powers;
  for (std::size_t k = 0; k < count; ++k) powers.push_back(a + 1.0 + static_cast<double>(k));
  if (tau != 0.0) {
    for (std::size_t j = 1; j <= count; ++j) powers.push_back(static_cast<double>(j));
  }
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               powers.end());

  const bool log_terms = tau != 0.0 && is_integer(a);
  std::vector<BasisTerm> basis;
  for (double p : powers) {
    if (basis.size() >= count) break;
    if (log_terms && is_integer(p) && p >= a + 1.0 - 1e-12) {
      basis.push_back({p, true});
      if (basis.size() >= count) break;
    }
    basis.push_back({p, false});
  }
  basis.resize(std::min(basis.size(), count));
  return basis;
}

double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys,
                           std::span<const BasisTerm> basis) {
  if (xs.size() != ys.size() || xs.size() != basis.size() + 1 || xs.empty()) {
    throw InvalidParameter("basis", "extrapolation needs exactly one point per unknown");
  }
  const auto m = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < m; ++j) design(i, j) = basis[static_cast<std::size_t>(j - 1)](x);
    rhs(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);
  return coeffs(0);
}

}  // namespace smalldev
