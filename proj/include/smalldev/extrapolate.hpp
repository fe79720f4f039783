#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace smalldev {

/// One error term lambda^power (times ln lambda when with_log) in the expansion
/// of a quantity about lambda = 0.
struct BasisTerm {
  double power = 1.0;
  bool with_log = false;

  double operator()(double lambda) const;
  std::string label() const;
};

/// Leading `count` error terms of the normalised weighted series
/// lambda^{a+1} S(lambda) about its limit, ordered from largest to smallest as
/// lambda -> 0:
///   * lambda^{a+1+k}                 (finitely many small-n terms, always present)
///   * lambda^j, j = 1, 2, ...        (1/log n corrections of a nonzero drift)
///   * lambda^j ln lambda             (the same corrections when a is an integer
///                                     and j >= a + 1)
/// With tau = 0 and integer a this reduces to classical Richardson in powers of
/// lambda.
std::vector<BasisTerm> limit_error_basis(double a, double tau, std::size_t count);

/// Value at lambda = 0 of the function c0 + sum_i c_i basis_i(lambda)
/// interpolating (xs, ys). Requires xs.size() == ys.size() == basis.size() + 1.
double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys,
                           std::span<const BasisTerm> basis);

}  // namespace smalldev
