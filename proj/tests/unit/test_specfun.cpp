#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "smalldev/errors.hpp"
#include "smalldev/specfun.hpp"

using namespace smalldev;
using namespace smalldev::specfun;

TEST_SUITE("specfun") {
  TEST_CASE("gamma identities") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
  }

  TEST_CASE("upper incomplete gamma against boost") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> s_dist(0.01, 12.0);
    std::uniform_real_distribution<double> x_dist(0.0, 40.0);
    for (int i = 0; i < 3000; ++i) {
      const double s = s_dist(gen);
      const double x = x_dist(gen);
      const double expected = boost::math::tgamma(s, x);
      const auto got = upper_incomplete_gamma(s, x);
      CAPTURE(s);
      CAPTURE(x);
      const double rel = std::abs(got.value / expected - 1.0);
      CHECK(rel <= std::max(got.rel_err_bound, 1e-13));
      CHECK(got.rel_err_bound < 1e-6);
    }
  }

  TEST_CASE("upper incomplete gamma edge values") {
    CHECK(upper_incomplete_gamma(1.0, 3.0).value == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
    CHECK(upper_incomplete_gamma(2.5, 0.0).value == doctest::Approx(std::tgamma(2.5)));
    CHECK(upper_incomplete_gamma(0.5, 800.0).value == 0.0);
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), DomainError);
  }

  TEST_CASE("tail integral") {
    CHECK(tail_integral(0.37, 0.0, 0.0).value == doctest::Approx(1.0 / 0.37).epsilon(1e-14));
    CHECK(tail_integral(1.0, 0.0, 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // y^a e^{-lambda y} integrated from y0 against boost.
    CHECK(tail_integral(0.2, 1.5, 3.0).value ==
          doctest::Approx(std::pow(0.2, -2.5) * boost::math::tgamma(2.5, 0.6)).epsilon(1e-13));
    for (double a : {-0.5, 0.0, 1.0, 2.5}) {
      const double lambda = 1e-12;
      CHECK(std::pow(lambda, a + 1) * tail_integral(lambda, a, 1.0).value ==
            doctest::Approx(std::tgamma(a + 1)).epsilon(1e-4));
    }
    CHECK_THROWS_AS(tail_integral(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(tail_integral(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(tail_integral(1.0, 0.0, -1.0), DomainError);
  }
}
