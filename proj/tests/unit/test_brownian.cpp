#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle_data.hpp"
#include "smalldev/brownian.hpp"
#include "smalldev/errors.hpp"

using namespace smalldev;
using namespace smalldev::brownian;

TEST_SUITE("brownian") {
  TEST_CASE("value at x = 1 against a 40-digit evaluation") {
    const auto oracle = testing::load_oracle("walk_oracle.json");
    const double expected = std::stod(oracle["sup_cdf_1"].get<std::string>());
    const auto r = sup_cdf(1.0, 1e-10);
    CHECK(std::abs(r.value - expected) <= 1e-10);
    CHECK(r.error_bound <= 1e-10);
    CHECK(r.k_terms >= 2);
    const double two_terms = 4.0 / std::numbers::pi *
                             (std::exp(-std::numbers::pi * std::numbers::pi / 8.0) -
                              std::exp(-9.0 * std::numbers::pi * std::numbers::pi / 8.0) / 3.0);
    CHECK(std::abs(r.value - two_terms) <= 1e-10);
  }

  TEST_CASE("grid of reference values") {
    const auto oracle = testing::load_oracle("walk_oracle.json");
    for (const auto& row : oracle["sup_cdf_grid"]) {
      const double x = row[0].get<double>();
      const double expected = row[1].get<double>();
      CAPTURE(x);
      CHECK(std::abs(sup_cdf(x, 1e-15).value - expected) <= 2e-15);
      if (expected > 1e-300) {
        CHECK(sup_cdf_relative(x, 1e-13).value == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("large x saturates") {
    const auto r = sup_cdf(100.0, 1e-12);
    CHECK(std::abs(r.value - 1.0) <= 1e-12);
    CHECK(std::abs(sup_cdf(8.0, 1e-14).value - 1.0) <= 1e-14);
  }

  TEST_CASE("small x is dominated by the leading term") {
    const double x = 0.3;
    CHECK(sup_cdf_relative(x, 1e-14).value / sup_cdf_asymptotic(x) ==
          doctest::Approx(1.0).epsilon(1e-6));
    for (double y : {0.2, 0.1, 0.05}) {
      CHECK(sup_cdf_relative(y, 1e-14).value / sup_cdf_asymptotic(y) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(sup_cdf_asymptotic(std::sqrt(std::numbers::pi * std::numbers::pi / 8.0)) ==
          doctest::Approx(4.0 / (std::numbers::pi * std::numbers::e)).epsilon(1e-15));
  }

  TEST_CASE("sandwich and monotonicity property") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dist(0.02, 6.0);
    for (int i = 0; i < 2000; ++i) {
      const double x = dist(gen);
      const double tol = 1e-13;
      const auto r = sup_cdf(x, tol);
      const double upper = sup_cdf_asymptotic(x);
      CAPTURE(x);
      CHECK(r.value >= 0.5 * upper - tol);
      CHECK(r.value <= upper + tol);
      CHECK(r.value <= 1.0);
      CHECK(sup_cdf(x * 1.01, tol).value >= r.value - 2 * tol);
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(sup_cdf(0.0), DomainError);
    CHECK_THROWS_AS(sup_cdf(-1.0), DomainError);
    CHECK_THROWS_AS(sup_cdf(NAN), DomainError);
    CHECK_THROWS_AS(sup_cdf(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(sup_cdf(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(sup_cdf_asymptotic(0.0), DomainError);
    try {
      sup_cdf(-2.0);
    } catch (const DomainError& e) {
      CHECK(e.parameter() == "x");
    }
  }

  TEST_CASE("wiener term probabilities") {
    const double pi = std::numbers::pi;
    CHECK(wiener_term_prob(1, 1.0, DriftSpec::none()).value ==
          doctest::Approx(sup_cdf(pi / std::sqrt(8.0)).value).epsilon(1e-15));
    // log 10^4 = 9.21: the leading term is (4/pi) n^{-1}.
    const auto oracle = testing::load_oracle("walk_oracle.json");
    const double p = wiener_term_prob(10000, 1.0, DriftSpec::none(), 1e-18).value;
    CHECK(p == doctest::Approx(oracle["wiener_term_1e4"].get<double>()).epsilon(1e-12));
    CHECK(p / (4.0 / pi * 1e-4) == doctest::Approx(1.0).epsilon(0.02));

    double prev = 1.0;
    for (int k = 2; k <= 40; k += 2) {
      const auto n = static_cast<std::int64_t>(std::exp(static_cast<double>(k)));
      const double v = wiener_term_prob(n, 0.9, DriftSpec::none(), 1e-300).value;
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 1e-10);
  }

  TEST_CASE("drift enters the threshold") {
    const auto drift = DriftSpec::inverse_log(1.0);
    const double n = 1e6;
    CHECK(wiener_threshold(n, 0.9, drift) ==
          doctest::Approx(std::sqrt(std::numbers::pi * std::numbers::pi / (8 * std::log(n))) *
                          (0.9 + 1.0 / std::log(n))));
    CHECK_THROWS_AS(wiener_term_prob(100, 0.1, DriftSpec::inverse_log(-5.0)), DomainError);
    CHECK_THROWS_AS(wiener_term_prob(0, 1.0, DriftSpec::none()), DomainError);
  }
}
