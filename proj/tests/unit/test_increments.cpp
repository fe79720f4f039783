#include <doctest.h>

#include <cmath>

#include "smalldev/errors.hpp"
#include "smalldev/increments.hpp"
#include "smalldev/rng.hpp"

using namespace smalldev;

TEST_SUITE("increments") {
  TEST_CASE("law names round trip") {
    for (auto kind : {LawKind::rademacher, LawKind::gaussian, LawKind::uniform_centered,
                      LawKind::exponential_centered, LawKind::symmetric_pareto}) {
      CHECK(parse_law_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_law_kind("cauchy"), InvalidParameter);
  }

  TEST_CASE("construction checks") {
    CHECK_THROWS_AS(IncrementLaw::make(LawKind::gaussian, 0.0), InvalidParameter);
    CHECK_THROWS_AS(IncrementLaw::make(LawKind::gaussian, 1.0, -0.1), InvalidParameter);
    CHECK_THROWS_AS(IncrementLaw::make(LawKind::symmetric_pareto, 1.0, std::nullopt, 2.0),
                    InvalidParameter);
    CHECK_THROWS_AS(IncrementLaw::make(LawKind::symmetric_pareto, 1.0, 0.6, 2.5),
                    InvalidParameter);
    CHECK(IncrementLaw::make(LawKind::symmetric_pareto, 1.0, std::nullopt, 3.0).moment_eps() ==
          0.5);
    CHECK(IncrementLaw::make(LawKind::gaussian).moment_eps() == 0.5);
    CHECK(IncrementLaw::make(LawKind::rademacher).max_abs_unit_increment() == 1.0);
    CHECK(std::isinf(IncrementLaw::make(LawKind::gaussian).max_abs_unit_increment()));
  }

  TEST_CASE("every law is standardized") {
    for (auto kind : {LawKind::rademacher, LawKind::gaussian, LawKind::uniform_centered,
                      LawKind::exponential_centered, LawKind::symmetric_pareto}) {
      const auto law = IncrementLaw::make(kind, 1.0, std::nullopt, 4.5);
      rng::RandomStream s(99, static_cast<std::uint64_t>(kind));
      const int n = 400000;
      double m1 = 0.0, m2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = law.draw_unit(s);
        m1 += x;
        m2 += x * x;
        if (std::isfinite(law.max_abs_unit_increment())) {
          REQUIRE(std::abs(x) <= law.max_abs_unit_increment());
        }
      }
      CAPTURE(to_string(kind));
      CHECK(std::abs(m1 / n) < 0.01);
      CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.03));
    }
  }
}
