#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "smalldev/dichotomy.hpp"
#include "smalldev/errors.hpp"

using namespace smalldev;
using namespace smalldev::dichotomy;

TEST_SUITE("dichotomy") {
  TEST_CASE("integral-test verdicts") {
    const WeightParams params(2, 0);
    CHECK(classify_psi({1.5, 0, 0}, params) == Verdict::converges);
    CHECK(classify_psi({1.0, 2.0, 0}, params) == Verdict::converges);
    CHECK(classify_psi({1.0, 1.0, 0}, params) == Verdict::diverges);
    CHECK(classify_psi({1.0, 0.0, 5.0}, params) == Verdict::diverges);
    CHECK(classify_psi({0.99, 100.0, 0}, params) == Verdict::diverges);
    CHECK(classify_psi({1.0 + 1e-15, 1.0, 0}, params) == Verdict::diverges);
    // The log weight shifts the borderline: b - a must exceed 1.
    CHECK(classify_psi({1.0, 2.0, 0}, WeightParams(2, 1)) == Verdict::diverges);
    CHECK(classify_psi({1.0, 2.5, 0}, WeightParams(2, 1)) == Verdict::converges);
    CHECK(classify_psi({2.0, 0, 0}, WeightParams(3, 0)) == Verdict::diverges);
    CHECK(to_string(Verdict::converges) == "Converges");
    CHECK(to_string(Verdict::diverges) == "Diverges");
  }

  TEST_CASE("verdict is monotone in c and b") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> r_dist(1.1, 4.0), a_dist(-0.9, 3.0),
        c_dist(0.1, 5.0), b_dist(-3.0, 6.0);
    for (int i = 0; i < 2000; ++i) {
      const WeightParams p(r_dist(gen), a_dist(gen));
      const PsiSpec psi{c_dist(gen), b_dist(gen), 0.0};
      if (classify_psi(psi, p) == Verdict::converges) {
        CHECK(classify_psi({psi.c + 0.1, psi.b, 0}, p) == Verdict::converges);
        CHECK(classify_psi({psi.c, psi.b + 0.1, 0}, p) == Verdict::converges);
      }
    }
  }

  TEST_CASE("invalid psi") {
    const WeightParams params(2, 0);
    CHECK_THROWS_AS(classify_psi({-1.0, 0, 0}, params), DomainError);
    CHECK_THROWS_AS(classify_psi({0.0, 0.0, 0.0}, params), DomainError);
    CHECK_THROWS_AS(classify_psi({0.0, -1.0, 5.0}, params), DomainError);
    CHECK(PsiSpec{0.0, 0.0, 1.0}.valid());
    CHECK(PsiSpec{0.0, 1.0, -1.0}.valid());
    CHECK_FALSE(PsiSpec{NAN, 0.0, 1.0}.valid());
  }

  TEST_CASE("convergent table against exact zeta sums") {
    const auto t = partial_sum_diagnostic({1.5, 0, 0}, WeightParams(2, 0), 1000000,
                                          SummandMode::exponential);
    REQUIRE(t.rows.size() == 6);
    std::int64_t expected_cutoff = 10;
    for (const auto& row : t.rows) {
      CHECK(row.cutoff == expected_cutoff);
      expected_cutoff *= 10;
    }
    // 2 e^{-1.5} + zeta(1.5) - 1 - 2^{-1.5} - zeta(1.5, 10^6 + 1), from mpmath.
    CHECK(t.rows.back().partial_sum == doctest::Approx(1.70308227888907411).epsilon(1e-13));
    CHECK(t.rows.back().increment == doctest::Approx(0.00432454000898786).epsilon(1e-10));
    CHECK(t.trend == Trend::geometric_decay);
  }

  TEST_CASE("divergent table grows by a constant per decade") {
    const auto t = partial_sum_diagnostic({1.0, 0, 0}, WeightParams(2, 0), 1000000,
                                          SummandMode::exponential);
    // 2/e + H(10^6) - 3/2
    CHECK(t.rows.back().partial_sum == doctest::Approx(13.6284856052086083).epsilon(1e-13));
    CHECK(t.rows.back().increment == doctest::Approx(std::log(10.0)).epsilon(1e-5));
    CHECK(t.trend == Trend::no_decay);
  }

  TEST_CASE("both summand modes tell the same story") {
    const WeightParams params(2, 0);
    for (const PsiSpec psi : {PsiSpec{1.5, 0, 0}, PsiSpec{1.0, 2.0, 0}, PsiSpec{1.0, 1.0, 0},
                              PsiSpec{1.0, 0.0, 0}, PsiSpec{0.7, 0.0, 0}}) {
      const auto e = partial_sum_diagnostic(psi, params, 1000000, SummandMode::exponential);
      const auto w = partial_sum_diagnostic(psi, params, 1000000, SummandMode::wiener_prob);
      CAPTURE(psi.c);
      CAPTURE(psi.b);
      CHECK(e.trend == w.trend);
      // The two summands differ by a bounded factor.
      for (std::size_t i = 0; i < e.rows.size(); ++i) {
        const double ratio = w.rows[i].increment / e.rows[i].increment;
        CHECK(ratio > 0.5);
        CHECK(ratio < 4.0 / 3.14159);
      }
    }
  }

  TEST_CASE("tabulated psi matches the closed form") {
    const PsiSpec psi{1.2, 0.5, 0.3};
    const WeightParams params(2.5, 0.5);
    std::vector<double> values(5000);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = psi(static_cast<double>(i + 1));
    const auto a = partial_sum_diagnostic(psi, params, 5000, SummandMode::wiener_prob);
    const auto b = partial_sum_diagnostic_tabulated(values, params, SummandMode::wiener_prob);
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.rows.back().cutoff == 5000);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].partial_sum == b.rows[i].partial_sum);
  }

  TEST_CASE("diagnostic preconditions") {
    const WeightParams params(2, 0);
    CHECK_THROWS_AS(partial_sum_diagnostic({1.0, 0, 0}, params, 5, SummandMode::exponential),
                    InvalidParameter);
    // psi(1) = 1 - 5 < 0
    CHECK_THROWS_AS(partial_sum_diagnostic({1.0, 0, -5.0}, params, 100, SummandMode::exponential),
                    DomainError);
  }

  TEST_CASE("trend classification thresholds") {
    std::vector<DiagnosticRow> rows{{10, 1.0, 1.0}, {100, 1.4, 0.4}, {1000, 1.5, 0.1}};
    CHECK(classify_trend(rows) == Trend::geometric_decay);
    rows[2].increment = 0.3;
    CHECK(classify_trend(rows) == Trend::slow_decay);
    rows[2].increment = 0.4;
    CHECK(classify_trend(rows) == Trend::no_decay);
    // A trailing partial decade is not compared.
    rows.push_back({1500, 1.6, 0.0001});
    CHECK(classify_trend(rows) == Trend::no_decay);
  }
}
