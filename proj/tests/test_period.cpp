// Distance classification: potential polynomial, metric asymptote, verdicts
// and witnesses.

#include "lmhs/period.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace lmhs;

TEST_CASE("potential asymptote degrees and leading coefficients") {
  // N = 0: constant polynomial.
  {
    PeriodGerm g = jordan_block_germ(0);
    auto p = potential_asymptote(g);
    CHECK(p.degree == 0);
    CHECK(p.p.poly.size() == 1);
    CHECK(p.leading == ExactScalar(1));
  }
  // Size-2 Jordan block: linear, leading collapses to the real normal form.
  {
    PeriodGerm g = jordan_block_germ(1);
    auto p = potential_asymptote(g);
    CHECK(p.degree == 1);
    auto [mon, c] = p.p.leading();
    CHECK(mon.y == 1);
    CHECK(c == ExactScalar(1));  // (2i)^1 * 1/(2i) = 1
    CHECK(p.p.tail);
  }
  // d = 2 block: degree two.
  {
    PeriodGerm g = jordan_block_germ(2);
    auto p = potential_asymptote(g);
    CHECK(p.degree == 2);
    auto [mon, c] = p.p.leading();
    CHECK(mon.y == 2);
    CHECK(c == ExactScalar(1));
  }
}

TEST_CASE("expansion identity: leading = (2i)^d / d! Qtilde(N^d a0, conj a0)") {
  for (std::size_t d = 0; d <= 3; ++d) {
    PeriodGerm g = jordan_block_germ(d);
    auto p = potential_asymptote(g);
    CHECK(p.degree == d);
    ExactScalar expect = ExactScalar::one();
    Rational fact = 1;
    for (std::size_t k = 1; k <= d; ++k) {
      expect = expect * ExactScalar(GaussianRational(0, 2));
      fact *= Rational(static_cast<long>(k));
    }
    ExactMatrix a0bar = g.real.apply(g.a0);
    ExactScalar val = ((matrix_power(g.N.N, d) * g.a0).transpose() * g.qtilde * a0bar).at(0, 0);
    expect = expect * ExactScalar(Rational(1) / fact) * val;
    CHECK(p.leading == expect);
    CHECK_FALSE(p.leading.is_zero());
    // degree matches the distance index
    CHECK(p.degree == distance_index(g.a0, g.N));
  }
}

TEST_CASE("metric asymptote is d/y^2 plus tail") {
  for (std::size_t d = 1; d <= 3; ++d) {
    PeriodGerm g = jordan_block_germ(d);
    auto p = potential_asymptote(g);
    AsymptoticScalar m = metric_asymptote(p);
    REQUIRE(m.poly.size() == 1);
    auto [mon, c] = m.leading();
    CHECK(mon.y == -2);
    CHECK(mon.x == 0);
    CHECK(c == ExactScalar(static_cast<long>(d)));
    CHECK(m.tail);
    CHECK(eventual_sign(m) == EventualSign::Positive);
  }
  PeriodGerm g0 = jordan_block_germ(0);
  AsymptoticScalar m0 = metric_asymptote(potential_asymptote(g0));
  CHECK(m0.poly_zero());
  CHECK(m0.tail);
}

TEST_CASE("distance classification") {
  CHECK(classify_distance(1, std::nullopt) == Distance::Infinite);
  CHECK(classify_distance(3, true) == Distance::Infinite);  // monotone in d
  CHECK(classify_distance(0, true) == Distance::Finite);
  CHECK(classify_distance(0, std::nullopt) == Distance::FiniteConditional);
  CHECK(classify_distance(0, false) == Distance::FiniteConditional);
}

TEST_CASE("length witnesses") {
  auto w1 = length_witness(1, Distance::Infinite);
  CHECK(w1.divergent);
  CHECK(w1.integral.find("= inf") != std::string::npos);
  auto w0 = length_witness(0, Distance::Finite);
  CHECK_FALSE(w0.divergent);
  CHECK_FALSE(w0.conditional);
  CHECK(w0.integral.find("< inf") != std::string::npos);
  auto wc = length_witness(0, Distance::FiniteConditional);
  CHECK(wc.conditional);
  CHECK(wc.integral.find("conditional") != std::string::npos);
}

TEST_CASE("error paths") {
  PeriodGerm g = jordan_block_germ(1);
  g.a0 = ExactMatrix(2, 1);
  CHECK_THROWS_AS(potential_asymptote(g), Error);

  PeriodGerm g2 = jordan_block_germ(1);
  g2.qtilde = ExactMatrix(2, 2);  // degenerate: leading coefficient vanishes
  CHECK_THROWS_AS(potential_asymptote(g2), Error);
}
