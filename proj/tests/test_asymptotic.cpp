// The tail-flag calculus: ring laws, eventual signs, positivity of
// asymptotic hermitian matrices, and the Schur-complement route.

#include "lmhs/asymptotic.hpp"
#include "lmhs/hermitian.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace lmhs;

namespace {

std::mt19937 rng(1234);

AsymptoticScalar random_scalar(bool allow_tail = true) {
  std::uniform_int_distribution<long> dc(-3, 3);
  std::uniform_int_distribution<int> dd(0, 2), dt(0, 3);
  AsymptoticScalar s;
  for (int terms = dd(rng); terms >= 0; --terms)
    s.add_term({dd(rng), dd(rng)}, ExactScalar(GaussianRational(dc(rng), dc(rng))));
  if (allow_tail && dt(rng) == 0) s.tail = true;
  return s;
}

// Substitute exact rational values for x and y (tail-free scalars only).
ExactScalar substitute(const AsymptoticScalar& s, const Rational& xval, const Rational& yval) {
  ExactScalar acc;
  for (auto& [m, c] : s.poly) {
    Rational v = 1;
    for (int i = 0; i < m.x; ++i) v *= xval;
    for (int i = 0; i < m.y; ++i) v *= yval;
    for (int i = 0; i > m.y; --i) v /= yval;
    acc += c * ExactScalar(v);
  }
  return acc;
}

AsymptoticHermitian hermitize(std::size_t n, const std::vector<AsymptoticScalar>& entries) {
  AsymptoticHermitian M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M.at(i, j) = entries[i * n + j];
  return M;
}

}  // namespace

TEST_CASE("ring laws on randomized scalars") {
  for (int t = 0; t < 50; ++t) {
    AsymptoticScalar a = random_scalar(), b = random_scalar(), c = random_scalar();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(a + b == b + a);
  }
}

TEST_CASE("tail absorption") {
  AsymptoticScalar t = AsymptoticScalar::pure_tail();
  AsymptoticScalar y2 = AsymptoticScalar::y(2);
  // y^m * h stays in h: multiplying a tail-only scalar keeps poly = 0.
  CHECK((t * y2).poly_zero());
  CHECK((t * y2).tail);
  // tail times exact zero vanishes
  CHECK((t * AsymptoticScalar(ExactScalar::zero())).is_zero());
  // poly times poly never enters the tail
  CHECK_FALSE((y2 * y2).tail);
}

TEST_CASE("eventual_sign examples") {
  // d/y^2 + tail with d = 1 -> Positive
  AsymptoticScalar s = AsymptoticScalar::monomial(ExactScalar(1), 0, -2, true);
  CHECK(eventual_sign(s) == EventualSign::Positive);
  CHECK(eventual_sign(AsymptoticScalar::pure_tail()) == EventualSign::Indeterminate);
  // (2 i y)(-2 i y) = 4 y^2 -> Positive
  AsymptoticScalar a = AsymptoticScalar::monomial(ExactScalar(GaussianRational(0, 2)), 0, 1);
  CHECK(eventual_sign(a * a.conj()) == EventualSign::Positive);
  // x-dependence blocks the decision
  AsymptoticScalar withx = AsymptoticScalar::monomial(ExactScalar(1), 1, 0);
  CHECK(eventual_sign(withx) == EventualSign::Indeterminate);
  CHECK(eventual_sign(AsymptoticScalar(ExactScalar::zero())) == EventualSign::Zero);
  CHECK(eventual_sign(AsymptoticScalar(ExactScalar(-3))) == EventualSign::Negative);
}

TEST_CASE("s conj(s) is never eventually negative") {
  for (int t = 0; t < 60; ++t) {
    AsymptoticScalar s = random_scalar();
    EventualSign sg = eventual_sign(s * s.conj());
    CHECK(sg != EventualSign::Negative);
  }
}

TEST_CASE("eventually_positive_definite examples") {
  AsymptoticScalar twoy = AsymptoticScalar::y();
  twoy = twoy + twoy;
  twoy.tail = true;
  AsymptoticHermitian M =
      hermitize(2, {twoy, AsymptoticScalar(1), AsymptoticScalar(1), AsymptoticScalar(3)});
  CHECK(eventually_positive_definite(M));  // minors 2y, 6y - 1 up to tail

  AsymptoticHermitian bad = hermitize(
      2, {AsymptoticScalar::pure_tail(), AsymptoticScalar(0), AsymptoticScalar(0), AsymptoticScalar(1)});
  CHECK_THROWS_AS(eventually_positive_definite(bad), Error);

  AsymptoticHermitian cpd =
      hermitize(2, {AsymptoticScalar(2), AsymptoticScalar(1), AsymptoticScalar(1), AsymptoticScalar(2)});
  CHECK(eventually_positive_definite(cpd));

  AsymptoticHermitian neg =
      hermitize(2, {AsymptoticScalar(1), AsymptoticScalar(0), AsymptoticScalar(0), AsymptoticScalar(-1)});
  CHECK_FALSE(eventually_positive_definite(neg));
}

TEST_CASE("PD agrees with exact numeric evaluation at y = 10^6 for tail-free matrices") {
  std::uniform_int_distribution<long> dc(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 3;
    // Random hermitian with y-linear diagonal-dominant-ish entries.
    AsymptoticHermitian M(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        AsymptoticScalar e;
        e.add_term({0, 0}, ExactScalar(GaussianRational(dc(rng), i == j ? 0 : dc(rng))));
        if (i == j) e.add_term({0, 1}, ExactScalar(dc(rng)));
        M.at(i, j) = e;
        M.at(j, i) = e.conj();
      }
    bool pd;
    try {
      pd = eventually_positive_definite(M);
    } catch (const Error&) {
      continue;
    }
    ExactMatrix G(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        G.at(i, j) = substitute(M.at(i, j), Rational(0), Rational(1000000));
    bool numeric;
    try {
      numeric = positive_definite({G});
    } catch (const Error&) {
      continue;
    }
    CHECK(pd == numeric);
  }
}

TEST_CASE("eventual signature") {
  AsymptoticScalar y2 = AsymptoticScalar::y();
  y2 = y2 + y2;
  AsymptoticHermitian M =
      hermitize(2, {y2, AsymptoticScalar(2), AsymptoticScalar(2), AsymptoticScalar(ExactScalar::zero(), true)});
  // [[2y, 2],[2, h]] has eventual determinant -4: signature (1,1).
  auto sig = eventual_signature(M);
  CHECK(sig.first == 1);
  CHECK(sig.second == 1);
}

TEST_CASE("schur_reduce examples") {
  // C = B = 0 -> returns A.
  SchurBlocks blk;
  blk.h = 2;
  blk.m = 1;
  blk.A = hermitize(2, {AsymptoticScalar(1), AsymptoticScalar(0), AsymptoticScalar(0), AsymptoticScalar(1)});
  blk.B.assign(2, AsymptoticScalar(ExactScalar::zero()));
  blk.C.assign(2, AsymptoticScalar(ExactScalar::zero()));
  AsymptoticScalar d0 = AsymptoticScalar::y();
  d0 = d0 + d0;
  blk.D = hermitize(1, {d0});
  auto red = schur_reduce(blk);
  CHECK(red.at(0, 0) == blk.A.at(0, 0));
  CHECK(red.at(1, 1) == blk.A.at(1, 1));
  CHECK(schur_route_positive_definite(blk));

  // A = I, D = 2y I, B = C^T = ones -> limit I with tail flags.
  SchurBlocks blk2 = blk;
  blk2.B.assign(2, AsymptoticScalar(1));
  blk2.C.assign(2, AsymptoticScalar(1));
  auto red2 = schur_reduce(blk2);
  CHECK(red2.at(0, 0).poly == blk.A.at(0, 0).poly);
  CHECK(red2.at(0, 0).tail);
  CHECK(schur_route_positive_definite(blk2));

  // Singular leading block rejected.
  SchurBlocks blk3 = blk2;
  blk3.D = hermitize(1, {AsymptoticScalar(1)});
  CHECK_THROWS_AS(schur_reduce(blk3), Error);

  // Unbounded coupling rejected.
  SchurBlocks blk4 = blk2;
  blk4.B.assign(2, AsymptoticScalar::y());
  CHECK_THROWS_AS(schur_reduce(blk4), Error);
}

TEST_CASE("schur and minor verdicts agree on paper-shaped matrices") {
  std::uniform_int_distribution<long> dc(-2, 2);
  int decided = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t h = 2, m = 2;
    SchurBlocks blk;
    blk.h = h;
    blk.m = m;
    // Random hermitian constant A.
    ExactMatrix A0(h, h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) A0.at(i, j) = ExactScalar(GaussianRational(dc(rng), dc(rng)));
    A0 = A0 + A0.conj_transpose();
    blk.A = AsymptoticHermitian(h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        blk.A.at(i, j) = AsymptoticScalar(A0.at(i, j));
        blk.A.at(i, j).tail = true;
      }
    // Random SPD Q via L L^T with unit diagonal L.
    ExactMatrix L = ExactMatrix::identity(m);
    for (std::size_t i = 1; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) L.at(i, j) = ExactScalar(dc(rng));
    ExactMatrix Q = L * L.transpose();
    blk.D = AsymptoticHermitian(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        AsymptoticScalar e;
        e.add_term({0, 1}, ExactScalar(2) * Q.at(i, j));
        e.add_term({0, 0}, ExactScalar(GaussianRational(dc(rng), i == j ? 0 : dc(rng))));
        if (i < j) {
          blk.D.at(i, j) = e;
          blk.D.at(j, i) = e.conj();
        } else if (i == j) {
          e.poly[{0, 0}] = ExactScalar(dc(rng));
          if (e.poly[{0, 0}].is_zero()) e.poly.erase({0, 0});
          e.tail = true;
          blk.D.at(i, i) = e;
        }
      }
    for (std::size_t i = 0; i < m; ++i) blk.D.at(i, i).tail = true;
    // Bounded couplings, conjugate-symmetric.
    blk.B.assign(h * m, AsymptoticScalar(ExactScalar::zero()));
    blk.C.assign(m * h, AsymptoticScalar(ExactScalar::zero()));
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        ExactScalar v(GaussianRational(dc(rng), dc(rng)));
        blk.B[i * m + j] = AsymptoticScalar(v, true);
        blk.C[j * h + i] = AsymptoticScalar(v.conj(), true);
      }
    bool schur_v, direct_v;
    try {
      schur_v = schur_route_positive_definite(blk);
      direct_v = eventually_positive_definite(assemble_blocks(blk));
    } catch (const Error& e) {
      if (e.kind() == Err::NotDecidable) continue;
      throw;
    }
    CHECK(schur_v == direct_v);
    ++decided;
  }
  CHECK(decided > 10);
}
