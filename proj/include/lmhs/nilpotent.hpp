// Nilpotent operators: log of a unipotent matrix, the monodromy weight
// filtration, the graded-isomorphism hypothesis check, and the distance
// index d = min{ k : N^{k+1} a0 = 0 }.
//
// The filtration is built by the standard inductive construction: with l the
// largest power with N^l != 0, the extreme steps are ker N^l and im N^l and
// the middle is the filtration of the operator induced on ker N^l / im N^l.

#pragma once

#include "lmhs/filtration.hpp"

#include <map>
#include <vector>

namespace lmhs {

struct NilpotentOp {
  ExactMatrix N;
  int center = 0;

  std::size_t dim() const { return N.rows; }
};

inline ExactMatrix matrix_power(const ExactMatrix& m, std::size_t k) {
  ExactMatrix r = ExactMatrix::identity(m.rows);
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

inline bool is_nilpotent(const ExactMatrix& N) {
  return matrix_power(N, N.rows).is_zero();
}

// exp of a nilpotent matrix (finite series, exact).
inline ExactMatrix exp_nilpotent(const ExactMatrix& N) {
  if (!is_nilpotent(N)) fail(Err::Shape, "exp_nilpotent: matrix is not nilpotent");
  ExactMatrix r = ExactMatrix::identity(N.rows);
  ExactMatrix term = ExactMatrix::identity(N.rows);
  Rational fact = 1;
  for (std::size_t k = 1; k <= N.rows; ++k) {
    term = term * N;
    if (term.is_zero()) break;
    fact *= Rational(static_cast<long>(k));
    r = r + ExactScalar(Rational(1) / fact) * term;
  }
  return r;
}

// N := log T = -sum (I-T)^k / k for unipotent T; exp(N) = T exactly.
inline NilpotentOp log_of_unipotent(const ExactMatrix& T, int center = 0) {
  if (T.rows != T.cols) fail(Err::Shape, "log of non-square matrix");
  ExactMatrix U = ExactMatrix::identity(T.rows) - T;
  if (!is_nilpotent(U)) fail(Err::NotUnipotent, "matrix is not unipotent");
  ExactMatrix N(T.rows, T.rows);
  ExactMatrix term = ExactMatrix::identity(T.rows);
  for (std::size_t k = 1; k <= T.rows; ++k) {
    term = term * U;
    if (term.is_zero()) break;
    N = N - ExactScalar(Rational(1) / Rational(static_cast<long>(k))) * term;
  }
  return {N, center};
}

struct WeightFiltrationResult {
  Filtration filtration;            // increasing, centered at N.center
  std::vector<std::size_t> jordan;  // multiset of Jordan block sizes, descending
};

namespace detail {

// Weight filtration centered at 0 in ambient coordinates.
inline std::map<int, ExactMatrix> weight_centered(const ExactMatrix& N) {
  std::size_t n = N.rows;
  std::map<int, ExactMatrix> W;
  if (n == 0) {
    W[0] = ExactMatrix(0, 0);
    return W;
  }
  std::size_t l = 0;
  ExactMatrix P = ExactMatrix::identity(n);
  while (!(P * N).is_zero()) {
    P = P * N;
    ++l;
  }
  if (l == 0) {
    W[0] = ExactMatrix::identity(n);
    W[-1] = ExactMatrix(n, 0);
    return W;
  }
  ExactMatrix Nl = P;  // N^l
  ExactMatrix kerNl = kernel(Nl);
  ExactMatrix imNl = image(Nl);
  // Induced operator on ker N^l / im N^l.
  QuotientMap q = quotient_map(kerNl, imNl);
  ExactMatrix Nreps = N * q.reps;
  ExactMatrix Ncoords = solve(kerNl, Nreps).value();
  ExactMatrix Nind = q.projection * Ncoords;
  auto Wmid = weight_centered(Nind);
  for (int k = -static_cast<int>(l) + 1; k <= static_cast<int>(l) - 1; ++k) {
    ExactMatrix mid = Wmid.count(k) ? Wmid[k]
                      : (k < Wmid.begin()->first ? ExactMatrix(q.reps.cols, 0)
                                                 : Wmid.rbegin()->second);
    // Preimage in ker N^l of the middle filtration step.
    ExactMatrix lift = q.reps.cols ? kerNl * (q.section * mid) : ExactMatrix(n, 0);
    W[k] = subspace_sum(lift, imNl);
  }
  W[static_cast<int>(l)] = ExactMatrix::identity(n);
  W[static_cast<int>(l) - 1] = kerNl;
  W[-static_cast<int>(l)] = imNl;
  W[-static_cast<int>(l) - 1] = ExactMatrix(n, 0);
  return W;
}

}  // namespace detail

inline std::vector<std::size_t> jordan_profile(const ExactMatrix& N) {
  // Block-count bookkeeping from ranks of powers.
  std::size_t n = N.rows;
  std::vector<std::size_t> r{n};
  ExactMatrix P = ExactMatrix::identity(n);
  while (true) {
    P = P * N;
    std::size_t rk = rank(P);
    r.push_back(rk);
    if (rk == 0) break;
  }
  std::vector<std::size_t> profile;
  for (std::size_t s = r.size() - 1; s >= 1; --s) {
    // # blocks of size exactly s = r[s-1] - 2 r[s] + r[s+1].
    std::size_t rp = r[s - 1], rc = r[s], rn = (s + 1 < r.size()) ? r[s + 1] : 0;
    std::size_t count = rp + rn - 2 * rc;
    for (std::size_t i = 0; i < count; ++i) profile.push_back(s);
  }
  std::sort(profile.rbegin(), profile.rend());
  return profile;
}

inline WeightFiltrationResult weight_filtration(const NilpotentOp& op) {
  if (!is_nilpotent(op.N)) fail(Err::Shape, "weight_filtration: not nilpotent");
  auto W0 = detail::weight_centered(op.N);
  WeightFiltrationResult res;
  res.filtration.ambient = op.dim();
  res.filtration.dir = Direction::Increasing;
  for (auto& [k, b] : W0) res.filtration.steps[k + op.center] = column_echelon(b);
  res.jordan = jordan_profile(op.N);
  return res;
}

// True iff every induced N^k : Gr_{n+k} -> Gr_{n-k} is bijective.
inline bool check_hypothesis_iso(const NilpotentOp& op, const Filtration& W) {
  if (W.ambient != op.dim()) fail(Err::Shape, "check_hypothesis_iso dimension mismatch");
  if (W.dir != Direction::Increasing) fail(Err::Shape, "W must be increasing");
  int n = op.center;
  int span = std::max(std::abs(W.highest() - n), std::abs(W.lowest() - n)) + 1;
  for (int k = 0; k <= span; ++k) {
    QuotientMap hi = quotient_map(W.at(n + k), W.at(n + k - 1));
    QuotientMap lo = quotient_map(W.at(n - k), W.at(n - k - 1));
    if (hi.reps.cols != lo.reps.cols) return false;
    if (hi.reps.cols == 0) continue;
    ExactMatrix Nk = matrix_power(op.N, static_cast<std::size_t>(k));
    ExactMatrix img = Nk * hi.reps;
    auto coords = solve(W.at(n - k), img);
    if (!coords) return false;  // N^k does not even map W_{n+k} into W_{n-k}
    ExactMatrix induced = lo.projection * *coords;
    if (rank(induced) != hi.reps.cols) return false;
  }
  return true;
}

// d = min{ k : N^{k+1} a0 = 0 } for a0 != 0.
inline std::size_t distance_index(const ExactMatrix& a0, const NilpotentOp& op) {
  if (a0.rows != op.dim() || a0.cols != 1) fail(Err::Shape, "distance_index: bad vector shape");
  if (a0.is_zero()) fail(Err::ZeroVector, "distance_index: a0 = 0");
  std::size_t d = 0;
  ExactMatrix v = op.N * a0;
  while (!v.is_zero()) {
    ++d;
    v = op.N * v;
    if (d > op.dim()) fail(Err::Shape, "distance_index: operator not nilpotent");
  }
  return d;
}

}  // namespace lmhs
