// Exact hermitian forms and the positivity decision.
//
// Positivity is decided by leading principal minors; an independent LDL*
// factorization over the same exact arithmetic cross-checks every verdict.
// No tolerances exist anywhere: a minor either is positive or it is not.

#pragma once

#include "lmhs/matrix.hpp"

namespace lmhs {

struct HermitianForm {
  ExactMatrix gram;

  bool is_hermitian() const { return gram == gram.conj_transpose(); }
};

namespace detail {

// Exact LDL* pivots of a hermitian matrix; nullopt if a zero pivot occurs
// (the matrix is then not positive definite, or the verdict falls to minors).
inline std::optional<std::vector<ExactScalar>> ldl_pivots(const ExactMatrix& g) {
  // Works on the lower triangle only: w(i,j) for j <= i.
  std::size_t n = g.rows;
  ExactMatrix w = g;
  std::vector<ExactScalar> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = w.at(k, k);
    if (d[k].is_zero()) return std::nullopt;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (w.at(i, k).is_zero()) continue;
      ExactScalar f = w.at(i, k) / d[k];
      for (std::size_t j = k + 1; j <= i; ++j) {
        if (!w.at(j, k).is_zero()) w.at(i, j) -= f * w.at(j, k).conj();
      }
    }
  }
  return d;
}

}  // namespace detail

// True iff all leading principal minors are strictly positive.  Requires
// every minor to be i-free (NotDecidable otherwise).  LDL* pivots provide an
// independent exact cross-check of the same verdict.
inline bool positive_definite(const HermitianForm& form) {
  const ExactMatrix& g = form.gram;
  if (g.rows != g.cols) fail(Err::Shape, "positivity of non-square gram");
  if (!form.is_hermitian()) fail(Err::Shape, "gram is not hermitian");
  auto minors = leading_principal_minors(g);
  bool verdict = true;
  for (const auto& m : minors) {
    auto s = m.sign();
    if (!s) fail(Err::NotDecidable, "principal minor with nonzero imaginary part");
    if (*s <= 0) {
      verdict = false;
      break;
    }
  }
  auto piv = detail::ldl_pivots(g);
  bool ldl_verdict = false;
  if (piv) {
    ldl_verdict = true;
    for (const auto& p : *piv) {
      auto s = p.sign();
      if (!s) fail(Err::NotDecidable, "LDL pivot with nonzero imaginary part");
      if (*s <= 0) {
        ldl_verdict = false;
        break;
      }
    }
  }
  if (verdict != ldl_verdict)
    fail(Err::Consistency, "minor and LDL* positivity verdicts disagree");
  return verdict;
}

// Signature (positives, negatives) of a nondegenerate hermitian matrix via
// the sign changes of the minor sequence (Jacobi).  Requires all leading
// principal minors nonzero.
inline std::pair<std::size_t, std::size_t> signature(const HermitianForm& form) {
  const ExactMatrix& g = form.gram;
  if (!form.is_hermitian()) fail(Err::Shape, "gram is not hermitian");
  auto minors = leading_principal_minors(g);
  std::size_t neg = 0;
  int prev = 1;
  for (const auto& m : minors) {
    auto s = m.sign();
    if (!s) fail(Err::NotDecidable, "minor with nonzero imaginary part");
    if (*s == 0) fail(Err::NotDecidable, "zero leading principal minor");
    if (*s != prev) ++neg;
    prev = *s;
  }
  return {g.rows - neg, neg};
}

}  // namespace lmhs
