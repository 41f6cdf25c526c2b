// Dense exact matrices over ExactScalar and the linear algebra the rest of
// the library is built on: canonical reduced column echelon bases, kernels,
// images, subspace lattice operations, solving, and fraction-free minors.
//
// All subspace bases returned here are in reduced column echelon form, which
// is unique for a given column space.  Two runs on identical input therefore
// produce identical bases everywhere downstream.

#pragma once

#include "lmhs/exact.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace lmhs {

struct ExactMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<ExactScalar> a;  // row-major

  ExactMatrix() = default;
  ExactMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  ExactScalar& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const ExactScalar& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ExactScalar::one();
    return m;
  }
  static ExactMatrix zero(std::size_t r, std::size_t c) { return ExactMatrix(r, c); }

  bool is_zero() const {
    for (const auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }

  ExactMatrix transpose() const {
    ExactMatrix m(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
    return m;
  }
  ExactMatrix conj() const {
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = a[i].conj();
    return m;
  }
  ExactMatrix conj_transpose() const { return conj().transpose(); }

  ExactMatrix col(std::size_t j) const {
    ExactMatrix v(rows, 1);
    for (std::size_t i = 0; i < rows; ++i) v.at(i, 0) = at(i, j);
    return v;
  }

  // Glue columns of b to the right of *this.
  ExactMatrix hcat(const ExactMatrix& b) const {
    if (rows != b.rows) fail(Err::Shape, "hcat row mismatch");
    ExactMatrix m(rows, cols + b.cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
      for (std::size_t j = 0; j < b.cols; ++j) m.at(i, cols + j) = b.at(i, j);
    }
    return m;
  }
  ExactMatrix vcat(const ExactMatrix& b) const {
    if (cols != b.cols) fail(Err::Shape, "vcat col mismatch");
    ExactMatrix m(rows + b.rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < b.rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.at(rows + i, j) = b.at(i, j);
    return m;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols != b.rows) fail(Err::Shape, "matmul shape mismatch");
    ExactMatrix m(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        const ExactScalar& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols; ++j) {
          const ExactScalar& bkj = b.at(k, j);
          if (bkj.is_zero()) continue;
          m.at(i, j) += aik * bkj;
        }
      }
    return m;
  }
  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) fail(Err::Shape, "matadd shape mismatch");
    ExactMatrix m(a.rows, a.cols);
    for (std::size_t i = 0; i < a.a.size(); ++i) m.a[i] = a.a[i] + b.a[i];
    return m;
  }
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) fail(Err::Shape, "matsub shape mismatch");
    ExactMatrix m(a.rows, a.cols);
    for (std::size_t i = 0; i < a.a.size(); ++i) m.a[i] = a.a[i] - b.a[i];
    return m;
  }
  friend ExactMatrix operator*(const ExactScalar& s, const ExactMatrix& b) {
    ExactMatrix m(b.rows, b.cols);
    for (std::size_t i = 0; i < b.a.size(); ++i) m.a[i] = s * b.a[i];
    return m;
  }
  friend ExactMatrix operator-(const ExactMatrix& b) { return ExactScalar(-1) * b; }
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.a == b.a;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// Echelon machinery.  Internally we row-reduce; column-space bases come from
// reducing the transpose.

namespace detail {

// In-place reduced row echelon form.  Returns pivot column indices.
inline std::vector<std::size_t> rref(ExactMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t pcol = 0; pcol < m.cols && prow < m.rows; ++pcol) {
    std::size_t sel = prow;
    while (sel < m.rows && m.at(sel, pcol).is_zero()) ++sel;
    if (sel == m.rows) continue;
    if (sel != prow)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(prow, j));
    ExactScalar inv = ExactScalar::one() / m.at(prow, pcol);
    for (std::size_t j = pcol; j < m.cols; ++j) {
      if (!m.at(prow, j).is_zero()) m.at(prow, j) = m.at(prow, j) * inv;
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == prow) continue;
      const ExactScalar f = m.at(i, pcol);
      if (f.is_zero()) continue;
      for (std::size_t j = pcol; j < m.cols; ++j) {
        if (!m.at(prow, j).is_zero()) m.at(i, j) -= f * m.at(prow, j);
      }
    }
    pivots.push_back(pcol);
    ++prow;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(const ExactMatrix& m) {
  ExactMatrix t = m;
  return detail::rref(t).size();
}

namespace detail {
inline std::optional<std::vector<std::size_t>> echelon_pivot_rows(const ExactMatrix& A);
}

// Canonical basis of the column space: columns of the result are the nonzero
// rows of rref(m^T), transposed back.  Unique per subspace.
inline ExactMatrix image(const ExactMatrix& m) {
  if (m.cols && detail::echelon_pivot_rows(m)) return m;  // already canonical
  ExactMatrix t = m.transpose();
  auto piv = detail::rref(t);
  ExactMatrix out(m.rows, piv.size());
  for (std::size_t r = 0; r < piv.size(); ++r)
    for (std::size_t i = 0; i < m.rows; ++i) out.at(i, r) = t.at(r, i);
  return out;
}

inline ExactMatrix column_echelon(const ExactMatrix& m) { return image(m); }

// Canonical basis of the right kernel {x : m x = 0}.
inline ExactMatrix kernel(const ExactMatrix& m) {
  ExactMatrix t = m;
  auto piv = detail::rref(t);
  std::vector<bool> is_piv(m.cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols; ++j)
    if (!is_piv[j]) free_cols.push_back(j);
  ExactMatrix k(m.cols, free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    std::size_t jf = free_cols[f];
    k.at(jf, f) = ExactScalar::one();
    for (std::size_t r = 0; r < piv.size(); ++r) k.at(piv[r], f) = -t.at(r, jf);
  }
  return column_echelon(k);
}

namespace detail {

// Pivot rows of a reduced column-echelon basis: column j has its first
// nonzero entry equal to one at row r_j, r_j strictly increasing, and row
// r_j vanishes in every other column.  Such bases are ubiquitous here (all
// canonical subspace bases), and solving against them is just row
// extraction plus one verification product.
inline std::optional<std::vector<std::size_t>> echelon_pivot_rows(const ExactMatrix& A) {
  std::vector<std::size_t> piv(A.cols);
  std::size_t prev = 0;
  for (std::size_t j = 0; j < A.cols; ++j) {
    std::size_t r = (j == 0) ? 0 : prev + 1;
    while (r < A.rows && A.at(r, j).is_zero()) ++r;
    if (r == A.rows || A.at(r, j) != ExactScalar::one()) return std::nullopt;
    for (std::size_t jj = 0; jj < A.cols; ++jj)
      if (jj != j && !A.at(r, jj).is_zero()) return std::nullopt;
    piv[j] = r;
    prev = r;
  }
  return piv;
}

}  // namespace detail

// Least structure solve: X with A X = B, or nullopt when inconsistent.
inline std::optional<ExactMatrix> solve(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.rows != B.rows) fail(Err::Shape, "solve row mismatch");
  if (A.rows == A.cols && A == ExactMatrix::identity(A.rows)) return B;
  if (auto piv = detail::echelon_pivot_rows(A)) {
    ExactMatrix X(A.cols, B.cols);
    for (std::size_t j = 0; j < A.cols; ++j)
      for (std::size_t c = 0; c < B.cols; ++c) X.at(j, c) = B.at((*piv)[j], c);
    if (A * X == B) return X;
    return std::nullopt;
  }
  ExactMatrix aug = A.hcat(B);
  auto piv = detail::rref(aug);
  for (auto p : piv)
    if (p >= A.cols) return std::nullopt;  // pivot in the rhs block
  ExactMatrix X(A.cols, B.cols);
  for (std::size_t r = 0; r < piv.size(); ++r)
    for (std::size_t j = 0; j < B.cols; ++j) X.at(piv[r], j) = aug.at(r, A.cols + j);
  return X;
}

inline ExactMatrix inverse(const ExactMatrix& A) {
  if (A.rows != A.cols) fail(Err::Shape, "inverse of non-square");
  auto X = solve(A, ExactMatrix::identity(A.rows));
  if (!X || rank(A) != A.rows) fail(Err::SingularLeadingBlock, "singular matrix");
  return *X;
}

inline bool subspace_contains(const ExactMatrix& U, const ExactMatrix& v) {
  return solve(U, v).has_value();
}

inline bool subspace_leq(const ExactMatrix& U, const ExactMatrix& V) {
  return solve(V, U).has_value();
}

inline bool subspace_eq(const ExactMatrix& U, const ExactMatrix& V) {
  return rank(U) == rank(V) && subspace_leq(U, V);
}

inline ExactMatrix subspace_sum(const ExactMatrix& U, const ExactMatrix& V) {
  return image(U.hcat(V));
}

// Rows supporting a standard coordinate subspace (each column one entry = 1
// in a distinct row), or nullopt.
inline std::optional<std::vector<std::size_t>> coordinate_support(const ExactMatrix& V) {
  std::vector<std::size_t> rows;
  std::vector<bool> used(V.rows, false);
  for (std::size_t j = 0; j < V.cols; ++j) {
    std::size_t found = V.rows;
    for (std::size_t i = 0; i < V.rows; ++i) {
      if (V.at(i, j).is_zero()) continue;
      if (found != V.rows || V.at(i, j) != ExactScalar::one()) return std::nullopt;
      found = i;
    }
    if (found == V.rows || used[found]) return std::nullopt;
    used[found] = true;
    rows.push_back(found);
  }
  return rows;
}

// U cap V: solve U x = V y, i.e. kernel of [U | -V].  When one side is a
// coordinate subspace the intersection reduces to a kernel on the
// complementary rows, which is much cheaper.
inline ExactMatrix subspace_intersect(const ExactMatrix& U, const ExactMatrix& V) {
  if (U.rows != V.rows) fail(Err::Shape, "intersect ambient mismatch");
  if (U.cols == 0 || V.cols == 0) return ExactMatrix(U.rows, 0);
  if (U.cols == U.rows && U == ExactMatrix::identity(U.rows)) return image(V);
  if (V.cols == V.rows && V == ExactMatrix::identity(V.rows)) return image(U);
  const ExactMatrix* A = &U;
  const ExactMatrix* B = &V;
  auto support = coordinate_support(*B);
  if (!support) {
    support = coordinate_support(*A);
    std::swap(A, B);
  }
  if (support) {
    // A cap span(e_S) = image(A * ker(rows of A outside S)).
    std::vector<bool> in(A->rows, false);
    for (auto r : *support) in[r] = true;
    std::size_t out_rows = A->rows - support->size();
    ExactMatrix proj(out_rows, A->cols);
    std::size_t r = 0;
    for (std::size_t i = 0; i < A->rows; ++i) {
      if (in[i]) continue;
      for (std::size_t j = 0; j < A->cols; ++j) proj.at(r, j) = A->at(i, j);
      ++r;
    }
    ExactMatrix k = kernel(proj);
    return image(*A * k);
  }
  ExactMatrix k = kernel(U.hcat(-V));
  ExactMatrix xs(U.cols, k.cols);
  for (std::size_t i = 0; i < U.cols; ++i)
    for (std::size_t j = 0; j < k.cols; ++j) xs.at(i, j) = k.at(i, j);
  return image(U * xs);
}

// Quotient V/U for U <= V, both given by bases in ambient coordinates.
// reps: ambient-coordinate representatives of a basis of V/U (canonical);
// projection: matrix from V-basis coordinates onto quotient coordinates with
// kernel exactly the U-coordinates; section: quotient -> V-basis coordinates.
struct QuotientMap {
  ExactMatrix reps;
  ExactMatrix projection;
  ExactMatrix section;
};

inline QuotientMap quotient_map(const ExactMatrix& V, const ExactMatrix& U) {
  if (!subspace_leq(U, V)) fail(Err::Containment, "quotient: U not contained in V");
  // Work in V-coordinates.
  ExactMatrix Uc = solve(V, U).value();           // dim V x dim U
  ExactMatrix Ucan = column_echelon(Uc);          // canonical in V-coords
  // Choose complement: coordinates not used as pivot rows of Ucan.
  ExactMatrix t = Ucan.transpose();
  auto piv = detail::rref(t);
  std::vector<bool> is_piv(V.cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> comp;
  for (std::size_t i = 0; i < V.cols; ++i)
    if (!is_piv[i]) comp.push_back(i);
  QuotientMap q;
  q.section = ExactMatrix(V.cols, comp.size());
  for (std::size_t j = 0; j < comp.size(); ++j) q.section.at(comp[j], j) = ExactScalar::one();
  // projection: kill U, keep complement coordinates.  Solve [Ucan | section] = basis
  // of V-coords; projection = (last coords of the inverse system).
  ExactMatrix basis = Ucan.hcat(q.section);       // dim V x dim V, invertible
  ExactMatrix binv = inverse(basis);
  q.projection = ExactMatrix(comp.size(), V.cols);
  for (std::size_t i = 0; i < comp.size(); ++i)
    for (std::size_t j = 0; j < V.cols; ++j) q.projection.at(i, j) = binv.at(Ucan.cols + i, j);
  q.reps = V * q.section;
  return q;
}

// ---------------------------------------------------------------------------
// Determinants and leading principal minors.  Arithmetic is over a field
// (twisted Gaussian rationals), so plain Gaussian elimination is exact;
// minor k is the product of the first k pivots of the unpivoted elimination.

inline ExactScalar determinant(const ExactMatrix& m) {
  if (m.rows != m.cols) fail(Err::Shape, "determinant of non-square matrix");
  ExactMatrix g = m;
  std::size_t n = g.rows;
  ExactScalar det = ExactScalar::one();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t sel = k;
    while (sel < n && g.at(sel, k).is_zero()) ++sel;
    if (sel == n) return ExactScalar::zero();
    if (sel != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(g.at(sel, j), g.at(k, j));
      det = -det;
    }
    det = det * g.at(k, k);
    ExactScalar inv = ExactScalar::one() / g.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g.at(i, k).is_zero()) continue;
      ExactScalar f = g.at(i, k) * inv;
      for (std::size_t j = k; j < n; ++j)
        if (!g.at(k, j).is_zero()) g.at(i, j) -= f * g.at(k, j);
    }
  }
  return det;
}

inline std::vector<ExactScalar> leading_principal_minors(const ExactMatrix& m) {
  if (m.rows != m.cols) fail(Err::Shape, "minors of non-square matrix");
  std::size_t n = m.rows;
  ExactMatrix w = m;
  std::vector<ExactScalar> minors(n);
  ExactScalar acc = ExactScalar::one();
  for (std::size_t k = 0; k < n; ++k) {
    ExactScalar pivot = w.at(k, k);
    if (pivot.is_zero()) {
      // Zero minor: no row exchange is allowed (it would change the leading
      // minors), so the survivors are computed independently.
      for (std::size_t j = k; j < n; ++j) {
        ExactMatrix sub(j + 1, j + 1);
        for (std::size_t r = 0; r <= j; ++r)
          for (std::size_t c = 0; c <= j; ++c) sub.at(r, c) = m.at(r, c);
        minors[j] = determinant(sub);
      }
      return minors;
    }
    acc = acc * pivot;
    minors[k] = acc;
    ExactScalar inv = ExactScalar::one() / pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (w.at(i, k).is_zero()) continue;
      ExactScalar f = w.at(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j)
        if (!w.at(k, j).is_zero()) w.at(i, j) -= f * w.at(k, j);
    }
  }
  return minors;
}

}  // namespace lmhs
