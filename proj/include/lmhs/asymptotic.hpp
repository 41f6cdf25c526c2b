// The computational model of the function class h: Laurent polynomials in y
// (= Im z) and ordinary polynomials in the bounded symbol x (= Re z) over
// ExactScalar, plus an absorbing boolean tail flag standing for an
// unspecified member of h.
//
// The calculus is the faithful quotient of the paper-level estimates: a tail
// times anything (including any power of y) stays a tail, never a
// polynomial; eventual signs of tail-carrying scalars are decided by the
// polynomial part alone and become Indeterminate only when that part
// vanishes or still depends on x.

#pragma once

#include "lmhs/hermitian.hpp"
#include "lmhs/matrix.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace lmhs {

struct Monomial {
  int x = 0;  // >= 0
  int y = 0;  // any integer (Laurent in y)

  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.y != b.y) return a.y > b.y;  // y-dominant order: higher y first
    return a.x > b.x;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.x == b.x && a.y == b.y; }
};

struct AsymptoticScalar {
  std::map<Monomial, ExactScalar> poly;
  bool tail = false;

  AsymptoticScalar() = default;
  AsymptoticScalar(ExactScalar c, bool t = false) : tail(t) {
    if (!c.is_zero()) poly[{0, 0}] = std::move(c);
  }
  AsymptoticScalar(long v) : AsymptoticScalar(ExactScalar(v)) {}

  static AsymptoticScalar pure_tail() { return AsymptoticScalar(ExactScalar(), true); }
  static AsymptoticScalar monomial(ExactScalar c, int xdeg, int ydeg, bool t = false) {
    AsymptoticScalar s;
    if (!c.is_zero()) s.poly[{xdeg, ydeg}] = std::move(c);
    s.tail = t;
    return s;
  }
  // z = x + i y and conj(z) = x - i y as exact polynomials.
  static AsymptoticScalar z() {
    AsymptoticScalar s;
    s.poly[{1, 0}] = ExactScalar::one();
    s.poly[{0, 1}] = ExactScalar::i();
    return s;
  }
  static AsymptoticScalar zbar() { return z().conj(); }
  static AsymptoticScalar y(int deg = 1) { return monomial(ExactScalar::one(), 0, deg); }

  bool poly_zero() const { return poly.empty(); }
  bool is_zero() const { return poly.empty() && !tail; }
  bool x_free() const {
    for (auto& [m, c] : poly) {
      (void)c;
      if (m.x != 0) return false;
    }
    return true;
  }

  void add_term(const Monomial& m, const ExactScalar& c) {
    if (c.is_zero()) return;
    auto it = poly.find(m);
    if (it == poly.end()) {
      poly[m] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) poly.erase(it);
    }
  }

  AsymptoticScalar conj() const {
    AsymptoticScalar s;
    s.tail = tail;
    for (auto& [m, c] : poly) s.poly[m] = c.conj();
    return s;
  }

  friend AsymptoticScalar operator+(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    AsymptoticScalar s = a;
    s.tail = a.tail || b.tail;
    for (auto& [m, c] : b.poly) s.add_term(m, c);
    return s;
  }
  friend AsymptoticScalar operator-(const AsymptoticScalar& a) {
    AsymptoticScalar s;
    s.tail = a.tail;
    for (auto& [m, c] : a.poly) s.poly[m] = -c;
    return s;
  }
  friend AsymptoticScalar operator-(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    return a + (-b);
  }
  friend AsymptoticScalar operator*(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    AsymptoticScalar s;
    for (auto& [ma, ca] : a.poly)
      for (auto& [mb, cb] : b.poly) s.add_term({ma.x + mb.x, ma.y + mb.y}, ca * cb);
    // A tail multiplied by an exact zero vanishes; otherwise tails absorb.
    bool a_nonzero = a.tail || !a.poly.empty();
    bool b_nonzero = b.tail || !b.poly.empty();
    s.tail = (a.tail && b_nonzero) || (b.tail && a_nonzero);
    return s;
  }
  AsymptoticScalar& operator+=(const AsymptoticScalar& b) { return *this = *this + b; }
  AsymptoticScalar& operator-=(const AsymptoticScalar& b) { return *this = *this - b; }
  friend bool operator==(const AsymptoticScalar& a, const AsymptoticScalar& b) {
    return a.tail == b.tail && a.poly == b.poly;
  }

  // Leading term in the y-dominant order.
  std::pair<Monomial, ExactScalar> leading() const {
    if (poly.empty()) fail(Err::Shape, "leading term of zero polynomial");
    return *poly.begin();
  }
};

inline std::string to_string(const AsymptoticScalar& s) {
  if (s.poly.empty()) return s.tail ? "h" : "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : s.poly) {
    std::string cs = to_string(c);
    if (!first) os << " + ";
    first = false;
    bool needs_parens = cs.find('+') != std::string::npos ||
                        cs.find('-', 1) != std::string::npos;
    if (m.x == 0 && m.y == 0) {
      os << cs;
    } else {
      if (cs == "1") {
        ;
      } else if (cs == "-1") {
        os << "-";
      } else {
        os << (needs_parens ? "(" + cs + ")" : cs) << "*";
      }
      if (m.x != 0) {
        os << "x" << (m.x == 1 ? "" : "^" + std::to_string(m.x));
        if (m.y != 0) os << "*";
      }
      if (m.y != 0) os << "y" << (m.y == 1 ? "" : "^" + std::to_string(m.y));
    }
  }
  if (s.tail) os << " + h";
  return os.str();
}

enum class EventualSign { Positive, Negative, Zero, Indeterminate };

// Sign for y >> 0: decided by the leading y-coefficient of an x-free
// polynomial part; tails only matter when the polynomial part vanishes.
inline EventualSign eventual_sign(const AsymptoticScalar& s) {
  if (s.poly.empty()) return s.tail ? EventualSign::Indeterminate : EventualSign::Zero;
  if (!s.x_free()) return EventualSign::Indeterminate;
  auto [m, c] = s.leading();
  (void)m;
  auto sg = c.sign();
  if (!sg || *sg == 0) return EventualSign::Indeterminate;
  return *sg > 0 ? EventualSign::Positive : EventualSign::Negative;
}

// ---------------------------------------------------------------------------
// Exact polynomial division (used by fraction-free elimination, where the
// divisions are guaranteed exact by the Sylvester identity).

namespace detail {

inline AsymptoticScalar poly_divide_exact(const AsymptoticScalar& num,
                                          const AsymptoticScalar& den) {
  if (den.poly.empty()) fail(Err::Shape, "polynomial division by zero");
  AsymptoticScalar r, d, q;
  r.poly = num.poly;
  d.poly = den.poly;
  auto [dm, dc] = d.leading();
  std::size_t guard = 0;
  while (!r.poly.empty()) {
    auto [rm, rc] = r.leading();
    Monomial t{rm.x - dm.x, rm.y - dm.y};
    if (t.x < 0 || ++guard > 100000) fail(Err::Consistency, "inexact polynomial division");
    ExactScalar c = rc / dc;
    AsymptoticScalar term = AsymptoticScalar::monomial(c, t.x, t.y);
    q += term;
    r -= term * d;
  }
  return q;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Asymptotic hermitian matrices.

struct AsymptoticHermitian {
  std::size_t n = 0;
  std::vector<AsymptoticScalar> a;  // row-major

  AsymptoticHermitian() = default;
  explicit AsymptoticHermitian(std::size_t dim) : n(dim), a(dim * dim) {}

  AsymptoticScalar& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const AsymptoticScalar& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  bool is_hermitian() const {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(at(i, j).conj() == at(j, i))) return false;
    return true;
  }
};

// Leading principal minors of the polynomial parts (fraction-free Bareiss
// over the polynomial ring), with the tail flag of minor k set when any
// entry of the top-left k x k submatrix carries a tail.
inline std::vector<AsymptoticScalar> asymptotic_minors(const AsymptoticHermitian& M) {
  std::size_t n = M.n;
  std::vector<AsymptoticScalar> w(M.a);
  for (auto& e : w) e.tail = false;
  std::vector<AsymptoticScalar> minors(n);
  AsymptoticScalar prev(ExactScalar::one());
  bool bareiss_ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (bareiss_ok) {
      minors[k] = w[k * n + k];
      if (minors[k].poly.empty()) {
        bareiss_ok = false;
      } else {
        AsymptoticScalar pivot = w[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i)
          for (std::size_t j = k + 1; j < n; ++j)
            w[i * n + j] = detail::poly_divide_exact(
                w[i * n + j] * pivot - w[i * n + k] * w[k * n + j], prev);
        prev = pivot;
      }
    }
    if (!bareiss_ok) {
      // Zero pivot: compute this and later minors by cofactor expansion.
      std::vector<AsymptoticScalar> sub((k + 1) * (k + 1));
      for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j) {
          sub[i * (k + 1) + j] = M.at(i, j);
          sub[i * (k + 1) + j].tail = false;
        }
      // Laplace along the first row (sizes here are small: the fallback only
      // triggers on degenerate inputs).
      std::vector<std::size_t> cols(k + 1);
      for (std::size_t j = 0; j <= k; ++j) cols[j] = j;
      struct Det {
        static AsymptoticScalar go(const std::vector<AsymptoticScalar>& m, std::size_t dim,
                                   std::vector<std::size_t> rows, std::vector<std::size_t> c) {
          if (rows.empty()) return AsymptoticScalar(ExactScalar::one());
          AsymptoticScalar acc;
          std::size_t r0 = rows.front();
          std::vector<std::size_t> rest(rows.begin() + 1, rows.end());
          for (std::size_t jj = 0; jj < c.size(); ++jj) {
            const AsymptoticScalar& e = m[r0 * dim + c[jj]];
            if (e.poly.empty()) continue;
            std::vector<std::size_t> c2 = c;
            c2.erase(c2.begin() + static_cast<long>(jj));
            AsymptoticScalar term = e * go(m, dim, rest, c2);
            if (jj % 2)
              acc -= term;
            else
              acc += term;
          }
          return acc;
        }
      };
      std::vector<std::size_t> rows(k + 1);
      for (std::size_t i = 0; i <= k; ++i) rows[i] = i;
      minors[k] = Det::go(sub, k + 1, rows, cols);
    }
    bool any_tail = false;
    for (std::size_t i = 0; i <= k && !any_tail; ++i)
      for (std::size_t j = 0; j <= k && !any_tail; ++j)
        if (M.at(i, j).tail) any_tail = true;
    minors[k].tail = any_tail;
  }
  return minors;
}

// True iff every leading principal minor is eventually positive.
// Any Indeterminate minor aborts with NotDecidable.
inline bool eventually_positive_definite(const AsymptoticHermitian& M) {
  if (!M.is_hermitian()) fail(Err::Shape, "matrix is not hermitian at the poly level");
  for (auto& minor : asymptotic_minors(M)) {
    switch (eventual_sign(minor)) {
      case EventualSign::Positive: break;
      case EventualSign::Negative:
      case EventualSign::Zero: return false;
      case EventualSign::Indeterminate:
        fail(Err::NotDecidable, "indeterminate principal minor");
    }
  }
  return true;
}

// Eventual signature via the Jacobi sign-change count; requires every minor
// to have a decidable nonzero eventual sign.
inline std::pair<std::size_t, std::size_t> eventual_signature(const AsymptoticHermitian& M) {
  if (!M.is_hermitian()) fail(Err::Shape, "matrix is not hermitian at the poly level");
  auto minors = asymptotic_minors(M);
  std::size_t neg = 0;
  int prev = 1;
  for (auto& minor : minors) {
    EventualSign s = eventual_sign(minor);
    if (s == EventualSign::Zero || s == EventualSign::Indeterminate)
      fail(Err::NotDecidable, "eventual_signature: minor without definite eventual sign");
    int cur = s == EventualSign::Positive ? 1 : -1;
    if (cur != prev) ++neg;
    prev = cur;
  }
  return {M.n - neg, neg};
}

// ---------------------------------------------------------------------------
// Schur complement route.  D must have the shape 2y (Q + o(1)) with Q an
// exactly invertible constant; B and C must be bounded (y-degree 0).  The
// 1/(2y)-order correction -C Q^{-1} B vanishes in the y -> infinity limit,
// so the result is the A block with tails recording the dropped correction.

struct SchurBlocks {
  AsymptoticHermitian A;                    // (h x h)
  std::vector<AsymptoticScalar> B, C;       // h x m and m x h, row-major
  AsymptoticHermitian D;                    // (m x m)
  std::size_t h = 0, m = 0;
};

inline ExactMatrix schur_leading_q(const AsymptoticHermitian& D) {
  ExactMatrix Q(D.n, D.n);
  for (std::size_t i = 0; i < D.n; ++i)
    for (std::size_t j = 0; j < D.n; ++j) {
      for (auto& [mo, c] : D.at(i, j).poly) {
        if (mo.x != 0 || mo.y > 1 || mo.y < 0)
          fail(Err::Growth, "D block is not of the form 2y(Q + o(1))");
        if (mo.y == 1) Q.at(i, j) = c / ExactScalar(2);
      }
    }
  return Q;
}

inline AsymptoticHermitian schur_reduce(const SchurBlocks& blocks) {
  const auto& A = blocks.A;
  const auto& D = blocks.D;
  std::size_t h = blocks.h, m = blocks.m;
  if (A.n != h || D.n != m || blocks.B.size() != h * m || blocks.C.size() != m * h)
    fail(Err::Shape, "schur_reduce: inconsistent block shapes");
  for (auto& e : blocks.B)
    for (auto& [mo, c] : e.poly) {
      (void)c;
      if (mo.y != 0 || mo.x != 0) fail(Err::Growth, "unbounded B block entry");
    }
  for (auto& e : blocks.C)
    for (auto& [mo, c] : e.poly) {
      (void)c;
      if (mo.y != 0 || mo.x != 0) fail(Err::Growth, "unbounded C block entry");
    }
  ExactMatrix Q = schur_leading_q(D);
  if (rank(Q) != m) fail(Err::SingularLeadingBlock, "leading D coefficient is singular");
  // D^{-1} = (Q^{-1} + o(1)) / 2y, so the coupling correction B D^{-1} C is
  // O(1/y): collapsed to its limit 0, recorded as a tail flag.
  AsymptoticHermitian out(h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      out.at(i, j) = A.at(i, j);
      bool had_corr = false;
      for (std::size_t k = 0; k < m; ++k)
        if (!blocks.C[k * h + j].is_zero() && !blocks.B[i * m + k].is_zero()) had_corr = true;
      if (had_corr) out.at(i, j).tail = true;
    }
  return out;
}

// Full-matrix verdict along the Schur route: the D side must be eventually
// positive (Q is PD) and the reduced A block eventually positive definite.
inline bool schur_route_positive_definite(const SchurBlocks& blocks) {
  ExactMatrix Q = schur_leading_q(blocks.D);
  HermitianForm qf{Q};
  if (!qf.is_hermitian()) fail(Err::Shape, "leading D coefficient is not hermitian");
  bool q_pd = positive_definite(qf);
  AsymptoticHermitian reduced = schur_reduce(blocks);
  return q_pd && eventually_positive_definite(reduced);
}

// Assemble the full (h+m) x (h+m) matrix from blocks, for the direct route.
inline AsymptoticHermitian assemble_blocks(const SchurBlocks& blocks) {
  std::size_t h = blocks.h, m = blocks.m;
  AsymptoticHermitian M(h + m);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) M.at(i, j) = blocks.A.at(i, j);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < m; ++j) M.at(i, h + j) = blocks.B[i * m + j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < h; ++j) M.at(h + i, j) = blocks.C[i * h + j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) M.at(h + i, h + j) = blocks.D.at(i, j);
  return M;
}

}  // namespace lmhs
