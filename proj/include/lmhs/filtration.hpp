// Filtrations on a finite-dimensional space, real structures (antilinear
// involutions), and the k-opposedness check.

#pragma once

#include "lmhs/matrix.hpp"

#include <map>

namespace lmhs {

// Antilinear involution v -> C * conj(v) on coordinate vectors.
struct RealStructure {
  ExactMatrix C;

  static RealStructure standard(std::size_t n) { return {ExactMatrix::identity(n)}; }

  std::size_t dim() const { return C.rows; }
  ExactMatrix apply(const ExactMatrix& v) const { return C * v.conj(); }

  bool is_involution() const { return (C * C.conj()) == ExactMatrix::identity(C.rows); }
};

enum class Direction { Increasing, Decreasing };

// A finite filtration.  steps[k] is the subspace at index k (canonical basis
// columns in ambient coordinates); outside the stored range the filtration
// saturates to 0 / the full space according to its direction.
struct Filtration {
  std::size_t ambient = 0;
  Direction dir = Direction::Increasing;
  std::map<int, ExactMatrix> steps;

  static Filtration trivial_increasing(std::size_t n, int top) {
    Filtration f;
    f.ambient = n;
    f.dir = Direction::Increasing;
    f.steps[top] = ExactMatrix::identity(n);
    f.steps[top - 1] = ExactMatrix(n, 0);
    return f;
  }

  int lowest() const { return steps.begin()->first; }
  int highest() const { return steps.rbegin()->first; }

  ExactMatrix at(int k) const {
    if (steps.empty()) fail(Err::Shape, "empty filtration");
    if (dir == Direction::Increasing) {
      if (k < lowest()) return ExactMatrix(ambient, 0);
      if (k > highest()) return steps.rbegin()->second;
      auto it = steps.upper_bound(k);
      --it;
      return it->second;
    }
    if (k > highest()) return ExactMatrix(ambient, 0);
    if (k < lowest()) return steps.begin()->second;
    auto it = steps.lower_bound(k);
    return it->second;
  }

  void set(int k, ExactMatrix basis) { steps[k] = column_echelon(basis); }

  // Exhaustive and separated with nested steps in the stated direction.
  bool well_formed() const {
    if (steps.empty()) return false;
    const ExactMatrix* prev = nullptr;
    for (auto& [k, b] : steps) {
      (void)k;
      if (b.rows != ambient) return false;
      if (prev) {
        bool ok = dir == Direction::Increasing ? subspace_leq(*prev, b) : subspace_leq(b, *prev);
        if (!ok) return false;
      }
      prev = &b;
    }
    if (dir == Direction::Increasing)
      return steps.rbegin()->second.cols == ambient;
    return steps.begin()->second.cols == ambient;
  }

  Filtration conjugated(const RealStructure& rs) const {
    Filtration f;
    f.ambient = ambient;
    f.dir = dir;
    for (auto& [k, b] : steps) f.steps[k] = column_echelon(rs.apply(b));
    return f;
  }
};

// F^p (+) conj(F)^{k+1-p} = H for every p.  F must be decreasing.
inline bool check_opposed(const Filtration& F, int k, const RealStructure& rs) {
  if (F.dir != Direction::Decreasing) fail(Err::Shape, "check_opposed needs a decreasing filtration");
  Filtration Fbar = F.conjugated(rs);
  int lo = F.lowest() - 1, hi = F.highest() + 1;
  for (int p = lo; p <= hi; ++p) {
    ExactMatrix A = F.at(p);
    ExactMatrix B = Fbar.at(k + 1 - p);
    if (A.cols + B.cols != F.ambient) return false;
    if (rank(A.hcat(B)) != F.ambient) return false;
  }
  return true;
}

}  // namespace lmhs
