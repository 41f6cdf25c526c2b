// Mixed Hodge structures: validation, the Deligne splitting, and morphism
// type checks.
//
// A mixed Hodge structure here is a triple (H, W, F) on a space with real
// structure: W increasing and defined over the reals, F decreasing, and F
// inducing a pure structure of weight l on every graded piece Gr_l^W.  The
// splitting I^{p,q} is computed by the explicit intersection formula
//
//   I^{p,q} = F^p cap W_{p+q} cap ( conj(F)^q cap W_{p+q}
//                                   + sum_{j>=2} conj(F)^{q-j+1} cap W_{p+q-j} ),
//
// the sum truncated at the lowest nonzero weight step.

#pragma once

#include "lmhs/filtration.hpp"

#include <map>
#include <string>
#include <vector>

namespace lmhs {

struct MixedHodge {
  std::size_t dim = 0;
  RealStructure real;
  Filtration W;  // increasing
  Filtration F;  // decreasing
};

struct MhsFailure {
  std::string axiom;
  std::string detail;
};

// Structure of induced data on one W-graded piece.
namespace detail {

struct GradedPiece2 {
  QuotientMap q;                 // W_l / W_{l-1}
  ExactMatrix conj;              // induced conjugation on quotient coordinates
  std::map<int, ExactMatrix> F;  // induced Hodge filtration, quotient coords
};

inline GradedPiece2 graded_weight_piece(const MixedHodge& M, int l) {
  GradedPiece2 g;
  g.q = quotient_map(M.W.at(l), M.W.at(l - 1));
  std::size_t d = g.q.reps.cols;
  // Conjugation descends because W is real.
  ExactMatrix conj_reps = M.real.apply(g.q.reps);
  ExactMatrix in_W = solve(M.W.at(l), conj_reps).value();
  g.conj = g.q.projection * in_W;
  (void)d;
  int plo = M.F.lowest() - 1, phi = M.F.highest() + 1;
  for (int p = plo; p <= phi; ++p) {
    ExactMatrix fw = subspace_intersect(M.F.at(p), M.W.at(l));
    if (fw.cols == 0) {
      g.F[p] = ExactMatrix(g.q.reps.cols, 0);
      continue;
    }
    ExactMatrix coords = solve(M.W.at(l), fw).value();
    g.F[p] = image(g.q.projection * coords);
  }
  return g;
}

}  // namespace detail

// Empty result means valid.  Failures are data, not exceptions.
inline std::vector<MhsFailure> validate_mhs(const MixedHodge& M) {
  std::vector<MhsFailure> out;
  if (!M.real.is_involution()) {
    out.push_back({"real-structure", "conjugation is not an antilinear involution"});
    return out;
  }
  if (M.W.dir != Direction::Increasing || M.F.dir != Direction::Decreasing) {
    out.push_back({"directions", "W must be increasing and F decreasing"});
    return out;
  }
  if (!M.W.well_formed()) out.push_back({"W", "not nested/exhaustive/separated"});
  if (!M.F.well_formed()) out.push_back({"F", "not nested/exhaustive/separated"});
  if (!out.empty()) return out;
  for (auto& [k, b] : M.W.steps) {
    if (!subspace_eq(column_echelon(M.real.apply(b)), b))
      out.push_back({"W not real", "W_" + std::to_string(k) + " is not conjugation-stable"});
  }
  if (!out.empty()) return out;
  // Graded pieces must carry pure structures of the right weight.
  for (int l = M.W.lowest(); l <= M.W.highest(); ++l) {
    auto g = detail::graded_weight_piece(M, l);
    std::size_t d = g.q.reps.cols;
    if (d == 0) continue;
    // k-opposedness of induced F on the quotient.
    Filtration Find;
    Find.ambient = d;
    Find.dir = Direction::Decreasing;
    for (auto& [p, b] : g.F) Find.steps[p] = b;
    RealStructure rs{g.conj};
    if (!check_opposed(Find, l, rs))
      out.push_back({"graded purity",
                     "induced filtration on Gr_" + std::to_string(l) + " is not " +
                         std::to_string(l) + "-opposed"});
  }
  return out;
}

struct DeligneSplitting {
  std::map<std::pair<int, int>, ExactMatrix> pieces;

  ExactMatrix piece(int p, int q) const {
    auto it = pieces.find({p, q});
    if (it == pieces.end()) fail(Err::Shape, "no such splitting piece");
    return it->second;
  }
  std::size_t dim(int p, int q) const {
    auto it = pieces.find({p, q});
    return it == pieces.end() ? 0 : it->second.cols;
  }
};

inline DeligneSplitting deligne_splitting(const MixedHodge& M) {
  if (!validate_mhs(M).empty()) fail(Err::Validation, "deligne_splitting: invalid MHS");
  Filtration Fbar = M.F.conjugated(M.real);
  int wlo = M.W.lowest(), whi = M.W.highest();
  int plo = M.F.lowest(), phi = M.F.highest();
  // The grid reuses every F^p cap W_w and conj(F)^q cap W_w many times.
  std::map<std::pair<int, int>, ExactMatrix> fw_cache, fbarw_cache;
  auto fw = [&](int p, int w) -> const ExactMatrix& {
    auto key = std::make_pair(p, w);
    auto it = fw_cache.find(key);
    if (it == fw_cache.end())
      it = fw_cache.emplace(key, subspace_intersect(M.F.at(p), M.W.at(w))).first;
    return it->second;
  };
  auto fbarw = [&](int q, int w) -> const ExactMatrix& {
    auto key = std::make_pair(q, w);
    auto it = fbarw_cache.find(key);
    if (it == fbarw_cache.end())
      it = fbarw_cache.emplace(key, subspace_intersect(Fbar.at(q), M.W.at(w))).first;
    return it->second;
  };
  DeligneSplitting S;
  for (int p = plo - 1; p <= phi + 1; ++p) {
    for (int w = wlo; w <= whi + 1; ++w) {
      int q = w - p;
      const ExactMatrix& FW = fw(p, w);
      if (FW.cols == 0) continue;
      ExactMatrix rhs = fbarw(q, w);
      for (int j = 2; w - j >= wlo - 1; ++j) {
        const ExactMatrix& term = fbarw(q - j + 1, w - j);
        if (term.cols) rhs = subspace_sum(rhs, term);
      }
      ExactMatrix I = subspace_intersect(FW, rhs);
      if (I.cols) S.pieces[{p, q}] = I;
    }
  }
  return S;
}

// Reconstruction checks used by property tests.
inline bool splitting_reconstructs(const MixedHodge& M, const DeligneSplitting& S) {
  // Direct sum.
  std::size_t total = 0;
  ExactMatrix all(M.dim, 0);
  for (auto& [pq, b] : S.pieces) {
    (void)pq;
    total += b.cols;
    all = all.hcat(b);
  }
  if (total != M.dim || rank(all) != M.dim) return false;
  // W_k = sum over p+q <= k, F^p = sum over r >= p.
  for (auto& [k, b] : M.W.steps) {
    ExactMatrix s(M.dim, 0);
    for (auto& [pq, piece] : S.pieces)
      if (pq.first + pq.second <= k) s = s.hcat(piece);
    if (!subspace_eq(image(s), b)) return false;
  }
  for (auto& [p, b] : M.F.steps) {
    ExactMatrix s(M.dim, 0);
    for (auto& [pq, piece] : S.pieces)
      if (pq.first >= p) s = s.hcat(piece);
    if (!subspace_eq(image(s), b)) return false;
  }
  return true;
}

// I^{p,q} == conj(I^{q,p}) modulo the lower-left pieces.
inline bool splitting_congruence(const MixedHodge& M, const DeligneSplitting& S) {
  for (auto& [pq, b] : S.pieces) {
    auto [p, q] = pq;
    ExactMatrix low(M.dim, 0);
    for (auto& [rs, piece] : S.pieces)
      if (rs.first < p && rs.second < q) low = low.hcat(piece);
    ExactMatrix other(M.dim, 0);
    if (auto it = S.pieces.find({q, p}); it != S.pieces.end()) other = it->second;
    ExactMatrix lhs = subspace_sum(b, image(low));
    ExactMatrix rhs = subspace_sum(column_echelon(M.real.apply(other)), image(low));
    if (!subspace_eq(lhs, rhs)) return false;
  }
  return true;
}

// f(W_k) in W_{k+2r} and f(F^p) in F^{p+r}: f is of type (r, r).
inline bool is_morphism_of_type(const ExactMatrix& f, const MixedHodge& src, const MixedHodge& dst,
                                int r) {
  if (f.cols != src.dim || f.rows != dst.dim) fail(Err::Shape, "morphism shape mismatch");
  for (auto& [k, b] : src.W.steps) {
    if (b.cols == 0) continue;
    if (!subspace_leq(image(f * b), dst.W.at(k + 2 * r))) return false;
  }
  for (auto& [p, b] : src.F.steps) {
    if (b.cols == 0) continue;
    if (!subspace_leq(image(f * b), dst.F.at(p + r))) return false;
  }
  return true;
}

}  // namespace lmhs
