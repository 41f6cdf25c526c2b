// Combinatorial model of a simple normal crossing central fiber: strata
// E(k), bigraded cohomology with cup-product Grams into the top degree,
// restriction maps between incident strata, and optional Kaehler data.
//
// Trace functionals carry twist equal to the complex dimension of the piece
// (one factor of 2*pi per two real dimensions); this is what makes the two
// graded pairing formulas land in a single twist.

#pragma once

#include "lmhs/filtration.hpp"
#include "lmhs/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace lmhs {

struct HodgeSlice {
  int p = 0, q = 0;
  std::size_t dim = 0;
};

struct DegreeData {
  std::size_t rank = 0;
  std::vector<HodgeSlice> slices;  // basis ordered by slices, in listed order
  ExactMatrix conj;                // antilinear involution matrix
  ExactMatrix gram;                // trace pairing H^d x H^{2 dimC - d} -> twist dimC
};

struct Piece {
  std::string id;
  std::vector<int> components;  // sorted component indices, 1-based
  int dim_c = 0;
  std::map<int, DegreeData> coh;  // only degrees with rank > 0

  std::size_t rank(int degree) const {
    auto it = coh.find(degree);
    return it == coh.end() ? 0 : it->second.rank;
  }
  // Diagonal Weil operator i^{p-q} in the slice basis.
  ExactMatrix weil(int degree) const {
    auto it = coh.find(degree);
    if (it == coh.end()) return ExactMatrix(0, 0);
    ExactMatrix C(it->second.rank, it->second.rank);
    std::size_t off = 0;
    for (auto& s : it->second.slices)
      for (std::size_t j = 0; j < s.dim; ++j, ++off) C.at(off, off) = ExactScalar(i_power(s.p - s.q));
    return C;
  }
};

struct SncInstance {
  std::string name;
  int fiber_dim = 3;
  int num_components = 0;
  std::map<int, std::vector<Piece>> strata;  // depth -> pieces
  // Restriction matrices iota^*: H^d(shallow) -> H^d(deep), keyed by
  // (shallow id, deep id, degree); stored only when both ranks are nonzero.
  std::map<std::tuple<std::string, std::string, int>, ExactMatrix> restrictions;
  std::map<std::string, ExactMatrix> kahler;  // degree-2 class per depth-1 piece
  std::optional<ExactMatrix> a0;              // optional override, assembled H^n coords

  int max_depth() const { return strata.empty() ? 0 : strata.rbegin()->first; }

  const std::vector<Piece>& pieces_at(int depth) const {
    static const std::vector<Piece> none;
    auto it = strata.find(depth);
    return it == strata.end() ? none : it->second;
  }

  const Piece* find_piece(const std::string& id) const {
    for (auto& [d, ps] : strata)
      for (auto& p : ps)
        if (p.id == id) return &p;
    return nullptr;
  }

  ExactMatrix restriction(const Piece& shallow, const Piece& deep, int degree) const {
    std::size_t rs = shallow.rank(degree), rd = deep.rank(degree);
    auto it = restrictions.find({shallow.id, deep.id, degree});
    if (it != restrictions.end()) return it->second;
    return ExactMatrix(rd, rs);
  }

  // Trace of a cup product of full-stratum vectors on one piece.
  ExactScalar trace(const Piece& piece, int degree, const ExactMatrix& u,
                    const ExactMatrix& v) const {
    auto it = piece.coh.find(degree);
    if (it == piece.coh.end()) return ExactScalar::zero();
    return (u.transpose() * it->second.gram * v).at(0, 0);
  }
};

// Position (1-based) of component c within sorted I, or 0 if absent.
inline std::size_t omit_position(const std::vector<int>& deep, const std::vector<int>& shallow) {
  // deep = shallow + one extra component; returns 1-based index of the extra
  // component inside deep, or 0 when the pieces are not incident.
  if (deep.size() != shallow.size() + 1) return 0;
  std::size_t pos = 0;
  std::size_t si = 0;
  for (std::size_t di = 0; di < deep.size(); ++di) {
    if (si < shallow.size() && deep[di] == shallow[si]) {
      ++si;
    } else if (pos == 0) {
      pos = di + 1;
    } else {
      return 0;
    }
  }
  return si == shallow.size() ? pos : 0;
}

// Reorder every piece basis so that each (p,q) type appears in one slice,
// sorted by p descending.  Conjugations, grams, restrictions and Kaehler
// data are transported along the permutations.  Serialization requires this
// normal form (the hodge fragment is keyed by type).
inline void normalize_slices(SncInstance& inst) {
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> perms;  // new <- old
  for (auto& [depth, pieces] : inst.strata) {
    (void)depth;
    for (auto& piece : pieces) {
      for (auto& [d, data] : piece.coh) {
        // stable order: p descending, then original position
        std::vector<std::pair<HodgeSlice, std::size_t>> tagged;  // slice, start offset
        std::size_t off = 0;
        for (auto& sl : data.slices) {
          tagged.push_back({sl, off});
          off += sl.dim;
        }
        std::stable_sort(tagged.begin(), tagged.end(),
                         [](const auto& a, const auto& b) { return a.first.p > b.first.p; });
        std::vector<std::size_t> perm;  // perm[new] = old index
        std::vector<HodgeSlice> slices;
        for (auto& [sl, start] : tagged) {
          if (!slices.empty() && slices.back().p == sl.p && slices.back().q == sl.q)
            slices.back().dim += sl.dim;
          else
            slices.push_back(sl);
          for (std::size_t j = 0; j < sl.dim; ++j) perm.push_back(start + j);
        }
        bool trivial = true;
        for (std::size_t i = 0; i < perm.size(); ++i)
          if (perm[i] != i) trivial = false;
        data.slices = std::move(slices);
        perms[{piece.id, d}] = std::move(perm);
        if (trivial) continue;
        const auto& p = perms[{piece.id, d}];
        ExactMatrix conj(data.rank, data.rank);
        for (std::size_t i = 0; i < data.rank; ++i)
          for (std::size_t j = 0; j < data.rank; ++j) conj.at(i, j) = data.conj.at(p[i], p[j]);
        data.conj = std::move(conj);
      }
      // grams couple two degrees; permute rows now, columns after all perms known
    }
  }
  auto perm_of = [&](const std::string& id, int d) -> const std::vector<std::size_t>* {
    auto it = perms.find({id, d});
    return it == perms.end() ? nullptr : &it->second;
  };
  for (auto& [depth, pieces] : inst.strata) {
    (void)depth;
    for (auto& piece : pieces) {
      for (auto& [d, data] : piece.coh) {
        const auto* pr = perm_of(piece.id, d);
        const auto* pc = perm_of(piece.id, 2 * piece.dim_c - d);
        if (!pr) continue;
        ExactMatrix g(data.gram.rows, data.gram.cols);
        for (std::size_t i = 0; i < g.rows; ++i)
          for (std::size_t j = 0; j < g.cols; ++j)
            g.at(i, j) = data.gram.at((*pr)[i], pc ? (*pc)[j] : j);
        data.gram = std::move(g);
      }
    }
  }
  for (auto& [key, mat] : inst.restrictions) {
    const auto* pf = perm_of(std::get<0>(key), std::get<2>(key));
    const auto* pt = perm_of(std::get<1>(key), std::get<2>(key));
    ExactMatrix r(mat.rows, mat.cols);
    for (std::size_t i = 0; i < mat.rows; ++i)
      for (std::size_t j = 0; j < mat.cols; ++j)
        r.at(i, j) = mat.at(pt ? (*pt)[i] : i, pf ? (*pf)[j] : j);
    mat = std::move(r);
  }
  for (auto& [id, w] : inst.kahler) {
    const auto* p2 = perm_of(id, 2);
    if (!p2) continue;
    ExactMatrix v(w.rows, 1);
    for (std::size_t i = 0; i < w.rows; ++i) v.at(i, 0) = w.at((*p2)[i], 0);
    w = std::move(v);
  }
}

struct ValidationIssue {
  std::string where;
  std::string what;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool kahler_present = false;
  bool kahler_global = false;  // kahler classes agree on double strata
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate_instance(const SncInstance& inst);

// Kaehler class on a deeper stratum piece, derived through the first parent.
inline std::optional<ExactMatrix> kahler_on_piece(const SncInstance& inst, const Piece& piece) {
  if (inst.kahler.empty()) return std::nullopt;
  if (piece.components.size() == 1) {
    auto it = inst.kahler.find(piece.id);
    if (it == inst.kahler.end()) return std::nullopt;
    return it->second;
  }
  // Restrict along any chain to depth 1; use the lexicographically first
  // parent at each step (agreement across parents is a validation item).
  for (auto& parent : inst.pieces_at(static_cast<int>(piece.components.size()) - 1)) {
    if (!omit_position(piece.components, parent.components)) continue;
    auto up = kahler_on_piece(inst, parent);
    if (!up) return std::nullopt;
    if (piece.rank(2) == 0) return ExactMatrix(0, 1);
    return inst.restriction(parent, piece, 2) * *up;
  }
  return std::nullopt;
}

inline ValidationReport validate_instance(const SncInstance& inst) {
  ValidationReport rep;
  auto issue = [&rep](const std::string& w, const std::string& s) { rep.issues.push_back({w, s}); };

  for (auto& [depth, pieces] : inst.strata) {
    for (auto& piece : pieces) {
      if (static_cast<int>(piece.components.size()) != depth)
        issue(piece.id, "component set size does not match depth");
      if (piece.dim_c != inst.fiber_dim - depth + 1)
        issue(piece.id, "complex dimension does not match depth");
      for (auto& [d, data] : piece.coh) {
        std::size_t total = 0;
        for (auto& s : data.slices) {
          total += s.dim;
          if (s.p + s.q != d) issue(piece.id, "hodge slice degree mismatch");
        }
        if (total != data.rank) issue(piece.id, "hodge slice dims do not sum to rank");
        if (data.conj.rows != data.rank || data.conj.cols != data.rank)
          issue(piece.id, "conjugation shape");
        else if (!(data.conj * data.conj.conj() == ExactMatrix::identity(data.rank)))
          issue(piece.id, "conjugation is not an involution");
        int dual = 2 * piece.dim_c - d;
        std::size_t rdual = piece.rank(dual);
        if (data.gram.rows != data.rank || data.gram.cols != rdual)
          issue(piece.id, "gram shape for degree " + std::to_string(d));
        // Graded (anti)symmetry against the dual degree's gram.
        auto itd = piece.coh.find(dual);
        if (itd != piece.coh.end() && data.gram.rows == data.rank && data.gram.cols == rdual) {
          ExactScalar sign((d % 2 == 1 && dual % 2 == 1) ? -1 : 1);
          if (!(data.gram == sign * itd->second.gram.transpose()))
            issue(piece.id, "gram not graded-(anti)symmetric in degree " + std::to_string(d));
        }
        // Twist uniformity: trace values carry twist dim_c.
        for (auto& e : data.gram.a)
          if (!e.is_zero() && e.twist != piece.dim_c) {
            issue(piece.id, "gram twist is not the complex dimension");
            break;
          }
        // Nondegeneracy of the trace pairing.
        if (data.gram.rows == data.rank && data.gram.cols == rdual && data.rank == rdual &&
            data.rank > 0 && rank(data.gram) != data.rank)
          issue(piece.id, "degenerate trace pairing in degree " + std::to_string(d));
        // conj compatibility: trace(conj u, conj v) = conj trace(u, v),
        // i.e. C_d^T G C_dual = conj(G).
        if (itd != piece.coh.end() && data.rank && rdual) {
          ExactMatrix lhs = data.conj.transpose() * data.gram * itd->second.conj;
          if (!(lhs == data.gram.conj()))
            issue(piece.id, "gram incompatible with conjugation in degree " + std::to_string(d));
        }
      }
    }
  }
  if (!rep.issues.empty()) return rep;

  // Restriction maps: defined over the real structures and path-independent.
  for (auto& [key, mat] : inst.restrictions) {
    auto& [from, to, degree] = key;
    const Piece* ps = inst.find_piece(from);
    const Piece* pd = inst.find_piece(to);
    if (!ps || !pd) {
      issue(from + "->" + to, "restriction references unknown piece");
      continue;
    }
    if (!omit_position(pd->components, ps->components))
      issue(from + "->" + to, "restriction between non-incident pieces");
    if (mat.rows != pd->rank(degree) || mat.cols != ps->rank(degree))
      issue(from + "->" + to, "restriction shape in degree " + std::to_string(degree));
    auto its = ps->coh.find(degree);
    auto itd = pd->coh.find(degree);
    if (its != ps->coh.end() && itd != pd->coh.end()) {
      if (!(itd->second.conj * mat.conj() == mat * its->second.conj))
        issue(from + "->" + to, "restriction not defined over the real structure");
    }
  }
  if (!rep.issues.empty()) return rep;

  // Path independence through depth: r_{B->C} r_{A->B} agrees for all B.
  for (auto& [depth, pieces] : inst.strata) {
    if (depth < 3) continue;
    for (auto& deep : pieces) {
      for (auto& shallow : inst.pieces_at(depth - 2)) {
        for (int degree = 0; degree <= 2 * deep.dim_c; ++degree) {
          if (!shallow.rank(degree) || !deep.rank(degree)) continue;
          std::optional<ExactMatrix> ref;
          for (auto& mid : inst.pieces_at(depth - 1)) {
            if (!omit_position(mid.components, shallow.components)) continue;
            if (!omit_position(deep.components, mid.components)) continue;
            ExactMatrix comp =
                inst.restriction(mid, deep, degree) * inst.restriction(shallow, mid, degree);
            if (!ref)
              ref = comp;
            else if (!(*ref == comp))
              issue(shallow.id + "->" + deep.id, "restriction paths disagree");
          }
        }
      }
    }
  }

  // Kaehler data: positivity of top self-products where Grams allow, and
  // agreement on double strata (global Hypothesis 2).
  rep.kahler_present = !inst.kahler.empty();
  if (rep.kahler_present) {
    rep.kahler_global = true;
    for (auto& piece : inst.pieces_at(1)) {
      auto w = kahler_on_piece(inst, piece);
      if (!w || w->rows != piece.rank(2)) {
        issue(piece.id, "kahler class missing or mis-shaped");
        continue;
      }
      // omega^{dim} trace must be positive.
      if (piece.dim_c >= 1 && piece.rank(2)) {
        ExactMatrix acc = *w;
        // Build omega^{dim-1} by repeated cup against the gram: only the
        // trace of the full power is checkable with stored data when
        // dim_c == 1, 2; for 3-folds use the degree-2 x degree-4 pairing of
        // omega with an omega^2 supplied through restrictions?  Positivity
        // here is checked where the instance supplies the needed grams:
        // surfaces (omega^2) and curves (degree) directly.
        if (piece.dim_c == 2) {
          ExactScalar v = inst.trace(piece, 2, *w, *w);
          auto s = v.sign();
          if (!s || *s <= 0) issue(piece.id, "kahler self-intersection not positive");
        }
        if (piece.dim_c == 1) {
          // degree of the class against the fundamental trace
          auto it = piece.coh.find(2);
          if (it != piece.coh.end() && piece.rank(0)) {
            ExactMatrix one(piece.rank(0), 1);
            one.at(0, 0) = ExactScalar::one();
            ExactScalar v = inst.trace(piece, 2, *w, one);
            auto s = v.sign();
            if (!s || *s <= 0) issue(piece.id, "kahler degree not positive");
          }
        }
      }
    }
    for (auto& piece : inst.pieces_at(2)) {
      // all parents must induce the same class for a global hypothesis
      std::optional<ExactMatrix> ref;
      for (auto& parent : inst.pieces_at(1)) {
        if (!omit_position(piece.components, parent.components)) continue;
        auto up = kahler_on_piece(inst, parent);
        if (!up) continue;
        if (piece.rank(2) == 0) continue;
        ExactMatrix w = inst.restriction(parent, piece, 2) * *up;
        if (!ref)
          ref = w;
        else if (!(*ref == w))
          rep.kahler_global = false;
      }
      if (ref && piece.dim_c == 2) {
        ExactScalar v = inst.trace(piece, 2, *ref, *ref);
        auto s = v.sign();
        if (!s || *s <= 0) issue(piece.id, "kahler restriction self-intersection not positive");
      }
    }
  }
  return rep;
}

}  // namespace lmhs
