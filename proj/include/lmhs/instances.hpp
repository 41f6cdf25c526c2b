// Built-in instance generators: the conifold semistable model and the
// Hashimoto--Sano gluing, plus the small cohomology tables they are
// assembled from.  Tables are standard: P^1, genus-g curves, P^1 x P^1,
// quadric threefolds (b_2 = 1, line class generating H^4), (P^1)^3 with its
// triple-intersection form, and the (2,2,2) K3 with Picard rank 3 and a
// rank-19 transcendental part of signature (2,17).
//
// Trace values are stored as ExactScalar with twist equal to the complex
// dimension (one 2*pi per two real dimensions).

#pragma once

#include "lmhs/snc.hpp"

#include <string>
#include <vector>

namespace lmhs {

using CohModel = std::map<int, DegreeData>;

namespace models {

inline ExactScalar tw(long v, int k) { return ExactScalar(GaussianRational(v, 0), k); }
inline ExactScalar itw(long v, int k) { return ExactScalar(GaussianRational(0, v), k); }

inline DegreeData scalar_degree(int p, int q, const ExactScalar& pair_into_top) {
  DegreeData d;
  d.rank = 1;
  d.slices = {{p, q, 1}};
  d.conj = ExactMatrix::identity(1);
  d.gram = ExactMatrix(1, 1);
  d.gram.at(0, 0) = pair_into_top;
  return d;
}

inline CohModel point_model() {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 0));
  return m;
}

inline CohModel p1_model() {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 1));
  m[2] = scalar_degree(1, 1, tw(1, 1));
  return m;
}

// Genus-g curve: H^1 spanned by sigma_1..sigma_g, conj(sigma_1)..: the trace
// normalization tr(sigma wedge conj(sigma)) = -i (2 pi) makes i * tr > 0.
inline CohModel curve_model(std::size_t g) {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 1));
  m[2] = scalar_degree(1, 1, tw(1, 1));
  if (g > 0) {
    DegreeData d;
    d.rank = 2 * g;
    d.slices = {{1, 0, g}, {0, 1, g}};
    d.conj = ExactMatrix(2 * g, 2 * g);
    for (std::size_t j = 0; j < g; ++j) {
      d.conj.at(g + j, j) = ExactScalar::one();
      d.conj.at(j, g + j) = ExactScalar::one();
    }
    d.gram = ExactMatrix(2 * g, 2 * g);
    for (std::size_t j = 0; j < g; ++j) {
      d.gram.at(j, g + j) = itw(-1, 1);
      d.gram.at(g + j, j) = itw(1, 1);
    }
    m[1] = d;
  }
  return m;
}

// P^1 x P^1 with ruling classes f, s: tr(f cup s) = 1.
inline CohModel p1xp1_model() {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 2));
  DegreeData h2;
  h2.rank = 2;
  h2.slices = {{1, 1, 2}};
  h2.conj = ExactMatrix::identity(2);
  h2.gram = ExactMatrix(2, 2);
  h2.gram.at(0, 1) = tw(1, 2);
  h2.gram.at(1, 0) = tw(1, 2);
  m[2] = h2;
  m[4] = scalar_degree(2, 2, tw(1, 2));
  return m;
}

// Smooth quadric threefold in P^4: Picard rank one, H^4 generated by the
// line class l with tr(H cup l) = 1.
inline CohModel quadric3_model() {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 3));
  m[2] = scalar_degree(1, 1, tw(1, 3));
  m[4] = scalar_degree(2, 2, tw(1, 3));
  m[6] = scalar_degree(3, 3, tw(1, 3));
  return m;
}

// (P^1)^3 with H^2 basis h_1, h_2, h_3 and H^4 basis p_i = product of the
// other two h's, so tr(h_i cup p_j) = delta_ij.
inline CohModel p1cubed_model() {
  CohModel m;
  m[0] = scalar_degree(0, 0, tw(1, 3));
  DegreeData h2;
  h2.rank = 3;
  h2.slices = {{1, 1, 3}};
  h2.conj = ExactMatrix::identity(3);
  h2.gram = ExactMatrix::identity(3);
  for (auto& e : h2.gram.a)
    if (!e.is_zero()) e = tw(1, 3);
  m[2] = h2;
  DegreeData h4 = h2;
  h4.slices = {{2, 2, 3}};
  m[4] = h4;
  m[6] = scalar_degree(3, 3, tw(1, 3));
  return m;
}

// Triple products on (P^1)^3: h_i h_j h_k = 1 iff {i,j,k} = {1,2,3}.
inline long p1cubed_triple(std::size_t i, std::size_t j, std::size_t k) {
  return (i != j && j != k && i != k) ? 1 : 0;
}

// The Picard Gram of the (2,2,2) K3, re-derived from triple intersections:
// h_i . h_j on S = h_i h_j (2h_1 + 2h_2 + 2h_3) on (P^1)^3.
inline ExactMatrix k3_222_picard_gram() {
  ExactMatrix g(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      long v = 0;
      for (std::size_t k = 0; k < 3; ++k) v += 2 * p1cubed_triple(i, j, k);
      g.at(i, j) = ExactScalar(v);
    }
  return g;
}

// The (2,2,2) K3: H^2 of rank 22 ordered (sigma | h_1 h_2 h_3 t_1..t_17 |
// conj sigma); the transcendental part carries tr(t_a t_b) = -2 delta and
// tr(sigma conj sigma) = 2, signature (2,17) against the Picard (1,2).
struct K3Model222 {
  CohModel coh;
  static constexpr std::size_t rank = 22;
  static constexpr std::size_t ns_offset = 1;   // h-classes at 1..3
  static constexpr std::size_t t_offset = 4;    // t-classes at 4..20
  static constexpr std::size_t sigma = 0, sigma_bar = 21;
};

inline K3Model222 k3_222_model() {
  K3Model222 k;
  k.coh[0] = scalar_degree(0, 0, tw(1, 2));
  DegreeData h2;
  h2.rank = 22;
  h2.slices = {{2, 0, 1}, {1, 1, 20}, {0, 2, 1}};
  h2.conj = ExactMatrix::identity(22);
  h2.conj.at(0, 0) = ExactScalar::zero();
  h2.conj.at(21, 21) = ExactScalar::zero();
  h2.conj.at(21, 0) = ExactScalar::one();
  h2.conj.at(0, 21) = ExactScalar::one();
  h2.gram = ExactMatrix(22, 22);
  ExactMatrix picard = k3_222_picard_gram();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      h2.gram.at(1 + i, 1 + j) = picard.at(i, j) * tw(1, 2);
  for (std::size_t a = 0; a < 17; ++a) h2.gram.at(4 + a, 4 + a) = tw(-2, 2);
  h2.gram.at(0, 21) = tw(2, 2);
  h2.gram.at(21, 0) = tw(2, 2);
  k.coh[2] = h2;
  k.coh[4] = scalar_degree(2, 2, tw(1, 2));
  return k;
}

// H^3 block of i-normalized weight-three classes: basis (u_1..u_G | conj),
// tr(u_j cup conj u_k) = i delta (2 pi)^dim, plus an optional (3,0) line
// Omega with tr(Omega cup conj Omega) = -i (2 pi)^dim.
inline DegreeData weight3_block(std::size_t g21, bool with_30, int dim_c) {
  DegreeData d;
  std::size_t extra = with_30 ? 1 : 0;
  std::size_t n = 2 * g21 + 2 * extra;
  d.rank = n;
  d.slices.clear();
  if (with_30) d.slices.push_back({3, 0, 1});
  if (g21) d.slices.push_back({2, 1, g21});
  if (g21) d.slices.push_back({1, 2, g21});
  if (with_30) d.slices.push_back({0, 3, 1});
  d.conj = ExactMatrix(n, n);
  d.gram = ExactMatrix(n, n);
  std::size_t o30 = 0, o21 = extra, o12 = extra + g21, o03 = extra + 2 * g21;
  if (with_30) {
    d.conj.at(o03, o30) = ExactScalar::one();
    d.conj.at(o30, o03) = ExactScalar::one();
    d.gram.at(o30, o03) = itw(-1, dim_c);
    d.gram.at(o03, o30) = itw(1, dim_c);
  }
  for (std::size_t j = 0; j < g21; ++j) {
    d.conj.at(o12 + j, o21 + j) = ExactScalar::one();
    d.conj.at(o21 + j, o12 + j) = ExactScalar::one();
    d.gram.at(o21 + j, o12 + j) = itw(1, dim_c);
    d.gram.at(o12 + j, o21 + j) = itw(-1, dim_c);
  }
  return d;
}

}  // namespace models

// ---------------------------------------------------------------------------
// Conifold semistable model: central fiber Ytilde + quadrics Q_i, double
// strata E_i = P^1 x P^1, no deeper strata.

struct ConifoldSpec {
  std::size_t r = 2;                 // number of contracted curves
  std::size_t h2_rank = 1;           // rank of H^2(Y)
  std::size_t h21 = 1;               // h^{2,1}(Y)
  ExactMatrix curve_classes;         // h2_rank x r, [C_i] against the H^2 basis
  ExactMatrix relations;             // r x nu, columns m with curve_classes m = 0
};

inline ConifoldSpec default_conifold_spec(std::size_t r, std::size_t h2_rank = 1,
                                          std::size_t h21 = 1) {
  ConifoldSpec s;
  s.r = r;
  s.h2_rank = h2_rank;
  s.h21 = h21;
  s.curve_classes = ExactMatrix(h2_rank, r);
  for (std::size_t i = 0; i < r; ++i) s.curve_classes.at(0, i) = ExactScalar(1);
  s.relations = kernel(s.curve_classes);
  return s;
}

inline SncInstance conifold_instance(const ConifoldSpec& spec) {
  std::size_t r = spec.r, rho = spec.h2_rank;
  if (spec.curve_classes.rows != rho || spec.curve_classes.cols != r)
    fail(Err::Shape, "conifold: curve class matrix shape");
  for (std::size_t i = 0; i < r; ++i)
    if (spec.curve_classes.col(i).is_zero())
      fail(Err::FriedmanCondition, "conifold: curve class [C_i] = 0 is degenerate");
  if (!(spec.curve_classes * spec.relations).is_zero())
    fail(Err::FriedmanCondition, "conifold: relations are not relations");
  bool has_valid = false;
  for (std::size_t j = 0; j < spec.relations.cols && !has_valid; ++j) {
    bool all_nonzero = true;
    for (std::size_t i = 0; i < r; ++i)
      if (spec.relations.at(i, j).is_zero()) all_nonzero = false;
    if (all_nonzero) has_valid = true;
  }
  // A nonzero-everywhere relation may also arise as a combination.
  if (!has_valid && spec.relations.cols > 1) {
    ExactMatrix comb(r, 1);
    for (std::size_t j = 0; j < spec.relations.cols; ++j)
      comb = comb + ExactScalar(static_cast<long>(j + 1)) * spec.relations.col(j);
    has_valid = true;
    for (std::size_t i = 0; i < r; ++i)
      if (comb.at(i, 0).is_zero()) has_valid = false;
  }
  if (!has_valid)
    fail(Err::FriedmanCondition, "conifold: no relation with all m_i nonzero");

  SncInstance inst;
  inst.name = "conifold";
  inst.fiber_dim = 3;
  inst.num_components = static_cast<int>(1 + r);

  // Component 1: Ytilde, blow-up of Y along the curves.
  Piece yt;
  yt.id = "Ytilde";
  yt.components = {1};
  yt.dim_c = 3;
  {
    CohModel m;
    m[0] = models::scalar_degree(0, 0, models::tw(1, 3));
    m[6] = models::scalar_degree(3, 3, models::tw(1, 3));
    DegreeData h2;
    h2.rank = rho + r;
    h2.slices = {{1, 1, rho + r}};
    h2.conj = ExactMatrix::identity(rho + r);
    h2.gram = ExactMatrix(rho + r, rho + r);
    for (std::size_t i = 0; i < rho; ++i) h2.gram.at(i, i) = models::tw(1, 3);
    for (std::size_t k = 0; k < r; ++k) h2.gram.at(rho + k, rho + k) = models::tw(-1, 3);
    DegreeData h4 = h2;
    h4.slices = {{2, 2, rho + r}};
    m[2] = h2;
    m[4] = h4;
    m[3] = models::weight3_block(spec.h21, true, 3);
    yt.coh = std::move(m);
  }
  inst.strata[1].push_back(yt);

  for (std::size_t i = 0; i < r; ++i) {
    Piece q;
    q.id = "Q" + std::to_string(i + 1);
    q.components = {static_cast<int>(2 + i)};
    q.dim_c = 3;
    q.coh = models::quadric3_model();
    inst.strata[1].push_back(q);
  }
  for (std::size_t i = 0; i < r; ++i) {
    Piece e;
    e.id = "E" + std::to_string(i + 1);
    e.components = {1, static_cast<int>(2 + i)};
    e.dim_c = 2;
    e.coh = models::p1xp1_model();
    inst.strata[2].push_back(e);
  }

  // Restrictions.  Degree-2 from Ytilde: mu^* w_j -> (w_j . C_i) f,
  // E_l -> delta_{li} (-f - s).  From Q_i: H -> f + s.
  for (std::size_t i = 0; i < r; ++i) {
    std::string eid = "E" + std::to_string(i + 1);
    ExactMatrix r2(2, rho + r);
    for (std::size_t j = 0; j < rho; ++j) r2.at(0, j) = spec.curve_classes.at(j, i);
    r2.at(0, rho + i) = ExactScalar(-1);
    r2.at(1, rho + i) = ExactScalar(-1);
    inst.restrictions[{"Ytilde", eid, 2}] = r2;
    ExactMatrix r4(1, rho + r);
    r4.at(0, rho + i) = ExactScalar(-1);  // tr(F_k cup E_i) = -delta
    inst.restrictions[{"Ytilde", eid, 4}] = r4;
    ExactMatrix r0(1, 1);
    r0.at(0, 0) = ExactScalar(1);
    inst.restrictions[{"Ytilde", eid, 0}] = r0;

    std::string qid = "Q" + std::to_string(i + 1);
    ExactMatrix q2(2, 1);
    q2.at(0, 0) = ExactScalar(1);
    q2.at(1, 0) = ExactScalar(1);
    inst.restrictions[{qid, eid, 2}] = q2;
    ExactMatrix q4(1, 1);
    q4.at(0, 0) = ExactScalar(1);  // tr(l cup H) = 1
    inst.restrictions[{qid, eid, 4}] = q4;
    inst.restrictions[{qid, eid, 0}] = r0;
  }

  // Kaehler data: ample-ish classes; the E_i classes are stored explicitly
  // (f + s, the quadric side) and the per-component classes restrict
  // positively; an exactly matching global class does not exist here, which
  // validation reports through the kahler_global flag.
  {
    ExactMatrix wy(rho + r, 1);
    for (std::size_t j = 0; j < rho; ++j) wy.at(j, 0) = ExactScalar(2);
    for (std::size_t k = 0; k < r; ++k) wy.at(rho + k, 0) = ExactScalar(-1);
    inst.kahler["Ytilde"] = wy;
    for (std::size_t i = 0; i < r; ++i) {
      ExactMatrix wq(1, 1);
      wq.at(0, 0) = ExactScalar(1);
      inst.kahler["Q" + std::to_string(i + 1)] = wq;
      ExactMatrix we(2, 1);
      we.at(0, 0) = ExactScalar(1);
      we.at(1, 0) = ExactScalar(1);
      inst.kahler["E" + std::to_string(i + 1)] = we;
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Hashimoto--Sano: X_1 (blow-up of (P^1)^3 along a+1 curves on the (2,2,2)
// K3) glued to X_2 = (P^1)^3 along the K3 via the a-th power of the
// composite cover involution.

// The displayed matrix of iota_a on Pic(S): the (1,3) entry is 4a^2 + 2a,
// forced by the isometry property of the (2,2,2) Gram and by the power
// recurrence of the a = 1 action h3 -> 6 h1 - 2 h2 + 3 h3.
inline ExactMatrix iota_matrix(long a) {
  ExactMatrix m = ExactMatrix::identity(3);
  m.at(0, 1) = ExactScalar(4 * a * a - 2 * a);
  m.at(0, 2) = ExactScalar(4 * a * a + 2 * a);
  m.at(1, 1) = ExactScalar(1 - 2 * a);
  m.at(1, 2) = ExactScalar(-2 * a);
  m.at(2, 1) = ExactScalar(2 * a);
  m.at(2, 2) = ExactScalar(1 + 2 * a);
  return m;
}

// Class of the last blown-up curve C on S.
inline ExactMatrix hs_curve_class(long a) {
  ExactMatrix c(3, 1);
  c.at(0, 0) = ExactScalar(16 * a * a - a + 4);
  c.at(1, 0) = ExactScalar(4 - 8 * a);
  c.at(2, 0) = ExactScalar(4 + 8 * a);
  return c;
}

// Genus of a curve of class v on the K3: v.v/2 + 1.
inline std::size_t hs_curve_genus(long a) {
  ExactMatrix v = hs_curve_class(a);
  ExactMatrix g = models::k3_222_picard_gram();
  ExactScalar vv = (v.transpose() * g * v).at(0, 0);
  Rational q = vv.coeff.re / 2 + 1;
  return static_cast<std::size_t>(numerator(q).convert_to<long>());
}

inline SncInstance hashimoto_sano_instance(long a) {
  if (a < 1) fail(Err::Shape, "hashimoto_sano_instance needs a >= 1");
  std::size_t gC = hs_curve_genus(a);
  std::size_t G = static_cast<std::size_t>(a) + gC;  // total genus blown up

  SncInstance inst;
  inst.name = "hashimoto-sano";
  inst.fiber_dim = 3;
  inst.num_components = 2;

  Piece x1;
  x1.id = "X1";
  x1.components = {1};
  x1.dim_c = 3;
  {
    CohModel m;
    m[0] = models::scalar_degree(0, 0, models::tw(1, 3));
    m[6] = models::scalar_degree(3, 3, models::tw(1, 3));
    std::size_t n2 = 3 + static_cast<std::size_t>(a) + 1;
    DegreeData h2;
    h2.rank = n2;
    h2.slices = {{1, 1, n2}};
    h2.conj = ExactMatrix::identity(n2);
    h2.gram = ExactMatrix(n2, n2);
    for (std::size_t i = 0; i < 3; ++i) h2.gram.at(i, i) = models::tw(1, 3);
    for (std::size_t k = 3; k < n2; ++k) h2.gram.at(k, k) = models::tw(-1, 3);
    DegreeData h4 = h2;
    h4.slices = {{2, 2, n2}};
    m[2] = h2;
    m[4] = h4;
    m[3] = models::weight3_block(G, false, 3);
    x1.coh = std::move(m);
  }
  inst.strata[1].push_back(x1);

  Piece x2;
  x2.id = "X2";
  x2.components = {2};
  x2.dim_c = 3;
  x2.coh = models::p1cubed_model();
  inst.strata[1].push_back(x2);

  Piece s;
  s.id = "S";
  s.components = {1, 2};
  s.dim_c = 2;
  s.coh = models::k3_222_model().coh;
  inst.strata[2].push_back(s);

  // Restrictions into S (rows ordered sigma | h t | conj sigma).
  auto embed_ns = [](const ExactMatrix& cols3) {
    ExactMatrix out(22, cols3.cols);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < cols3.cols; ++j) out.at(1 + i, j) = cols3.at(i, j);
    return out;
  };
  ExactMatrix M = iota_matrix(a);
  {
    std::size_t n2 = 3 + static_cast<std::size_t>(a) + 1;
    // Restriction of H^2(X1) in S_1 coordinates: pullbacks -> h_j,
    // E_k -> [C_k] = h_1, E -> [C]; the gluing identifies the stratum with
    // S inside X_2, so classes transport through (iota_a^{-1})^*.  This is
    // what makes the two normal classes cancel: (2,2,2)-(a,0,0)-[C] equals
    // -iota_a^*(2,2,2), the d-semistability of the pushout.
    ExactMatrix naive(3, n2);
    for (std::size_t j = 0; j < 3; ++j) naive.at(j, j) = ExactScalar::one();
    for (std::size_t k = 0; k < static_cast<std::size_t>(a); ++k)
      naive.at(0, 3 + k) = ExactScalar::one();
    ExactMatrix cC = hs_curve_class(a);
    for (std::size_t j = 0; j < 3; ++j) naive.at(j, 3 + static_cast<std::size_t>(a)) = cC.at(j, 0);
    inst.restrictions[{"X1", "S", 2}] = embed_ns(inverse(M) * naive);

    // Degree 4 restriction through trace duality against [S_1] =
    // mu^*(2,2,2) - sum E_k - E: tr_S r(u) = tr_{X1}(u cup [S1]).
    ExactMatrix r4(1, n2);
    for (std::size_t j = 0; j < 3; ++j) r4.at(0, j) = ExactScalar(2);
    for (std::size_t k = 3; k < n2; ++k) r4.at(0, k) = ExactScalar(1);
    inst.restrictions[{"X1", "S", 4}] = r4;
    ExactMatrix r0(1, 1);
    r0.at(0, 0) = ExactScalar(1);
    inst.restrictions[{"X1", "S", 0}] = r0;
  }
  {
    ExactMatrix r2(3, 3);
    for (std::size_t j = 0; j < 3; ++j) r2.at(j, j) = ExactScalar::one();
    inst.restrictions[{"X2", "S", 2}] = embed_ns(r2);
    ExactMatrix r4(1, 3);
    for (std::size_t j = 0; j < 3; ++j) r4.at(0, j) = ExactScalar(2);  // p_i . (2,2,2) = 2
    inst.restrictions[{"X2", "S", 4}] = r4;
    ExactMatrix r0(1, 1);
    r0.at(0, 0) = ExactScalar(1);
    inst.restrictions[{"X2", "S", 0}] = r0;
  }

  // Kaehler data: omega_2 = h_1 + h_2 + h_3 on X2, matched exactly on S by
  // the pullback class mu^*(iota_a(1,1,1)) on X1.
  {
    ExactMatrix b(3, 1);
    for (std::size_t j = 0; j < 3; ++j) b.at(j, 0) = ExactScalar::one();
    inst.kahler["X2"] = b;
    ExactMatrix c = M * b;
    std::size_t n2 = 3 + static_cast<std::size_t>(a) + 1;
    ExactMatrix w1(n2, 1);
    for (std::size_t j = 0; j < 3; ++j) w1.at(j, 0) = c.at(j, 0);
    inst.kahler["X1"] = w1;
  }
  return inst;
}

}  // namespace lmhs
