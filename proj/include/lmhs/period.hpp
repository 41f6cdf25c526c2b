// The distance classifier: the potential polynomial of the untwisted volume
// section, the d / y^2 metric asymptote, the finite / infinite verdict, and
// the explanatory length witnesses.

#pragma once

#include "lmhs/asymptotic.hpp"
#include "lmhs/nilpotent.hpp"

#include <optional>
#include <string>

namespace lmhs {

struct PeriodGerm {
  ExactMatrix a0;      // nonzero column, the t -> 0 limit of the volume section
  NilpotentOp N;
  ExactMatrix qtilde;  // Gram of Qtilde = i^n Q on the ambient space
  RealStructure real;
};

struct PotentialAsymptote {
  AsymptoticScalar p;       // polynomial in y plus tail
  std::size_t degree = 0;   // = distance index d
  ExactScalar leading;      // = (2i)^d / d! Qtilde(N^d a0, conj a0)
};

// Qtilde(e^{zN} a(t), conj(e^{zN} a(t))) = p(y) + h with
// p(y) = sum_k (2 i y)^k / k! Qtilde(N^k a0, conj a0).
inline PotentialAsymptote potential_asymptote(const PeriodGerm& g) {
  if (g.a0.is_zero()) fail(Err::ZeroVector, "potential_asymptote: a0 = 0");
  std::size_t d = distance_index(g.a0, g.N);
  PotentialAsymptote out;
  out.degree = d;
  out.p.tail = true;
  ExactMatrix a0bar = g.real.apply(g.a0);
  ExactMatrix Nk = ExactMatrix::identity(g.N.dim());
  Rational fact = 1;
  ExactScalar two_i(GaussianRational(0, 2));
  ExactScalar pow = ExactScalar::one();
  for (std::size_t k = 0; k <= d; ++k) {
    if (k) {
      Nk = g.N.N * Nk;
      fact *= Rational(static_cast<long>(k));
      pow = pow * two_i;
    }
    ExactScalar coeff =
        pow * ExactScalar(Rational(1) / fact) * ((Nk * g.a0).transpose() * g.qtilde * a0bar).at(0, 0);
    if (!coeff.is_zero()) out.p.add_term({0, static_cast<int>(k)}, coeff);
    if (k == d) out.leading = coeff;
  }
  if (out.leading.is_zero())
    fail(Err::GramDegenerate, "potential_asymptote: Qtilde(N^d a0, conj a0) = 0");
  return out;
}

// -d_z d_zbar log Qtilde(...) at the symbolic leading-term level:
// d / y^2 + tail for d > 0, a pure tail for d = 0.
inline AsymptoticScalar metric_asymptote(const PotentialAsymptote& p) {
  if (p.degree == 0) return AsymptoticScalar::pure_tail();
  return AsymptoticScalar::monomial(ExactScalar(static_cast<long>(p.degree)), 0, -2, true);
}

enum class Distance { Infinite, Finite, FiniteConditional };

inline Distance classify_distance(std::size_t d, std::optional<bool> polarization_ok) {
  if (d > 0) return Distance::Infinite;
  if (polarization_ok && *polarization_ok) return Distance::Finite;
  return Distance::FiniteConditional;
}

inline std::string to_string(Distance d) {
  switch (d) {
    case Distance::Infinite: return "infinite";
    case Distance::Finite: return "finite";
    default: return "finite-conditional";
  }
}

struct LengthWitness {
  bool divergent = false;
  bool conditional = false;
  std::string integral;
};

inline LengthWitness length_witness(std::size_t d, Distance cls) {
  LengthWitness w;
  if (d > 0) {
    w.divergent = true;
    w.integral = "l(gamma) >= int_c^inf sqrt((" + std::to_string(d) + " - eps)/y^2) dy = inf";
  } else {
    w.divergent = false;
    w.conditional = cls == Distance::FiniteConditional;
    w.integral = "l(gamma) <= int_R^inf eps e^(-delta y/2) dy < inf";
    if (w.conditional) w.integral += " (conditional on the second Hodge-Riemann relation)";
  }
  return w;
}

// Built-in Jordan-profile germ: single block of size d+1 with a0 the top
// vector and Qtilde(N^d a0, conj a0) = d! / (2i)^d, so p(y) = y^d + ...
inline PeriodGerm jordan_block_germ(std::size_t d) {
  std::size_t n = d + 1;
  PeriodGerm g;
  g.N.center = 3;
  g.N.N = ExactMatrix(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.N.N.at(i + 1, i) = ExactScalar::one();
  g.a0 = ExactMatrix(n, 1);
  g.a0.at(0, 0) = ExactScalar::one();
  g.real = RealStructure::standard(n);
  g.qtilde = ExactMatrix(n, n);
  // Qtilde(e_d, e_0) = d!/(2i)^d; antisymmetrized counterpart for hygiene.
  ExactScalar v = ExactScalar::one();
  Rational fact = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    fact *= Rational(static_cast<long>(k));
    v = v / ExactScalar(GaussianRational(0, 2));
  }
  v = v * ExactScalar(fact);
  g.qtilde.at(d, 0) = v;
  if (d > 0) g.qtilde.at(0, d) = (d % 2) ? v : -v;
  return g;
}

}  // namespace lmhs
