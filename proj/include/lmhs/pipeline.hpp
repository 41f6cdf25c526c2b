// End-to-end analysis of an SNC instance: E1 pages, graded pieces, the
// assembled limiting mixed Hodge structure on the middle cohomology, the
// adapted frame, and the distance / ddbar / polarization verdicts.

#pragma once

#include "lmhs/frames.hpp"
#include "lmhs/instances.hpp"
#include "lmhs/period.hpp"
#include "lmhs/steenbrink.hpp"

namespace lmhs {

struct MiddleAnalysis {
  SncInstance inst;
  ValidationReport validation;
  DegreePage page;              // middle degree
  AssembledMiddle middle;
  DeligneSplitting splitting;
  bool gr3_polarized = false;
  bool gr4_positive = false;
  LimitFrameSpec frame_spec;
  AsymptoticFrame frame;        // untwisted
  DdbarResult ddbar;
  PolarizationResult polarization;
  PeriodGerm germ;
  PotentialAsymptote potential;
  AsymptoticScalar metric;
  Distance distance = Distance::FiniteConditional;
  LengthWitness witness;
};

// The deepest Hodge piece of the splitting spans the a0 line.
inline ExactMatrix deepest_line(const DeligneSplitting& S) {
  for (int p = 4; p >= 0; --p)
    for (auto& [pq, piece] : S.pieces)
      if (pq.first == p && piece.cols) return piece.col(0);
  fail(Err::Shape, "splitting has no pieces");
}

inline MiddleAnalysis analyze_middle(SncInstance instance) {
  MiddleAnalysis out;
  out.inst = std::move(instance);
  out.validation = validate_instance(out.inst);
  if (!out.validation.ok()) fail(Err::Validation, "instance fails validation");
  int n = out.inst.fiber_dim;
  out.page = e1_page(out.inst, n);
  out.middle = assemble_middle(out.inst, out.page);
  out.splitting = assembled_splitting(out.middle);
  out.gr3_polarized = gr3_polarization(out.inst, out.page).verdict;
  out.gr4_positive = gr4_positivity(out.inst, out.page).verdict;

  out.frame_spec = adapted_basis(out.splitting, out.middle.N, out.middle.Q, out.middle.mhs.real);
  out.frame = untwist(canonical_frame(out.frame_spec));
  out.ddbar = ddbar_wedge_verdict(out.frame);
  out.polarization = polarization_verdict(out.frame);

  out.germ.a0 = out.inst.a0 ? *out.inst.a0 : deepest_line(out.splitting);
  out.germ.N = NilpotentOp{out.middle.N, n};
  out.germ.real = out.middle.mhs.real;
  // Qtilde = i^n Q on the assembled middle.
  out.germ.qtilde = ExactScalar(i_power(n)) * out.middle.Q;
  out.potential = potential_asymptote(out.germ);
  out.metric = metric_asymptote(out.potential);
  out.distance = classify_distance(out.potential.degree, out.polarization.verdict);
  out.witness = length_witness(out.potential.degree, out.distance);
  return out;
}

}  // namespace lmhs
