#ifndef LATINDEX_OVERLAP_HPP
#define LATINDEX_OVERLAP_HPP

#include "latindex/clifford.hpp"
#include "latindex/gauge.hpp"
#include "latindex/latops.hpp"
#include "latindex/types.hpp"

namespace latindex {

// Overlap operator D_ov = (1/a)[id + gamma sgn(H_W(-M))] and the index
// density Gamma = gamma/2 - sgn(H_W(-M))/2.
struct OverlapOperator {
  LatticeSpace space;
  double M = 1.0;
  double min_abs_eig_HW = 0.0;
  MatrixXcd D_ov;
  MatrixXcd Gamma;
  MatrixXcd gamma;  // chirality on the full space
};

// sgn computed by full eigendecomposition of H_W(-M).
OverlapOperator build_overlap(const LinkField& lf, const GammaRep& rep,
                              double M);

// round(Tr Gamma); the trace must sit within 1e-8 of an integer.
int overlap_index(const OverlapOperator& ov);

// max-norm residual of gamma D + D gamma - a D gamma D; also checks the
// equivalent unitary form: u = id - a D_ov satisfies gamma u gamma = u^{-1}.
double gw_residual(const OverlapOperator& ov);

// Negative control: rebuild with the lowest sign zeroed out, breaking
// the involution property of sgn(H_W).
OverlapOperator corrupt_sign(const LinkField& lf, const GammaRep& rep, double M);

}  // namespace latindex

#endif
