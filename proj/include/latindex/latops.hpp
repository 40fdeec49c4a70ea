#ifndef LATINDEX_LATOPS_HPP
#define LATINDEX_LATOPS_HPP

#include <string>
#include <vector>

#include "latindex/clifford.hpp"
#include "latindex/gauge.hpp"
#include "latindex/types.hpp"

namespace latindex {

// Flat indexing of the lattice Hilbert space: site-major,
// flat = (site * spinor_dim + s) * Nc + c with sites lexicographic
// (z_0 slowest).  The inner product carries the a^n volume weight;
// matrices are stored unweighted (the weight is a scalar, so spectra
// and Hermiticity are unaffected).
struct LatticeSpace {
  int N = 0;
  double a = 0.0;
  int n = 0;
  int spinor_dim = 1;
  int Nc = 1;
  long dim = 0;

  int sites() const;
  long flat(int site, int s, int c) const {
    return (static_cast<long>(site) * spinor_dim + s) * Nc + c;
  }
};

LatticeSpace make_space(const LinkField& lf, const GammaRep& rep);

// Volume-weighted lattice inner product and norm.
cxd lat_dot(const LatticeSpace& space, const VectorXcd& u, const VectorXcd& v);
double lat_norm(const LatticeSpace& space, const VectorXcd& v);

// Dense below the storage threshold, sparse above it.
struct LatticeOperator {
  LatticeSpace space;
  long dim = 0;
  bool hermitian = false;
  bool is_dense = true;
  MatrixXcd mat;
  SparseMat sp;

  static constexpr long kDenseThreshold = 8192;

  const MatrixXcd& dense() const;
  MatrixXcd to_dense() const;
};

LatticeOperator from_dense(const LatticeSpace& space, MatrixXcd m,
                           bool hermitian = false);

VectorXcd apply(const LatticeOperator& op, const VectorXcd& v);

// Forward covariant difference (U_i(z) phi(z+e_i a) - phi(z)) / a.
LatticeOperator forward_diff(const LinkField& lf, const GammaRep& rep, int dir);
// Its adjoint (w.r.t. the volume-weighted product, which equals the
// plain matrix adjoint).
LatticeOperator backward_diff(const LinkField& lf, const GammaRep& rep, int dir);

// W = sum_i W_i with W_i = -(nabla_i + nabla_i^*)/2; semi-positive.
LatticeOperator wilson_term(const LinkField& lf, const GammaRep& rep);

// Skew-adjoint naive Dirac operator D_a = sum_i c_i (nabla_i - nabla_i^*)/2.
LatticeOperator naive_dirac(const LinkField& lf, const GammaRep& rep);

// Hermitian massive Wilson operator H_W(m) = gamma (D_a + W + m).
LatticeOperator wilson_dirac(const LinkField& lf, const GammaRep& rep, double m);

// gamma as an operator on the full lattice space (even n only).
LatticeOperator chirality_operator(const LatticeSpace& space, const GammaRep& rep);

// Block-diagonal per-site unitary implementing a gauge transformation on
// the full space (identity on spinor).
MatrixXcd gauge_rotation_matrix(const LatticeSpace& space,
                                const std::vector<MatrixXcd>& g);

// Sampled estimate of the commutator constant: max over i<=j of
// ||[grad_i, grad_j]||, ||[grad_i, grad_j^*]||, ||[grad_i^*, grad_j^*]||.
double commutator_constant(const LinkField& lf, const GammaRep& rep);

void export_matrix_market(const LatticeOperator& op, const std::string& path);

}  // namespace latindex

#endif
