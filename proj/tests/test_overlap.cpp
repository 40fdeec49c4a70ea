// Overlap operator: Ginsparg-Wilson relation, integer index density
// trace, agreement with the flow-side index, and a corrupted-sign
// negative control that must visibly break both.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "latindex/overlap.hpp"
#include "latindex/spectral.hpp"

using namespace latindex;

namespace {

LinkField background(int Q, int N) {
  ConnectionDescriptor d;
  d.kind = Q == 0 ? ConnectionKind::Trivial : ConnectionKind::U1Flux;
  d.n = 2;
  d.flux = Q;
  return discretize(make_generalized_link(d), N);
}

}  // namespace

TEST_CASE("overlap index equals the charge and satisfies Ginsparg-Wilson") {
  GammaRep rep = build_gamma_rep(2);
  for (int Q : {0, 1, -2, 3}) {
    CAPTURE(Q);
    LinkField lf = background(Q, 10);
    OverlapOperator ov = build_overlap(lf, rep, 1.0);
    CHECK(ov.min_abs_eig_HW > 1e-6);
    CHECK(overlap_index(ov) == Q);
    CHECK(gw_residual(ov) < 1e-9);
    // same integer as the flow-side definition
    CHECK(overlap_index(ov) == wilson_index(lf, rep, 1.0));
  }
}

TEST_CASE("unitarity of the reflection u = id - a D_ov") {
  GammaRep rep = build_gamma_rep(2);
  LinkField lf = background(1, 8);
  OverlapOperator ov = build_overlap(lf, rep, 1.0);
  const long d = ov.D_ov.rows();
  MatrixXcd u = MatrixXcd::Identity(d, d) - lf.a * ov.D_ov;
  CHECK((u * u.adjoint() - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-11);
  // index density is Hermitian with near-integer trace
  CHECK((ov.Gamma - ov.Gamma.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(std::abs(std::imag(ov.Gamma.trace())) < 1e-10);
}

TEST_CASE("eigenvalues of a D_ov lie on the unit circle through 1") {
  GammaRep rep = build_gamma_rep(2);
  LinkField lf = background(-1, 8);
  OverlapOperator ov = build_overlap(lf, rep, 1.0);
  Eigen::ComplexEigenSolver<MatrixXcd> es(lf.a * ov.D_ov);
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    cxd z = es.eigenvalues()(i);
    CHECK(std::abs(std::abs(z - cxd(1, 0)) - 1.0) < 1e-9);
  }
}

TEST_CASE("corrupting one sign breaks the relation and shifts the trace") {
  GammaRep rep = build_gamma_rep(2);
  LinkField lf = background(1, 8);
  OverlapOperator good = build_overlap(lf, rep, 1.0);
  OverlapOperator bad = corrupt_sign(lf, rep, 1.0);
  CHECK(gw_residual(bad) > 0.1);
  // zeroing the lowest sign moves Tr Gamma by exactly 1/2
  double shift = std::real(bad.Gamma.trace() - good.Gamma.trace());
  CHECK(std::abs(std::abs(shift) - 0.5) < 1e-8);
}

TEST_CASE("gauge transforms leave the overlap index fixed") {
  GammaRep rep = build_gamma_rep(2);
  LinkField lf = background(2, 8);
  for (unsigned long seed : {11ul, 12ul}) {
    LinkField lg = gauge_transform(lf, random_gauge(lf, seed));
    OverlapOperator ov = build_overlap(lg, rep, 1.0);
    CHECK(overlap_index(ov) == 2);
    CHECK(gw_residual(ov) < 1e-9);
  }
}
