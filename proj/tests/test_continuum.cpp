// Truncated continuum reference operators.  Both basis constructions have
// fully explicit spectra (plane-wave dispersion, oscillator ladder), so
// the operator matrices are checked eigenvalue by eigenvalue, and the
// basis functions are checked for orthonormality by direct quadrature.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "latindex/continuum.hpp"
#include "latindex/eig.hpp"

using namespace latindex;

namespace {

constexpr double kPi = 3.14159265358979323846;

ConnectionDescriptor flux_desc(int Q) {
  ConnectionDescriptor d;
  d.kind = Q == 0 ? ConnectionKind::Trivial : ConnectionKind::U1Flux;
  d.n = 2;
  d.flux = Q;
  return d;
}

}  // namespace

TEST_CASE("plane-wave operator reproduces the free dispersion") {
  GammaRep rep = build_gamma_rep(2);
  const int K = 3;
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, K);
  REQUIRE(cs.n_scalars() == (2 * K + 1) * (2 * K + 1));
  REQUIRE(cs.dim() == 2 * cs.n_scalars());
  for (double m : {0.0, 0.45}) {
    VectorXd got = eigvalsh(continuum_dirac(cs, rep, m));
    std::vector<double> want;
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        double p2 = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2);
        double lam = std::sqrt(p2 + m * m);
        want.push_back(lam);
        want.push_back(-lam);
      }
    std::sort(want.begin(), want.end());
    REQUIRE(static_cast<long>(want.size()) == got.size());
    for (long i = 0; i < got.size(); ++i)
      CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-10).scale(1.0));
  }
  CHECK(continuum_index(flux_desc(0), rep, K) == 0);
}

TEST_CASE("flux operator reproduces the relativistic Landau levels") {
  GammaRep rep = build_gamma_rep(2);
  for (int Q : {1, -2, 3}) {
    CAPTURE(Q);
    ContinuumSpace cs = make_continuum_space(flux_desc(Q), rep, 4);
    const int aQ = std::abs(Q);
    const int L = cs.levels;
    const double omega = 2.0 * kPi * aQ;
    CHECK(cs.omega == doctest::Approx(omega).epsilon(1e-14));
    CHECK(cs.tau == (Q > 0 ? 1 : -1));
    // |Q| sectors, each carrying levels 0..L on one chirality and
    // 0..L-1 on the other
    REQUIRE(cs.dim() == static_cast<long>(aQ) * (2 * L + 1));

    MatrixXcd H = continuum_dirac(cs, rep, 0.0);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    VectorXd got = eigvalsh(H);

    // expected: |Q| exact zero modes, then +-sqrt(2 omega l) for
    // l = 1..L, each |Q|-fold
    std::vector<double> want(aQ, 0.0);
    for (int l = 1; l <= L; ++l) {
      double lam = std::sqrt(2.0 * omega * l);
      for (int r = 0; r < aQ; ++r) {
        want.push_back(lam);
        want.push_back(-lam);
      }
    }
    std::sort(want.begin(), want.end());
    REQUIRE(static_cast<long>(want.size()) == got.size());
    for (long i = 0; i < got.size(); ++i)
      CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-9).scale(1.0));

    // every zero mode is chiral with chirality sign(Q), so the index is Q
    CHECK(continuum_index(flux_desc(Q), rep, 4) == Q);
  }
}

TEST_CASE("massive flux spectrum shifts by the mass in quadrature") {
  GammaRep rep = build_gamma_rep(2);
  ContinuumSpace cs = make_continuum_space(flux_desc(1), rep, 3);
  const double m = 0.6, omega = 2.0 * kPi;
  VectorXd got = eigvalsh(continuum_dirac(cs, rep, m));
  std::vector<double> want{cs.tau * m};  // the would-be zero mode sits at tau m
  for (int l = 1; l <= cs.levels; ++l) {
    double lam = std::sqrt(2.0 * omega * l + m * m);
    want.push_back(lam);
    want.push_back(-lam);
  }
  std::sort(want.begin(), want.end());
  REQUIRE(static_cast<long>(want.size()) == got.size());
  for (long i = 0; i < got.size(); ++i)
    CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("scalar basis functions are orthonormal under quadrature") {
  GammaRep rep = build_gamma_rep(2);
  for (int Q : {0, 1, -2}) {
    CAPTURE(Q);
    ConnectionDescriptor d = flux_desc(Q);
    int K = Q == 0 ? 2 : 3;
    ContinuumSpace cs = make_continuum_space(d, rep, K);
    const long ns = cs.n_scalars();
    // uniform grid quadrature; the integrands are trigonometric
    // polynomials times Gaussians narrow on this scale, so a modest grid
    // is spectrally accurate
    const int G = 96;
    MatrixXcd gram = MatrixXcd::Zero(ns, ns);
    VectorXd x(2);
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        x << (i + 0.5) / G, (j + 0.5) / G;
        VectorXcd b = evaluate_scalar_basis(cs, x);
        gram += (b * b.adjoint()).conjugate() / (G * G);
      }
    CHECK((gram - MatrixXcd::Identity(ns, ns)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("chirality matrix is diagonal, unitary, and anticommutes at m = 0") {
  GammaRep rep = build_gamma_rep(2);
  ContinuumSpace cs = make_continuum_space(flux_desc(2), rep, 3);
  MatrixXcd g = continuum_chirality(cs, rep);
  CHECK((g * g - MatrixXcd::Identity(cs.dim(), cs.dim())).cwiseAbs().maxCoeff() < 1e-14);
  MatrixXcd H = continuum_dirac(cs, rep, 0.0);
  // gamma D anticommutes with gamma; the truncation respects this because
  // the ladder only couples opposite chiralities
  CHECK((g * H + H * g).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a smooth perturbation moves eigenvalues but not the index") {
  GammaRep rep = build_gamma_rep(2);
  ConnectionDescriptor d = flux_desc(1);
  d.kind = ConnectionKind::U1FluxPlusSmooth;
  FourierMode fm;
  fm.direction = 1;
  fm.wave = {1, 0, 0, 0};
  fm.amplitude = 0.3;
  d.perturbation = {fm};
  const int K = 5;
  GammaRep r = rep;
  ContinuumSpace cs0 = make_continuum_space(flux_desc(1), r, K);
  ContinuumSpace cs = make_continuum_space(d, r, K);
  VectorXd e0 = eigvalsh(continuum_dirac(cs0, r, 0.0));
  VectorXd e1 = eigvalsh(continuum_dirac(cs, r, 0.0));
  CHECK((e0 - e1).cwiseAbs().maxCoeff() > 1e-6);  // the perturbation acts
  CHECK(continuum_index(d, r, K) == 1);           // the index does not move

  // perturbations too rough for the truncation are rejected
  ConnectionDescriptor rough = d;
  rough.perturbation[0].wave = {2 * K, 0, 0, 0};
  CHECK_THROWS_AS(make_continuum_space(rough, r, K), RoughBackground);
}
