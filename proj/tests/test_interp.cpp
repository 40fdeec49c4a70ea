// Interpolation maps between lattice and continuum.  The cutoff profile
// has exact integral identities; the maps themselves are checked for
// near-isometry on band-limited data and for the expected behavior of
// the combined two-block operator.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "latindex/eig.hpp"
#include "latindex/interp.hpp"

using namespace latindex;

namespace {

ConnectionDescriptor flux_desc(int Q) {
  ConnectionDescriptor d;
  d.kind = Q == 0 ? ConnectionKind::Trivial : ConnectionKind::U1Flux;
  d.n = 2;
  d.flux = Q;
  return d;
}

}  // namespace

TEST_CASE("tent cutoff: normalization, support, partition of unity") {
  const double a = 0.125;
  // unit integral by quadrature
  const int P = 4096;
  double mass = 0.0;
  for (int p = 0; p < P; ++p) mass += tent_cutoff(a, -2 * a + 4 * a * (p + 0.5) / P) * 4 * a / P;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tent_cutoff(a, 1.5 * a) == 0.0);
  CHECK(tent_cutoff(a, 0.0) == doctest::Approx(1.0 / a).epsilon(1e-14));
  // periodic wrap: distance measured on the circle
  CHECK(tent_cutoff(a, 1.0 - 0.25 * a) == doctest::Approx(tent_cutoff(a, 0.25 * a)).epsilon(1e-12));

  CHECK(partition_residual(8, 2, 200) < 1e-12);
  CHECK(partition_residual(5, 1, 200) < 1e-12);
  CHECK(cutoff_mass(8, 2) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("vertex overlap identity sums to one over the full shift cube") {
  CHECK(vertex_overlap_identity(8, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(vertex_overlap_identity(8, 2) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(vertex_overlap_identity(6, 3, 32) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("interpolation maps are contractions with isometric limit") {
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(0));
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, 8);
  FBoundsReport rep8 = check_f_bounds(link, rep, cs, {4, 8}, 6);
  for (double nrm : rep8.op_norms) CHECK(nrm < 1.0 + 1e-9);
  REQUIRE(rep8.residual_sq.size() == 2);
  CHECK(rep8.residual_sq[1] < rep8.residual_sq[0]);
  CHECK(rep8.recon_monotone);
}

TEST_CASE("a constant section is reproduced exactly") {
  // the k = 0 plane-wave scalar is resolved by any lattice: f_a* followed
  // by f_a must return it up to quadrature error only
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(0));
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, 2);
  InterpMaps maps = build_maps(link, rep, cs, 6);
  // locate the k = 0 scalar
  long k0 = -1;
  for (long s = 0; s < cs.n_scalars(); ++s)
    if (cs.modes[s][0] == 0 && cs.modes[s][1] == 0) k0 = s;
  REQUIRE(k0 >= 0);
  VectorXcd psi = VectorXcd::Zero(cs.dim());
  for (long e = 0; e < cs.dim(); ++e)
    if (cs.entries[e].first == k0 && cs.entries[e].second == 0) psi(e) = 1.0;
  VectorXcd back = maps.A * (maps.A.adjoint() * psi);
  CHECK((back - psi).norm() < 1e-3);
}

TEST_CASE("lattice Wilson action converges to the continuum action") {
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(0));
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, 8);
  DiracConvergenceReport dr = check_dirac_convergence(link, rep, cs, {4, 8, 16}, 3);
  REQUIRE(dr.errors.size() == 3);
  CHECK(dr.errors[2] < dr.errors[0]);
  CHECK(dr.fitted_order > 0.5);
}

TEST_CASE("explicitly coarse quadrature is rejected, auto order accepted") {
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(0));
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, 16);
  CHECK_THROWS_AS(build_maps(link, rep, cs, 4, 2), QuadratureTooCoarse);
  InterpMaps maps = build_maps(link, rep, cs, 4);  // auto picks an adequate rule
  CHECK(operator_norm(maps.A) < 1.0 + 1e-9);
}

TEST_CASE("combined operator is gapped on the staple, gapless at the corner") {
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(0));
  ContinuumSpace cs = make_continuum_space(flux_desc(0), rep, 4);
  LinkField lf = discretize(link, 4);
  InterpMaps maps = build_maps(link, rep, cs, 4);
  // decoupled massless corner: both blocks have kernels
  CHECK(combined_min_eig(maps, rep, lf, 0.0, 0.0) < 1e-10);
  // coupling at t = 1 opens a gap
  double g = combined_min_eig(maps, rep, lf, 0.0, 1.0);
  CHECK(g > 0.05);
  // and the scan over the staple reports a positive floor
  GapReport gr = staple_gap_scan(maps, rep, lf, 1.0, 3, 2, 0.01);
  CHECK(gr.min_gap > 0.01);
  CHECK(gr.samples.size() >= 5);
}

TEST_CASE("flux background maps keep the norm bound") {
  GammaRep rep = build_gamma_rep(2);
  GeneralizedLink link = make_generalized_link(flux_desc(1));
  ContinuumSpace cs = make_continuum_space(flux_desc(1), rep, 8);
  InterpMaps maps = build_maps(link, rep, cs, 8);
  CHECK(operator_norm(maps.A) < 1.0 + 1e-9);
  // a pulled-back lowest-level mode keeps most of its norm
  VectorXcd psi = VectorXcd::Zero(cs.dim());
  for (long e = 0; e < cs.dim(); ++e)
    if (cs.scalars[cs.entries[e].first][1] == 0) psi(e) = 1.0;
  psi.normalize();
  VectorXcd lat = maps.A.adjoint() * psi;
  CHECK(lat.norm() > 0.5);
  CHECK(lat.norm() < 1.0 + 1e-9);
}
