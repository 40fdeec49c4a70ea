#ifndef LATINDEX_INTERP_HPP
#define LATINDEX_INTERP_HPP

#include <vector>

#include "latindex/clifford.hpp"
#include "latindex/continuum.hpp"
#include "latindex/gauge.hpp"
#include "latindex/latops.hpp"
#include "latindex/types.hpp"

namespace latindex {

// Per-axis tent cutoff of width a on the unit circle, normalized to unit
// integral, and its product over axes.
double tent_cutoff(double a, double t);
double cutoff_rho(double a, const VectorXd& x);

// max_x |a^n sum_z rho_a(x - z) - 1| over `samples` random points.
double partition_residual(int N, int n, int samples, unsigned long seed = 7u);

// quadrature value of int rho_a(x - z) d^n x (should be 1).
double cutoff_mass(int N, int n, int pts_per_axis = 64);

// a^n sum_{e in {-1,0,1}^n} int rho_a(x) rho_a(x - a e) d^n x (should be 1;
// the sum must run over the whole shift hypercube, not only the axis
// neighbors, for the product tent profile in n >= 2).
double vertex_overlap_identity(int N, int n, int pts_per_axis = 64);

// Matrix realizations of the maps between the lattice space and a
// truncated continuum basis:
//   (f_a phi)_mu = sum_z Fs[mu, z] phi(z, spin_mu),
//   Fs[mu, z] = a^n Int rho_a(x - z) conj(b_mu(x)) U(x, z) d^n x,
// with b_mu the scalar basis functions.  A is the same map between
// plain-l2 coordinate vectors (lattice side rescaled by a^{n/2}) so that
// f_a* is literally A^dagger and block operators are Hermitian.
struct InterpMaps {
  ContinuumSpace cspace;
  LatticeSpace lspace;
  MatrixXcd Fs;  // n_scalars x sites
  MatrixXcd A;   // continuum dim x lattice dim
};

// quad_pts_per_axis = 0 picks the smallest adequate tensor Gauss rule
// (at least 8, more when the cutoff K oscillates fast across one cell).
InterpMaps build_maps(const GeneralizedLink& link, const GammaRep& rep,
                      const ContinuumSpace& cspace, int N,
                      int quad_pts_per_axis = 0);

struct FBoundsReport {
  std::vector<int> Ns;
  std::vector<double> op_norms;        // ||f_a|| per N
  std::vector<double> residual_sq;     // mean ||(f_a* f_a - id) v||^2 per N
  double residual_slope = 0.0;         // d log residual_sq / d log a
  std::vector<std::vector<double>> recon_errors;  // per psi, per N
  bool recon_monotone = false;
};

// Uniform boundedness of f_a, the O(a) decay of the f_a* f_a residual on
// lattice fields pulled back from band-limited sections, and the L2
// convergence f_a f_a* psi -> psi.
FBoundsReport check_f_bounds(const GeneralizedLink& link, const GammaRep& rep,
                             const ContinuumSpace& cspace,
                             const std::vector<int>& Ns, int n_psi = 10,
                             unsigned long seed = 11u);

struct DiracConvergenceReport {
  std::vector<int> Ns;
  std::vector<double> errors;  // mean ||f_a D_{W,a}* f_a* psi - D* psi||
  double fitted_order = 0.0;
};

DiracConvergenceReport check_dirac_convergence(const GeneralizedLink& link,
                                               const GammaRep& rep,
                                               const ContinuumSpace& cspace,
                                               const std::vector<int>& Ns,
                                               int n_psi = 5,
                                               unsigned long seed = 13u);

// Smallest |eigenvalue| of the combined operator
//   H_com(m, t) = ( -H_W(m)   t A^dag  )
//                 (  t A      gamma(D + m) )
// at one parameter point.  With bounded_transform the continuum block is
// passed through h -> h / sqrt(h^2 + M0^2).
double combined_min_eig(const InterpMaps& maps, const GammaRep& rep,
                        const LinkField& lf, double m, double t,
                        bool bounded_transform = false, double M0 = 1.0);

struct GapSample {
  double m = 0.0;
  double t = 0.0;
  double gap = 0.0;
};

struct GapReport {
  std::vector<GapSample> samples;
  double min_gap = 0.0;
};

// Scans the staple region {(m, 1): m in [-M, M]} U {(+-M, t): t in [0, 1]}
// and throws GapClosed if any sampled gap falls below gap_tol.
GapReport staple_gap_scan(const InterpMaps& maps, const GammaRep& rep,
                          const LinkField& lf, double M, int m_samples,
                          int t_samples, double gap_tol = 0.05,
                          bool bounded_transform = false, double M0 = 1.0);

}  // namespace latindex

#endif
