#ifndef LATINDEX_CONTINUUM_HPP
#define LATINDEX_CONTINUUM_HPP

#include <array>
#include <utility>
#include <vector>

#include "latindex/clifford.hpp"
#include "latindex/gauge.hpp"
#include "latindex/types.hpp"

namespace latindex {

// Truncated continuum reference space.  Two basis constructions:
//
//  PlaneWave (flux 0): scalar modes e^{2 pi i k.x}, |k_i| <= K; a smooth
//  perturbation couples modes through its finite Fourier data.
//
//  Landau (flux Q != 0 on T^2): magnetic Bloch sectors r = 0..|Q|-1 in the
//  fixed gauge alpha = (0, 2 pi Q x_1) with section gluing
//  phi(x_1+1, x_2) = e^{2 pi i Q x_2} phi(x_1, x_2).  Unfolding the gluing
//  turns each sector into an oscillator line; with omega = 2 pi |Q| and
//  tau = sign(Q) the scalar basis is
//    phi_{r,l}(x) = omega^{1/4} sum_s psi_l(sqrt(omega)(x_1+s-r/Q))
//                   e^{2 pi i (r - s Q) x_2}
//  (psi_l = normalized Hermite functions) and gamma(D) is an explicit
//  ladder matrix with eigenvalues +-sqrt(2 omega l).  Levels are truncated
//  asymmetrically (one extra level on the chirality tau side) so every
//  nonzero pair is complete and the kernel of the truncation equals the
//  true kernel: |Q| modes of chirality tau.
enum class BasisKind { PlaneWave, Landau };

struct ContinuumSpace {
  ConnectionDescriptor desc;
  int n = 2;
  int spinor_dim = 2;
  int K = 0;
  BasisKind kind = BasisKind::PlaneWave;

  // plane-wave scalar modes
  std::vector<std::array<int, 4>> modes;

  // Landau data; levels = L means chirality-tau carries l = 0..L and the
  // opposite chirality l = 0..L-1
  int sectors = 0;
  int levels = 0;
  int tau = 1;
  double omega = 0.0;
  std::vector<std::array<int, 2>> scalars;  // (sector, level)

  // full basis: (scalar index, spinor component)
  std::vector<std::pair<int, int>> entries;

  long n_scalars() const;
  long dim() const { return static_cast<long>(entries.size()); }
};

ContinuumSpace make_continuum_space(const ConnectionDescriptor& desc,
                                    const GammaRep& rep, int K);

// Adds gamma (D + m) into the square block of `out` starting at (off, off);
// the block must be pre-zeroed and large enough.
void add_continuum_dirac(const ContinuumSpace& space, const GammaRep& rep,
                         double m, MatrixXcd& out, long off = 0);
MatrixXcd continuum_dirac(const ContinuumSpace& space, const GammaRep& rep,
                          double m);

// Diagonal chirality matrix on the truncated basis.
MatrixXcd continuum_chirality(const ContinuumSpace& space, const GammaRep& rep);

// Values of every scalar basis function at a point x on the torus.
VectorXcd evaluate_scalar_basis(const ContinuumSpace& space, const VectorXd& x);

// trace of gamma on the numerical kernel of gamma D.  Near-zero modes are
// rotated to a chirality eigenbasis inside the kernel subspace; each must
// then be chiral to |<phi,gamma phi>| > 0.99.
int continuum_index(const ConnectionDescriptor& desc, const GammaRep& rep,
                    int K, double zero_tol = 1e-6);

}  // namespace latindex

#endif
