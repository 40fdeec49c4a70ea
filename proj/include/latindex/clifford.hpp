#ifndef LATINDEX_CLIFFORD_HPP
#define LATINDEX_CLIFFORD_HPP

#include <vector>

#include "latindex/types.hpp"

namespace latindex {

// Explicit Clifford generators c_i and, for even n, the grading gamma.
// All matrices are self-adjoint, unitary, and mutually anticommuting.
struct GammaRep {
  int n = 0;
  int spinor_dim = 1;
  std::vector<MatrixXcd> gammas;
  MatrixXcd chirality;  // valid only when has_chirality
  bool has_chirality = false;
};

// Fixed convention per dimension:
//   n=1: c_1 = [1] on a 1-dim spinor space.
//   n=2: c_1 = sigma_x, c_2 = sigma_y, gamma = -i c_1 c_2 = sigma_z.
//   n=3: c_i = sigma_i.
//   n=4: c_i = sigma_x (x) sigma_i (i=1..3), c_4 = sigma_y (x) id,
//        gamma = -c_1 c_2 c_3 c_4 = sigma_z (x) id.
GammaRep build_gamma_rep(int n);

}  // namespace latindex

#endif
