#ifndef LATINDEX_EIG_HPP
#define LATINDEX_EIG_HPP

#include "latindex/types.hpp"

namespace latindex {

// Eigenvalues of a Hermitian matrix, ascending.
VectorXd eigvalsh(const MatrixXcd& H);

// Full eigendecomposition of a Hermitian matrix; columns of V are
// orthonormal eigenvectors matching the ascending eigenvalues.
void eigh(const MatrixXcd& H, VectorXd& evals, MatrixXcd& evecs);

// Largest singular value.
double operator_norm(const MatrixXcd& M);

// Smallest |eigenvalue| of a Hermitian matrix.  Uses a full solve below
// `dense_cutoff`, otherwise an LDL^T factorization with inverse iteration
// on H^{-2}.  The factorization is done in place: `H` is destroyed.
double min_abs_eig_inplace(MatrixXcd& H, int dense_cutoff = 2048);

}  // namespace latindex

#endif
