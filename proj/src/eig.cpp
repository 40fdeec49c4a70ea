#include "latindex/eig.hpp"

#include <random>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace latindex {

namespace {
lapack_complex_double* lp(MatrixXcd& m) {
  return reinterpret_cast<lapack_complex_double*>(m.data());
}
}  // namespace

VectorXd eigvalsh(const MatrixXcd& H) {
  MatrixXcd A = H;
  const lapack_int n = static_cast<lapack_int>(A.rows());
  VectorXd w(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, lp(A), n, w.data());
  if (info != 0) throw Error("zheevd failed, info=" + std::to_string(info));
  return w;
}

void eigh(const MatrixXcd& H, VectorXd& evals, MatrixXcd& evecs) {
  evecs = H;
  const lapack_int n = static_cast<lapack_int>(evecs.rows());
  evals.resize(n);
  lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lp(evecs), n, evals.data());
  if (info != 0) throw Error("zheevd failed, info=" + std::to_string(info));
}

double operator_norm(const MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  MatrixXcd G = M.adjoint() * M;
  VectorXd w = eigvalsh(G);
  double top = w(w.size() - 1);
  return top > 0 ? std::sqrt(top) : 0.0;
}

double min_abs_eig_inplace(MatrixXcd& H, int dense_cutoff) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  if (n <= dense_cutoff) {
    return eigvalsh(H).cwiseAbs().minCoeff();
  }

  std::vector<lapack_int> ipiv(n);
  lapack_int info =
      LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', n, lp(H), n, ipiv.data());
  if (info > 0) return 0.0;  // exactly singular pivot
  if (info < 0) throw Error("zhetrf failed, info=" + std::to_string(info));

  // Inverse iteration on H^{-2}; the Rayleigh quotient converges to
  // 1/min(lambda)^2 regardless of the sign of the extremal eigenvalue.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd x(n, 1);
  for (lapack_int i = 0; i < n; ++i) x(i, 0) = cxd(gauss(rng), gauss(rng));
  x /= x.norm();

  double prev = 0.0;
  for (int it = 0; it < 100; ++it) {
    MatrixXcd y = x;
    info = LAPACKE_zhetrs(LAPACK_COL_MAJOR, 'L', n, 1, lp(H), n, ipiv.data(),
                          lp(y), n);
    if (info != 0) throw Error("zhetrs failed");
    MatrixXcd z = y;
    info = LAPACKE_zhetrs(LAPACK_COL_MAJOR, 'L', n, 1, lp(H), n, ipiv.data(),
                          lp(z), n);
    if (info != 0) throw Error("zhetrs failed");
    double mu = std::abs((x.col(0).adjoint() * z.col(0))(0, 0));  // x^† H^{-2} x
    double nz = z.norm();
    if (nz == 0.0 || !std::isfinite(nz)) return 0.0;
    x = z / nz;
    if (it > 3 && std::abs(mu - prev) < 1e-8 * mu) {
      prev = mu;
      break;
    }
    prev = mu;
  }
  if (prev <= 0.0) return 0.0;
  return 1.0 / std::sqrt(prev);
}

}  // namespace latindex
