#include "latindex/clifford.hpp"

namespace latindex {

namespace {
MatrixXcd pauli(int i) {
  MatrixXcd s(2, 2);
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cxd(0, -1), cxd(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

MatrixXcd kron(const MatrixXcd& A, const MatrixXcd& B) {
  MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}
}  // namespace

GammaRep build_gamma_rep(int n) {
  if (n < 1 || n > 4)
    throw UnsupportedDimension("build_gamma_rep: n must be in [1,4], got " +
                               std::to_string(n));
  GammaRep rep;
  rep.n = n;
  switch (n) {
    case 1:
      rep.spinor_dim = 1;
      rep.gammas = {MatrixXcd::Ones(1, 1)};
      break;
    case 2:
      rep.spinor_dim = 2;
      rep.gammas = {pauli(1), pauli(2)};
      rep.chirality = cxd(0, -1) * rep.gammas[0] * rep.gammas[1];
      rep.has_chirality = true;
      break;
    case 3:
      rep.spinor_dim = 2;
      rep.gammas = {pauli(1), pauli(2), pauli(3)};
      break;
    case 4: {
      rep.spinor_dim = 4;
      MatrixXcd id2 = MatrixXcd::Identity(2, 2);
      rep.gammas = {kron(pauli(1), pauli(1)), kron(pauli(1), pauli(2)),
                    kron(pauli(1), pauli(3)), kron(pauli(2), id2)};
      rep.chirality =
          -rep.gammas[0] * rep.gammas[1] * rep.gammas[2] * rep.gammas[3];
      rep.has_chirality = true;
      break;
    }
  }
  return rep;
}

}  // namespace latindex
