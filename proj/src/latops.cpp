#include "latindex/latops.hpp"

#include <cmath>
#include <fstream>

#include "latindex/eig.hpp"

namespace latindex {

namespace {

LatticeOperator from_triplets(const LatticeSpace& space,
                              std::vector<Eigen::Triplet<cxd>>& trips,
                              bool hermitian) {
  LatticeOperator op;
  op.space = space;
  op.dim = space.dim;
  op.hermitian = hermitian;
  if (space.dim <= LatticeOperator::kDenseThreshold) {
    op.is_dense = true;
    op.mat = MatrixXcd::Zero(space.dim, space.dim);
    for (const auto& t : trips) op.mat(t.row(), t.col()) += t.value();
    if (hermitian &&
        (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff() >= 1e-12)
      throw Error("operator flagged hermitian is not");
  } else {
    op.is_dense = false;
    op.sp.resize(space.dim, space.dim);
    op.sp.setFromTriplets(trips.begin(), trips.end());
  }
  return op;
}

void add_block(std::vector<Eigen::Triplet<cxd>>& trips, const LatticeSpace& sp,
               int site_row, int site_col, const MatrixXcd& spinor,
               const MatrixXcd& color, cxd scale) {
  for (int s1 = 0; s1 < sp.spinor_dim; ++s1)
    for (int s2 = 0; s2 < sp.spinor_dim; ++s2) {
      const cxd sv = spinor(s1, s2);
      if (sv == cxd(0, 0)) continue;
      for (int c1 = 0; c1 < sp.Nc; ++c1)
        for (int c2 = 0; c2 < sp.Nc; ++c2) {
          const cxd cv = color(c1, c2);
          if (cv == cxd(0, 0)) continue;
          trips.emplace_back(sp.flat(site_row, s1, c1),
                             sp.flat(site_col, s2, c2), scale * sv * cv);
        }
    }
}

}  // namespace

int LatticeSpace::sites() const {
  int s = 1;
  for (int i = 0; i < n; ++i) s *= N;
  return s;
}

LatticeSpace make_space(const LinkField& lf, const GammaRep& rep) {
  if (rep.n != lf.n) throw DimensionMismatch("rep/link dimension mismatch");
  LatticeSpace sp;
  sp.N = lf.N;
  sp.a = lf.a;
  sp.n = lf.n;
  sp.spinor_dim = rep.spinor_dim;
  sp.Nc = lf.Nc;
  sp.dim = static_cast<long>(sp.sites()) * sp.spinor_dim * sp.Nc;
  return sp;
}

cxd lat_dot(const LatticeSpace& space, const VectorXcd& u, const VectorXcd& v) {
  return std::pow(space.a, space.n) * u.dot(v);
}

double lat_norm(const LatticeSpace& space, const VectorXcd& v) {
  return std::sqrt(std::pow(space.a, space.n)) * v.norm();
}

const MatrixXcd& LatticeOperator::dense() const {
  if (!is_dense) throw Error("operator stored sparse; use to_dense()");
  return mat;
}

MatrixXcd LatticeOperator::to_dense() const {
  if (is_dense) return mat;
  return MatrixXcd(sp);
}

LatticeOperator from_dense(const LatticeSpace& space, MatrixXcd m, bool hermitian) {
  LatticeOperator op;
  op.space = space;
  op.dim = m.rows();
  op.hermitian = hermitian;
  op.is_dense = true;
  op.mat = std::move(m);
  if (hermitian &&
      (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff() >= 1e-12)
    throw Error("operator flagged hermitian is not");
  return op;
}

VectorXcd apply(const LatticeOperator& op, const VectorXcd& v) {
  if (v.size() != op.dim) throw DimensionMismatch("apply: vector size mismatch");
  return op.is_dense ? VectorXcd(op.mat * v) : VectorXcd(op.sp * v);
}

LatticeOperator forward_diff(const LinkField& lf, const GammaRep& rep, int dir) {
  if (dir < 0 || dir >= lf.n) throw DimensionMismatch("direction out of range");
  LatticeSpace sp = make_space(lf, rep);
  const MatrixXcd id_s = MatrixXcd::Identity(sp.spinor_dim, sp.spinor_dim);
  const MatrixXcd id_c = MatrixXcd::Identity(sp.Nc, sp.Nc);
  std::vector<Eigen::Triplet<cxd>> trips;
  trips.reserve(static_cast<size_t>(sp.dim) * 2 * sp.spinor_dim * sp.Nc);
  const double inv_a = 1.0 / sp.a;
  for (int site = 0; site < sp.sites(); ++site) {
    const int fwd = lf.neighbor(site, dir, 1);
    add_block(trips, sp, site, fwd, id_s, lf.link(site, dir), inv_a);
    add_block(trips, sp, site, site, id_s, id_c, -inv_a);
  }
  return from_triplets(sp, trips, false);
}

LatticeOperator backward_diff(const LinkField& lf, const GammaRep& rep, int dir) {
  if (dir < 0 || dir >= lf.n) throw DimensionMismatch("direction out of range");
  LatticeSpace sp = make_space(lf, rep);
  const MatrixXcd id_s = MatrixXcd::Identity(sp.spinor_dim, sp.spinor_dim);
  const MatrixXcd id_c = MatrixXcd::Identity(sp.Nc, sp.Nc);
  std::vector<Eigen::Triplet<cxd>> trips;
  const double inv_a = 1.0 / sp.a;
  // nabla_i^* phi(z) = [U_i(z-e_i)^dag phi(z-e_i) - phi(z)] / a
  for (int site = 0; site < sp.sites(); ++site) {
    const int bwd = lf.neighbor(site, dir, -1);
    add_block(trips, sp, site, bwd, id_s, lf.link(bwd, dir).adjoint(), inv_a);
    add_block(trips, sp, site, site, id_s, id_c, -inv_a);
  }
  return from_triplets(sp, trips, false);
}

LatticeOperator wilson_term(const LinkField& lf, const GammaRep& rep) {
  LatticeSpace sp = make_space(lf, rep);
  const MatrixXcd id_s = MatrixXcd::Identity(sp.spinor_dim, sp.spinor_dim);
  const MatrixXcd id_c = MatrixXcd::Identity(sp.Nc, sp.Nc);
  std::vector<Eigen::Triplet<cxd>> trips;
  const double half_inv_a = 0.5 / sp.a;
  for (int site = 0; site < sp.sites(); ++site) {
    for (int dir = 0; dir < sp.n; ++dir) {
      const int fwd = lf.neighbor(site, dir, 1);
      const int bwd = lf.neighbor(site, dir, -1);
      add_block(trips, sp, site, fwd, id_s, lf.link(site, dir), -half_inv_a);
      add_block(trips, sp, site, bwd, id_s, lf.link(bwd, dir).adjoint(),
                -half_inv_a);
      add_block(trips, sp, site, site, id_s, id_c, 2.0 * half_inv_a);
    }
  }
  return from_triplets(sp, trips, true);
}

LatticeOperator naive_dirac(const LinkField& lf, const GammaRep& rep) {
  LatticeSpace sp = make_space(lf, rep);
  std::vector<Eigen::Triplet<cxd>> trips;
  const double half_inv_a = 0.5 / sp.a;
  for (int site = 0; site < sp.sites(); ++site) {
    for (int dir = 0; dir < sp.n; ++dir) {
      const MatrixXcd& c = rep.gammas[dir];
      const int fwd = lf.neighbor(site, dir, 1);
      const int bwd = lf.neighbor(site, dir, -1);
      // c_i (nabla_i - nabla_i^*)/2 = c_i [U phi(z+e) - U^dag phi(z-e)]/(2a)
      add_block(trips, sp, site, fwd, c, lf.link(site, dir), half_inv_a);
      add_block(trips, sp, site, bwd, c, lf.link(bwd, dir).adjoint(),
                -half_inv_a);
    }
  }
  return from_triplets(sp, trips, false);
}

LatticeOperator chirality_operator(const LatticeSpace& space, const GammaRep& rep) {
  if (!rep.has_chirality) throw OddDimension("no chirality operator for odd n");
  std::vector<Eigen::Triplet<cxd>> trips;
  const MatrixXcd id_c = MatrixXcd::Identity(space.Nc, space.Nc);
  for (int site = 0; site < space.sites(); ++site)
    for (int s1 = 0; s1 < space.spinor_dim; ++s1)
      for (int s2 = 0; s2 < space.spinor_dim; ++s2) {
        const cxd v = rep.chirality(s1, s2);
        if (v == cxd(0, 0)) continue;
        for (int c = 0; c < space.Nc; ++c)
          trips.emplace_back(space.flat(site, s1, c), space.flat(site, s2, c), v);
      }
  LatticeSpace sp = space;
  return from_triplets(sp, trips, true);
}

LatticeOperator wilson_dirac(const LinkField& lf, const GammaRep& rep, double m) {
  if (!rep.has_chirality)
    throw OddDimension("wilson_dirac requires even n (chirality needed)");
  LatticeSpace sp = make_space(lf, rep);
  MatrixXcd d = naive_dirac(lf, rep).to_dense();
  d += wilson_term(lf, rep).to_dense();
  d += m * MatrixXcd::Identity(sp.dim, sp.dim);
  MatrixXcd g = chirality_operator(sp, rep).to_dense();
  MatrixXcd h = g * d;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() >= 1e-12)
    throw Error("H_W(m) failed the hermiticity check");
  LatticeOperator op;
  op.space = sp;
  op.dim = sp.dim;
  op.hermitian = true;
  if (sp.dim <= LatticeOperator::kDenseThreshold) {
    op.is_dense = true;
    op.mat = std::move(h);
  } else {
    op.is_dense = false;
    op.sp = h.sparseView(1e-300);
  }
  return op;
}

MatrixXcd gauge_rotation_matrix(const LatticeSpace& space,
                                const std::vector<MatrixXcd>& g) {
  MatrixXcd rot = MatrixXcd::Zero(space.dim, space.dim);
  for (int site = 0; site < space.sites(); ++site)
    for (int s = 0; s < space.spinor_dim; ++s)
      for (int c1 = 0; c1 < space.Nc; ++c1)
        for (int c2 = 0; c2 < space.Nc; ++c2)
          rot(space.flat(site, s, c1), space.flat(site, s, c2)) = g[site](c1, c2);
  return rot;
}

double commutator_constant(const LinkField& lf, const GammaRep& rep) {
  double best = 0.0;
  std::vector<MatrixXcd> fwd(lf.n), bwd(lf.n);
  for (int i = 0; i < lf.n; ++i) {
    fwd[i] = forward_diff(lf, rep, i).to_dense();
    bwd[i] = backward_diff(lf, rep, i).to_dense();
  }
  for (int i = 0; i < lf.n; ++i)
    for (int j = i; j < lf.n; ++j) {
      best = std::max(best, operator_norm(fwd[i] * fwd[j] - fwd[j] * fwd[i]));
      best = std::max(best, operator_norm(fwd[i] * bwd[j] - bwd[j] * fwd[i]));
      best = std::max(best, operator_norm(bwd[i] * bwd[j] - bwd[j] * bwd[i]));
    }
  return best;
}

void export_matrix_market(const LatticeOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.precision(17);
  MatrixXcd m = op.to_dense();
  long nnz = 0;
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (m(i, j) != cxd(0, 0)) ++nnz;
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << m.rows() << " " << m.cols() << " " << nnz << "\n";
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (m(i, j) != cxd(0, 0))
        out << i + 1 << " " << j + 1 << " " << m(i, j).real() << " "
            << m(i, j).imag() << "\n";
}

}  // namespace latindex
