#include "latindex/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latindex/eig.hpp"

namespace latindex {

namespace {

constexpr double kPi = std::numbers::pi;

void check_perturbation_band(const ConnectionDescriptor& desc, int K) {
  for (const auto& mode : desc.perturbation)
    for (int i = 0; i < desc.n; ++i)
      if (2 * std::abs(mode.wave[i]) > K)
        throw RoughBackground(
            "perturbation Fourier mode beyond K/2; raise the cutoff");
}

// Normalized Hermite functions psi_0..psi_L at v, via the scaled
// recurrence psi_{l+1} = v sqrt(2/(l+1)) psi_l - sqrt(l/(l+1)) psi_{l-1}.
// The Gaussian prefactor is carried as a separate log scale so large |v|
// does not underflow the high levels near their turning points.
void hermite_functions(int L, double v, std::vector<double>& out) {
  out.assign(L + 1, 0.0);
  double log_scale = -0.5 * v * v;  // actual = stored * exp(log_scale)
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  for (int l = 0; l <= L; ++l) {
    if (log_scale > -700.0) out[l] = cur * std::exp(log_scale);
    const double next =
        v * std::sqrt(2.0 / (l + 1)) * cur - std::sqrt(double(l) / (l + 1)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e250) {
      prev *= 1e-250;
      cur *= 1e-250;
      log_scale += 250.0 * std::log(10.0);
    }
  }
}

bool needs_landau(const ConnectionDescriptor& desc) {
  return (desc.kind == ConnectionKind::U1Flux ||
          desc.kind == ConnectionKind::U1FluxPlusSmooth) &&
         desc.flux != 0;
}

// Hermitian matrix elements of the perturbation components alpha_i in the
// scalar basis, by uniform quadrature over the torus (the integrands are
// smooth and periodic, so the trapezoid rule converges spectrally).
std::vector<MatrixXcd> perturbation_scalar_elements(const ContinuumSpace& space) {
  const int G = std::max(48, 6 * space.K + 8);
  const long S = space.n_scalars();
  MatrixXcd basis(static_cast<long>(G) * G, S);
  std::vector<MatrixXd> alpha(space.n, MatrixXd(G, G));
  VectorXd x(2);
  for (int ix = 0; ix < G; ++ix)
    for (int iy = 0; iy < G; ++iy) {
      x(0) = (ix + 0.5) / G;
      x(1) = (iy + 0.5) / G;
      basis.row(static_cast<long>(ix) * G + iy) =
          evaluate_scalar_basis(space, x).transpose();
      for (int i = 0; i < space.n; ++i)
        alpha[i](ix, iy) = perturbation_alpha(space.desc.perturbation, i, x);
    }
  const double w = 1.0 / (static_cast<double>(G) * G);
  std::vector<MatrixXcd> P(space.n);
  for (int i = 0; i < space.n; ++i) {
    VectorXd diag(static_cast<long>(G) * G);
    for (int ix = 0; ix < G; ++ix)
      for (int iy = 0; iy < G; ++iy)
        diag(static_cast<long>(ix) * G + iy) = w * alpha[i](ix, iy);
    P[i] = basis.adjoint() * diag.asDiagonal() * basis;
    P[i] = 0.5 * (P[i] + P[i].adjoint().eval());
  }
  return P;
}

}  // namespace

long ContinuumSpace::n_scalars() const {
  return kind == BasisKind::PlaneWave ? static_cast<long>(modes.size())
                                      : static_cast<long>(scalars.size());
}

ContinuumSpace make_continuum_space(const ConnectionDescriptor& desc,
                                    const GammaRep& rep, int K) {
  validate(desc);
  if (desc.kind == ConnectionKind::External)
    throw UnsupportedBackground("external tables have no continuum basis");
  if (!rep.has_chirality)
    throw OddDimension("continuum reference requires even n");
  if (rep.n != desc.n) throw DimensionMismatch("rep/descriptor dimension");
  if (K < 1) throw InvalidDescriptor("cutoff K must be >= 1");
  check_perturbation_band(desc, K);

  ContinuumSpace sp;
  sp.desc = desc;
  sp.n = desc.n;
  sp.spinor_dim = rep.spinor_dim;
  sp.K = K;

  if (!needs_landau(desc)) {
    sp.kind = BasisKind::PlaneWave;
    std::array<int, 4> k{{0, 0, 0, 0}};
    // lexicographic enumeration of |k_i| <= K
    const int side = 2 * K + 1;
    long total = 1;
    for (int i = 0; i < sp.n; ++i) total *= side;
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      for (int i = sp.n - 1; i >= 0; --i) {
        k[i] = static_cast<int>(rem % side) - K;
        rem /= side;
      }
      sp.modes.push_back(k);
    }
    for (int mu = 0; mu < static_cast<int>(sp.modes.size()); ++mu)
      for (int s = 0; s < sp.spinor_dim; ++s) sp.entries.emplace_back(mu, s);
    return sp;
  }

  if (desc.n != 2) throw UnsupportedBackground("flux backgrounds are 2d");
  const int Q = desc.flux;
  sp.kind = BasisKind::Landau;
  sp.sectors = std::abs(Q);
  sp.tau = Q > 0 ? 1 : -1;
  sp.omega = 2.0 * kPi * std::abs(Q);
  const long side2 = static_cast<long>(2 * K + 1) * (2 * K + 1);
  sp.levels = static_cast<int>((side2 + sp.sectors - 1) / sp.sectors);
  for (int r = 0; r < sp.sectors; ++r)
    for (int l = 0; l <= sp.levels; ++l) sp.scalars.push_back({r, l});
  // spin 0 carries chirality +1 in the fixed gamma convention
  const int spin_tau = sp.tau > 0 ? 0 : 1;
  for (int r = 0; r < sp.sectors; ++r)
    for (int l = 0; l <= sp.levels; ++l) {
      const int sc = r * (sp.levels + 1) + l;
      sp.entries.emplace_back(sc, spin_tau);
      if (l < sp.levels) sp.entries.emplace_back(sc, 1 - spin_tau);
    }
  return sp;
}

void add_continuum_dirac(const ContinuumSpace& space, const GammaRep& rep,
                         double m, MatrixXcd& out, long off) {
  const long dim = space.dim();
  if (out.rows() < off + dim || out.cols() < off + dim)
    throw DimensionMismatch("target block too small");
  const MatrixXcd& g = rep.chirality;

  if (space.kind == BasisKind::PlaneWave) {
    std::vector<MatrixXcd> gc(space.n);
    for (int i = 0; i < space.n; ++i) gc[i] = g * rep.gammas[i];
    const int sd = space.spinor_dim;
    // diagonal-in-momentum part gamma (sum_i c_i 2 pi i k_i + m)
    for (long mu = 0; mu < static_cast<long>(space.modes.size()); ++mu) {
      MatrixXcd blk = m * g;
      for (int i = 0; i < space.n; ++i)
        blk += cxd(0, 2.0 * kPi * space.modes[mu][i]) * gc[i];
      for (int s1 = 0; s1 < sd; ++s1)
        for (int s2 = 0; s2 < sd; ++s2)
          out(off + mu * sd + s1, off + mu * sd + s2) += blk(s1, s2);
    }
    // perturbation: nabla_i = d_i - i alpha_i couples k -> k +- wave
    for (const auto& pm : space.desc.perturbation) {
      const MatrixXcd blk = cxd(0, -0.5 * pm.amplitude) * gc[pm.direction];
      for (long mu = 0; mu < static_cast<long>(space.modes.size()); ++mu) {
        for (int sgn : {+1, -1}) {
          std::array<int, 4> kp = space.modes[mu];
          bool ok = true;
          for (int i = 0; i < space.n; ++i) {
            kp[i] += sgn * pm.wave[i];
            if (std::abs(kp[i]) > space.K) ok = false;
          }
          if (!ok) continue;
          long nu = 0;
          for (int i = 0; i < space.n; ++i)
            nu = nu * (2 * space.K + 1) + (kp[i] + space.K);
          const cxd phase = std::exp(cxd(0, sgn * pm.phase));
          for (int s1 = 0; s1 < sd; ++s1)
            for (int s2 = 0; s2 < sd; ++s2)
              out(off + nu * sd + s1, off + mu * sd + s2) += phase * blk(s1, s2);
        }
      }
    }
    return;
  }

  // Landau ladder.  Entry lookup within a sector: chirality-tau level l
  // and opposite-chirality level l share the pair (2l, 2l+1) offsets.
  const int L = space.levels;
  const int per_sector = 2 * L + 1;
  auto idx_tau = [&](int r, int l) {
    return off + static_cast<long>(r) * per_sector + 2 * l;
  };
  auto idx_opp = [&](int r, int l) {
    return off + static_cast<long>(r) * per_sector + 2 * l + 1;
  };
  for (int r = 0; r < space.sectors; ++r) {
    for (int l = 0; l <= L; ++l) out(idx_tau(r, l), idx_tau(r, l)) += space.tau * m;
    for (int l = 0; l < L; ++l) out(idx_opp(r, l), idx_opp(r, l)) += -space.tau * m;
    for (int l = 0; l < L; ++l) {
      // gamma D couples (tau, l+1) with (-tau, l); sign depends on tau
      const double c = -space.tau * std::sqrt(2.0 * space.omega * (l + 1));
      out(idx_tau(r, l + 1), idx_opp(r, l)) += c;
      out(idx_opp(r, l), idx_tau(r, l + 1)) += c;
    }
  }
  if (!space.desc.perturbation.empty()) {
    const auto P = perturbation_scalar_elements(space);
    std::vector<MatrixXcd> gc(space.n);
    for (int i = 0; i < space.n; ++i) gc[i] = g * rep.gammas[i];
    for (long a = 0; a < dim; ++a)
      for (long b = 0; b < dim; ++b) {
        const auto [sa, spa] = space.entries[a];
        const auto [sb, spb] = space.entries[b];
        cxd v(0, 0);
        for (int i = 0; i < space.n; ++i)
          v += gc[i](spa, spb) * cxd(0, -1) * P[i](sa, sb);
        out(off + a, off + b) += v;
      }
  }
}

MatrixXcd continuum_dirac(const ContinuumSpace& space, const GammaRep& rep,
                          double m) {
  MatrixXcd out = MatrixXcd::Zero(space.dim(), space.dim());
  add_continuum_dirac(space, rep, m, out);
  return out;
}

MatrixXcd continuum_chirality(const ContinuumSpace& space, const GammaRep& rep) {
  MatrixXcd g = MatrixXcd::Zero(space.dim(), space.dim());
  for (long a = 0; a < space.dim(); ++a)
    g(a, a) = rep.chirality(space.entries[a].second, space.entries[a].second);
  return g;
}

VectorXcd evaluate_scalar_basis(const ContinuumSpace& space, const VectorXd& x) {
  if (x.size() != space.n) throw DimensionMismatch("point dimension");
  VectorXcd out = VectorXcd::Zero(space.n_scalars());
  if (space.kind == BasisKind::PlaneWave) {
    for (long mu = 0; mu < static_cast<long>(space.modes.size()); ++mu) {
      double ph = 0.0;
      for (int i = 0; i < space.n; ++i) ph += space.modes[mu][i] * x(i);
      out(mu) = std::exp(cxd(0, 2.0 * kPi * ph));
    }
    return out;
  }
  const int L = space.levels;
  const int Q = space.desc.flux;
  const double sw = std::sqrt(space.omega);
  const double reach = (std::sqrt(2.0 * L + 1.0) + 8.0) / sw;
  const double x1 = x(0) - std::floor(x(0)), x2 = x(1) - std::floor(x(1));
  std::vector<double> psi;
  const double norm = std::pow(space.omega, 0.25);
  for (int r = 0; r < space.sectors; ++r) {
    const double off = static_cast<double>(r) / Q;
    const int s_lo = static_cast<int>(std::floor(off - x1 - reach));
    const int s_hi = static_cast<int>(std::ceil(off - x1 + reach));
    for (int s = s_lo; s <= s_hi; ++s) {
      const double v = sw * (x1 + s - off);
      hermite_functions(L, v, psi);
      const cxd phase =
          norm * std::exp(cxd(0, 2.0 * kPi * (r - static_cast<double>(s) * Q) * x2));
      for (int l = 0; l <= L; ++l)
        out(static_cast<long>(r) * (L + 1) + l) += phase * psi[l];
    }
  }
  return out;
}

int continuum_index(const ConnectionDescriptor& desc, const GammaRep& rep,
                    int K, double zero_tol) {
  ContinuumSpace sp = make_continuum_space(desc, rep, K);
  MatrixXcd H = continuum_dirac(sp, rep, 0.0);
  VectorXd evals;
  MatrixXcd evecs;
  eigh(H, evals, evecs);
  std::vector<long> kernel;
  for (long i = 0; i < evals.size(); ++i) {
    const double av = std::abs(evals(i));
    if (av < zero_tol)
      kernel.push_back(i);
    else if (av < 10.0 * zero_tol)
      throw AmbiguousKernel("eigenvalue in the tolerance shadow zone");
  }
  if (kernel.empty()) return 0;
  MatrixXcd g = continuum_chirality(sp, rep);
  MatrixXcd phi(H.rows(), static_cast<long>(kernel.size()));
  for (size_t j = 0; j < kernel.size(); ++j) phi.col(j) = evecs.col(kernel[j]);
  // rotate the (possibly degenerate) kernel to a chirality eigenbasis
  MatrixXcd gk = phi.adjoint() * g * phi;
  VectorXd chi;
  MatrixXcd rot;
  eigh(gk, chi, rot);
  int index = 0;
  for (long j = 0; j < chi.size(); ++j) {
    if (std::abs(chi(j)) <= 0.99)
      throw AmbiguousKernel("near-zero mode without definite chirality");
    index += chi(j) > 0 ? 1 : -1;
  }
  return index;
}

}  // namespace latindex
