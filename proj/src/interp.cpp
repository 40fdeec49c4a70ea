#include "latindex/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "latindex/eig.hpp"

namespace latindex {

namespace {

// Gauss-Legendre nodes/weights on [0, 1] by Golub-Welsch.
void gauss_rule(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(q);
  weights.resize(q);
  for (int i = 0; i < q; ++i) {
    nodes[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    weights[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

int site_of(const std::vector<int>& z, int N, int n) {
  int s = 0;
  for (int i = 0; i < n; ++i) {
    int zi = ((z[i] % N) + N) % N;
    s = s * N + zi;
  }
  return s;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random coefficient vector supported on the low-energy continuum modes
// (plane waves |k|_inf <= 1, Landau levels l <= 3), unit norm.
VectorXcd band_limited_psi(const ContinuumSpace& cs, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXcd psi = VectorXcd::Zero(cs.dim());
  for (long e = 0; e < cs.dim(); ++e) {
    const int sc = cs.entries[e].first;
    bool low = false;
    if (cs.kind == BasisKind::PlaneWave) {
      low = true;
      for (int i = 0; i < cs.n; ++i)
        if (std::abs(cs.modes[sc][i]) > 1) low = false;
    } else {
      low = cs.scalars[sc][1] <= 3;
    }
    if (low) psi(e) = cxd(gauss(rng), gauss(rng));
  }
  const double nrm = psi.norm();
  if (nrm == 0) throw Error("empty band-limited subspace");
  return psi / nrm;
}

}  // namespace

double tent_cutoff(double a, double t) {
  t -= std::floor(t);
  return std::max({0.0, 1.0 - t / a, 1.0 - (1.0 - t) / a}) / a;
}

double cutoff_rho(double a, const VectorXd& x) {
  double v = 1.0;
  for (long i = 0; i < x.size(); ++i) v *= tent_cutoff(a, x(i));
  return v;
}

double partition_residual(int N, int n, int samples, unsigned long seed) {
  const double a = 1.0 / N;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  std::vector<int> z(n);
  for (int s = 0; s < samples; ++s) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = uni(rng);
    double sum = 0.0;
    // only the 2^n surrounding sites contribute
    for (int combo = 0; combo < (1 << n); ++combo) {
      double rho = 1.0;
      for (int i = 0; i < n; ++i) {
        z[i] = static_cast<int>(std::floor(x(i) * N)) + ((combo >> i) & 1);
        rho *= tent_cutoff(a, x(i) - z[i] * a);
      }
      sum += rho;
    }
    worst = std::max(worst, std::abs(std::pow(a, n) * sum - 1.0));
  }
  return worst;
}

double cutoff_mass(int N, int n, int pts_per_axis) {
  const double a = 1.0 / N;
  // exact per-axis quadrature: the tent is linear on [-a, 0] and [0, a]
  std::vector<double> nodes, weights;
  gauss_rule(pts_per_axis, nodes, weights);
  double axis = 0.0;
  for (int half = 0; half < 2; ++half)
    for (int i = 0; i < pts_per_axis; ++i) {
      const double t = (half == 0 ? -a : 0.0) + a * nodes[i];
      axis += a * weights[i] * tent_cutoff(a, t);
    }
  return std::pow(axis, n);
}

double vertex_overlap_identity(int N, int n, int pts_per_axis) {
  const double a = 1.0 / N;
  std::vector<double> nodes, weights;
  gauss_rule(pts_per_axis, nodes, weights);
  // per-axis integrals c(e) = int rho(t) rho(t - a e) dt, e in {-1,0,1}
  std::array<double, 3> c{{0.0, 0.0, 0.0}};
  for (int ei = 0; ei < 3; ++ei) {
    const int e = ei - 1;
    for (int half = 0; half < 2; ++half)
      for (int i = 0; i < pts_per_axis; ++i) {
        const double t = (half == 0 ? -a : 0.0) + a * nodes[i];
        c[ei] += a * weights[i] * tent_cutoff(a, t) * tent_cutoff(a, t - a * e);
      }
  }
  // sum over the full shift hypercube factorizes into (c(-1)+c(0)+c(1))^n
  double total = std::pow(c[0] + c[1] + c[2], n);
  return std::pow(a, n) * total;
}

InterpMaps build_maps(const GeneralizedLink& link, const GammaRep& rep,
                      const ContinuumSpace& cspace, int N,
                      int quad_pts_per_axis) {
  // the top basis mode oscillates K/N times per cell; keep a few Gauss
  // points per period or its matrix elements turn to noise
  const int q_needed =
      std::max(8, (7 * cspace.K + 2 * N - 1) / (2 * N));
  if (quad_pts_per_axis == 0) quad_pts_per_axis = q_needed;
  if (quad_pts_per_axis < q_needed)
    throw QuadratureTooCoarse("need at least " + std::to_string(q_needed) +
                              " quadrature points per axis at this (K, N)");
  const int n = cspace.n;
  const double a = 1.0 / N;
  if (a >= link.a0) throw SpacingTooCoarse("lattice spacing outside the stripe");
  if (link.color_dim() != 1)
    throw UnsupportedBackground("interpolation maps assume a line bundle");
  if (rep.n != n) throw DimensionMismatch("rep/basis dimension");

  InterpMaps maps;
  maps.cspace = cspace;
  maps.lspace.N = N;
  maps.lspace.a = a;
  maps.lspace.n = n;
  maps.lspace.spinor_dim = rep.spinor_dim;
  maps.lspace.Nc = 1;
  maps.lspace.dim = rep.spinor_dim;
  for (int i = 0; i < n; ++i) maps.lspace.dim *= N;

  std::vector<double> nodes, weights;
  gauss_rule(quad_pts_per_axis, nodes, weights);
  const long S = cspace.n_scalars();
  const int sites = maps.lspace.sites();
  maps.Fs = MatrixXcd::Zero(S, sites);

  std::vector<int> cell(n), zc(n);
  VectorXd x(n), zpt(n);
  long npts = 1;
  for (int i = 0; i < n; ++i) npts *= quad_pts_per_axis;
  const double an = std::pow(a, n);
  for (int c0 = 0; c0 < sites; ++c0) {
    int rem = c0;
    for (int i = n - 1; i >= 0; --i) {
      cell[i] = rem % N;
      rem /= N;
    }
    for (long p = 0; p < npts; ++p) {
      long pr = p;
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        const int qi = static_cast<int>(pr % quad_pts_per_axis);
        pr /= quad_pts_per_axis;
        x(i) = (cell[i] + nodes[qi]) * a;
        w *= weights[qi];
      }
      const VectorXcd basis = evaluate_scalar_basis(cspace, x);
      for (int combo = 0; combo < (1 << n); ++combo) {
        double rho = 1.0;
        for (int i = 0; i < n; ++i) {
          zc[i] = cell[i] + ((combo >> i) & 1);
          zpt(i) = zc[i] * a;
          rho *= tent_cutoff(a, x(i) - zpt(i));
        }
        if (rho == 0.0) continue;
        const cxd U = link.evaluate(x, zpt)(0, 0);
        const int site = site_of(zc, N, n);
        // cell volume a^n from the quadrature, a^n from the map definition
        maps.Fs.col(site) += (an * an * w * rho * U) * basis.conjugate();
      }
    }
  }

  const int sd = rep.spinor_dim;
  maps.A = MatrixXcd::Zero(cspace.dim(), maps.lspace.dim);
  const double resc = std::pow(a, -0.5 * n);
  for (long e = 0; e < cspace.dim(); ++e) {
    const int sc = cspace.entries[e].first;
    const int spin = cspace.entries[e].second;
    for (int z = 0; z < sites; ++z)
      maps.A(e, static_cast<long>(z) * sd + spin) = resc * maps.Fs(sc, z);
  }
  return maps;
}

FBoundsReport check_f_bounds(const GeneralizedLink& link, const GammaRep& rep,
                             const ContinuumSpace& cspace,
                             const std::vector<int>& Ns, int n_psi,
                             unsigned long seed) {
  FBoundsReport rep_out;
  rep_out.Ns = Ns;
  std::mt19937_64 rng(seed);
  std::vector<VectorXcd> psis;
  for (int i = 0; i < n_psi; ++i) psis.push_back(band_limited_psi(cspace, rng));
  rep_out.recon_errors.assign(n_psi, {});

  std::vector<double> log_a, log_res;
  for (int N : Ns) {
    InterpMaps maps = build_maps(link, rep, cspace, N);
    rep_out.op_norms.push_back(operator_norm(maps.A));
    const MatrixXcd gram = maps.A.adjoint() * maps.A;
    double mean_sq = 0.0;
    for (int i = 0; i < n_psi; ++i) {
      const VectorXcd v = maps.A.adjoint() * psis[i];
      const double r = (gram * v - v).norm();
      mean_sq += r * r;
      rep_out.recon_errors[i].push_back((maps.A * v - psis[i]).norm());
    }
    mean_sq /= n_psi;
    rep_out.residual_sq.push_back(mean_sq);
    log_a.push_back(std::log(1.0 / N));
    log_res.push_back(std::log(mean_sq));
  }
  rep_out.residual_slope = fit_slope(log_a, log_res);
  rep_out.recon_monotone = true;
  for (int i = 0; i < n_psi; ++i)
    for (size_t j = 0; j + 1 < Ns.size(); ++j)
      if (rep_out.recon_errors[i][j + 1] >= rep_out.recon_errors[i][j])
        rep_out.recon_monotone = false;
  return rep_out;
}

DiracConvergenceReport check_dirac_convergence(const GeneralizedLink& link,
                                               const GammaRep& rep,
                                               const ContinuumSpace& cspace,
                                               const std::vector<int>& Ns,
                                               int n_psi, unsigned long seed) {
  DiracConvergenceReport out;
  out.Ns = Ns;
  std::mt19937_64 rng(seed);
  std::vector<VectorXcd> psis, targets;
  {
    MatrixXcd H0 = continuum_dirac(cspace, rep, 0.0);
    MatrixXcd gch = continuum_chirality(cspace, rep);
    for (int i = 0; i < n_psi; ++i) {
      psis.push_back(band_limited_psi(cspace, rng));
      // D* psi = -D psi = -gamma (gamma D) psi
      targets.push_back(-(gch * (H0 * psis.back())));
    }
  }
  std::vector<double> log_a, log_err;
  for (int N : Ns) {
    InterpMaps maps = build_maps(link, rep, cspace, N);
    LinkField lf = discretize(link, N);
    const MatrixXcd HW0 = wilson_dirac(lf, rep, 0.0).to_dense();
    const MatrixXcd glat = chirality_operator(maps.lspace, rep).to_dense();
    const MatrixXcd DW_adj = (glat * HW0).adjoint();
    double mean = 0.0;
    for (int i = 0; i < n_psi; ++i) {
      const VectorXcd got = maps.A * (DW_adj * (maps.A.adjoint() * psis[i]));
      mean += (got - targets[i]).norm();
    }
    mean /= n_psi;
    out.errors.push_back(mean);
    log_a.push_back(std::log(1.0 / N));
    log_err.push_back(std::log(mean));
  }
  out.fitted_order = fit_slope(log_a, log_err);
  return out;
}

double combined_min_eig(const InterpMaps& maps, const GammaRep& rep,
                        const LinkField& lf, double m, double t,
                        bool bounded_transform, double M0) {
  const long dl = maps.lspace.dim;
  const long dc = maps.cspace.dim();
  if (lf.N != maps.lspace.N || lf.n != maps.lspace.n || lf.Nc != 1)
    throw DimensionMismatch("link field does not match the maps");
  MatrixXcd H = MatrixXcd::Zero(dl + dc, dl + dc);
  H.topLeftCorner(dl, dl) = -wilson_dirac(lf, rep, m).to_dense();
  H.bottomLeftCorner(dc, dl) = t * maps.A;
  H.topRightCorner(dl, dc) = t * maps.A.adjoint();
  if (bounded_transform) {
    MatrixXcd Hc = continuum_dirac(maps.cspace, rep, m);
    VectorXd ev;
    MatrixXcd V;
    eigh(Hc, ev, V);
    VectorXd tr(ev.size());
    for (long i = 0; i < ev.size(); ++i)
      tr(i) = ev(i) / std::sqrt(ev(i) * ev(i) + M0 * M0);
    H.bottomRightCorner(dc, dc) = V * tr.asDiagonal() * V.adjoint();
  } else {
    add_continuum_dirac(maps.cspace, rep, m, H, dl);
  }
  return min_abs_eig_inplace(H);
}

GapReport staple_gap_scan(const InterpMaps& maps, const GammaRep& rep,
                          const LinkField& lf, double M, int m_samples,
                          int t_samples, double gap_tol, bool bounded_transform,
                          double M0) {
  if (m_samples < 2 || t_samples < 2) throw Error("need at least 2 samples per leg");
  GapReport out;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < m_samples; ++i)
    pts.emplace_back(-M + 2.0 * M * i / (m_samples - 1), 1.0);
  for (int j = 0; j < t_samples - 1; ++j) {
    const double t = static_cast<double>(j) / (t_samples - 1);
    pts.emplace_back(-M, t);
    pts.emplace_back(M, t);
  }
  out.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [m, t] : pts) {
    const double gap =
        combined_min_eig(maps, rep, lf, m, t, bounded_transform, M0);
    out.samples.push_back({m, t, gap});
    out.min_gap = std::min(out.min_gap, gap);
    if (gap < gap_tol) {
      std::ostringstream os;
      os << "combined operator gap " << gap << " below " << gap_tol
         << " at (m, t) = (" << m << ", " << t << ")";
      throw GapClosed(os.str());
    }
  }
  return out;
}

}  // namespace latindex
