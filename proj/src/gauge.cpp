#include "latindex/gauge.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "latindex/eig.hpp"

namespace latindex {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap01(double t) {
  double r = t - std::floor(t);
  return (r == 1.0) ? 0.0 : r;
}

// Minimal-image displacement, each component in [-1/2, 1/2).
VectorXd minimal_image(const VectorXd& x, const VectorXd& y) {
  VectorXd d = y - x;
  for (int i = 0; i < d.size(); ++i) d(i) -= std::round(d(i));
  return d;
}

// Flux transport phase (in units of 2*pi*Q) along the straight segment
// from x with displacement d: chart line integral of x_1 dx_2 plus the
// seam twist.  See the convention note in gauge.hpp.
double flux_phase_units(const VectorXd& x, const VectorXd& d) {
  const double x1 = wrap01(x(0));
  const double x2 = wrap01(x(1));
  double base = d(1) * (x1 + d(0) / 2.0);
  double twist = 0.0;
  const double u1 = x1 + d(0);
  if (u1 >= 1.0 && d(0) > 0.0) {
    const double t = (1.0 - x1) / d(0);
    base -= d(1) * (1.0 - t);
    twist = x2 + t * d(1);
  } else if (u1 < 0.0 && d(0) < 0.0) {
    const double t = -x1 / d(0);
    base += d(1) * (1.0 - t);
    twist = -(x2 + t * d(1));
  }
  return -base + twist;
}
}  // namespace

void validate(const ConnectionDescriptor& desc) {
  if (desc.n < 1 || desc.n > 4)
    throw InvalidDescriptor("descriptor dimension must be in [1,4]");
  if (desc.group_dim < 1) throw InvalidDescriptor("group_dim must be >= 1");
  switch (desc.kind) {
    case ConnectionKind::U1Flux:
    case ConnectionKind::U1FluxPlusSmooth:
      if (desc.n != 2 || desc.group_dim != 1)
        throw InvalidDescriptor("u1_flux requires n=2 and N_c=1");
      break;
    case ConnectionKind::External:
      if (desc.table_path.empty())
        throw InvalidDescriptor("external descriptor needs a table path");
      break;
    default:
      break;
  }
  for (const auto& mode : desc.perturbation) {
    if (mode.direction < 0 || mode.direction >= desc.n)
      throw InvalidDescriptor("perturbation direction out of range");
  }
  if (desc.kind == ConnectionKind::Trivial && !desc.perturbation.empty())
    throw InvalidDescriptor("trivial descriptor must carry no perturbation");
}

int LinkField::sites() const {
  int s = 1;
  for (int i = 0; i < n; ++i) s *= N;
  return s;
}

int LinkField::site_index(const std::vector<int>& z) const {
  int idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * N + ((z[i] % N) + N) % N;
  return idx;
}

std::vector<int> LinkField::site_coords(int site) const {
  std::vector<int> z(n);
  for (int i = n - 1; i >= 0; --i) {
    z[i] = site % N;
    site /= N;
  }
  return z;
}

int LinkField::neighbor(int site, int dir, int step) const {
  std::vector<int> z = site_coords(site);
  z[dir] += step;
  return site_index(z);
}

double perturbation_line_integral(const std::vector<FourierMode>& modes, int n,
                                  const VectorXd& x, const VectorXd& d) {
  double total = 0.0;
  for (const auto& mode : modes) {
    double kx = 0.0, kd = 0.0;
    for (int i = 0; i < n; ++i) {
      kx += mode.wave[i] * x(i);
      kd += mode.wave[i] * d(i);
    }
    const double theta0 = kTwoPi * kx + mode.phase;
    double integral;
    if (std::abs(kd) < 1e-14) {
      integral = std::cos(theta0);
    } else {
      integral = (std::sin(theta0 + kTwoPi * kd) - std::sin(theta0)) / (kTwoPi * kd);
    }
    total += mode.amplitude * d(mode.direction) * integral;
  }
  return total;
}

double perturbation_alpha(const std::vector<FourierMode>& modes, int dir,
                          const VectorXd& x) {
  double total = 0.0;
  for (const auto& mode : modes) {
    if (mode.direction != dir) continue;
    double kx = 0.0;
    for (int i = 0; i < x.size(); ++i) kx += mode.wave[i] * x(i);
    total += mode.amplitude * std::cos(kTwoPi * kx + mode.phase);
  }
  return total;
}

double perturbation_max_curvature(const std::vector<FourierMode>& modes) {
  // F_12 = d_1 alpha_2 - d_2 alpha_1; each mode contributes at most
  // 2*pi*|k_perp|*amplitude.
  double total = 0.0;
  for (const auto& mode : modes) {
    const int perp = mode.direction == 0 ? 1 : 0;
    total += kTwoPi * std::abs(mode.wave[perp]) * std::abs(mode.amplitude);
  }
  return total;
}

MatrixXcd GeneralizedLink::evaluate(const VectorXd& x, const VectorXd& y) const {
  const int n = desc.n;
  if (x.size() != n || y.size() != n)
    throw InvalidDescriptor("point dimension mismatch");

  if (desc.kind == ConnectionKind::External) {
    // Defined on lattice pairs only.
    const LinkField& lf = *table;
    std::vector<int> zx(n), zy(n);
    for (int i = 0; i < n; ++i) {
      const double sx = wrap01(x(i)) * lf.N, sy = wrap01(y(i)) * lf.N;
      zx[i] = static_cast<int>(std::lround(sx)) % lf.N;
      zy[i] = static_cast<int>(std::lround(sy)) % lf.N;
      if (std::abs(sx - std::lround(sx)) > 1e-9 ||
          std::abs(sy - std::lround(sy)) > 1e-9)
        throw InvalidDescriptor("external link evaluator restricted to lattice points");
    }
    const int sx = lf.site_index(zx);
    if (sx == lf.site_index(zy)) return MatrixXcd::Identity(lf.Nc, lf.Nc);
    for (int i = 0; i < n; ++i) {
      std::vector<int> zp = zx;
      zp[i] += 1;
      if (lf.site_index(zp) == lf.site_index(zy)) return lf.link(sx, i);
      std::vector<int> zm = zx;
      zm[i] -= 1;
      if (lf.site_index(zm) == lf.site_index(zy))
        return lf.link(lf.site_index(zm), i).adjoint();
    }
    throw InvalidDescriptor("external link evaluator restricted to nearest neighbors");
  }

  const VectorXd d = minimal_image(x, y);
  double phase = 0.0;
  if (desc.kind == ConnectionKind::U1Flux ||
      desc.kind == ConnectionKind::U1FluxPlusSmooth) {
    phase += kTwoPi * desc.flux * flux_phase_units(x, d);
  }
  if (!desc.perturbation.empty()) {
    VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = wrap01(x(i));
    phase -= perturbation_line_integral(desc.perturbation, n, x0, d);
  }
  const int nc = desc.group_dim;
  if (phase == 0.0) return MatrixXcd::Identity(nc, nc);
  return std::polar(1.0, phase) * MatrixXcd::Identity(nc, nc);
}

GeneralizedLink make_generalized_link(const ConnectionDescriptor& desc) {
  validate(desc);
  GeneralizedLink link;
  link.desc = desc;
  link.a0 = 0.5;
  if (desc.kind == ConnectionKind::External) {
    link.table = std::make_shared<LinkField>(load_link_table(desc.table_path));
    link.a0 = 1.5 * link.table->a;
  }
  return link;
}

LinkField discretize(const GeneralizedLink& link, int N) {
  const int n = link.desc.n;
  const double a = 1.0 / N;
  if (a >= link.a0)
    throw SpacingTooCoarse("lattice spacing " + std::to_string(a) +
                           " not below stripe width " + std::to_string(link.a0));
  LinkField lf;
  lf.N = N;
  lf.a = a;
  lf.n = n;
  lf.Nc = link.color_dim();
  lf.links.resize(static_cast<size_t>(lf.sites()) * n);
  for (int site = 0; site < lf.sites(); ++site) {
    std::vector<int> z = lf.site_coords(site);
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = z[i] * a;
    for (int dir = 0; dir < n; ++dir) {
      VectorXd y = x;
      y(dir) += a;
      lf.link(site, dir) = link.evaluate(x, y);
    }
  }
  return lf;
}

ChargeResult plaquette_charge(const LinkField& lf) {
  if (lf.n != 2 || lf.Nc != 1)
    throw InvalidDescriptor("plaquette_charge requires n=2, N_c=1");
  // Plaquette traversed (e_2 then e_1); orientation fixed so that the
  // u1_flux(Q) descriptor reports charge Q.
  double total = 0.0;
  for (int site = 0; site < lf.sites(); ++site) {
    const int s1 = lf.neighbor(site, 0, 1);
    const int s2 = lf.neighbor(site, 1, 1);
    const cxd p = lf.link(site, 1)(0, 0) * lf.link(s2, 0)(0, 0) *
                  std::conj(lf.link(s1, 1)(0, 0)) * std::conj(lf.link(site, 0)(0, 0));
    const double phi = std::arg(p);
    if (std::abs(phi) >= std::numbers::pi * (1.0 - 1e-6))
      throw RoughField("plaquette phase at pi: charge ill-defined");
    total += phi;
  }
  total /= kTwoPi;
  ChargeResult out;
  out.charge = static_cast<int>(std::lround(total));
  out.residual = total - out.charge;
  return out;
}

double curvature_bound(const GeneralizedLink& link, int samples,
                       unsigned long seed) {
  if (samples < 1) throw InvalidDescriptor("curvature_bound needs samples >= 1");
  const int n = link.desc.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    VectorXd x(n), u(n), v(n);
    double nu = 0.0, nv = 0.0;
    for (int i = 0; i < n; ++i) {
      x(i) = unif(rng);
      u(i) = unif(rng) - 0.5;
      v(i) = unif(rng) - 0.5;
      nu += u(i) * u(i);
      nv += v(i) * v(i);
    }
    if (nu == 0.0 || nv == 0.0) continue;
    // Edge lengths swept down toward zero to approach the local bound.
    const double r1 = 0.2 * std::pow(0.5, s % 6);
    const double r2 = 0.2 * std::pow(0.5, (s / 6) % 6);
    u *= r1 / std::sqrt(nu);
    v *= r2 / std::sqrt(nv);
    VectorXd y = x + u, z = x + v;
    MatrixXcd holonomy =
        link.evaluate(x, y) * link.evaluate(y, z) * link.evaluate(z, x);
    const double defect =
        operator_norm(MatrixXcd::Identity(holonomy.rows(), holonomy.cols()) -
                      holonomy);
    best = std::max(best, defect / (r1 * r2));
  }
  return best;
}

LinkField gauge_transform(const LinkField& lf, const std::vector<MatrixXcd>& g) {
  if (static_cast<int>(g.size()) != lf.sites())
    throw NonUnitaryGauge("gauge transform needs one unitary per site");
  for (const auto& m : g) {
    if (m.rows() != lf.Nc || m.cols() != lf.Nc)
      throw NonUnitaryGauge("gauge matrix dimension mismatch");
    if ((m.adjoint() * m - MatrixXcd::Identity(lf.Nc, lf.Nc)).cwiseAbs().maxCoeff() >
        1e-10)
      throw NonUnitaryGauge("gauge matrix not unitary");
  }
  LinkField out = lf;
  for (int site = 0; site < lf.sites(); ++site) {
    for (int dir = 0; dir < lf.n; ++dir) {
      const int nb = lf.neighbor(site, dir, 1);
      out.link(site, dir) = g[site] * lf.link(site, dir) * g[nb].adjoint();
    }
  }
  return out;
}

std::vector<MatrixXcd> random_gauge(const LinkField& lf, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<MatrixXcd> g(lf.sites());
  for (auto& m : g) {
    MatrixXcd z(lf.Nc, lf.Nc);
    for (int i = 0; i < lf.Nc; ++i)
      for (int j = 0; j < lf.Nc; ++j) z(i, j) = cxd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<MatrixXcd> qr(z);
    MatrixXcd q = qr.householderQ();
    MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < lf.Nc; ++i) {
      cxd d = r(i, i);
      q.col(i) *= (d == cxd(0, 0)) ? 1.0 : d / std::abs(d);
    }
    m = q;
  }
  return g;
}

void save_link_table(const LinkField& lf, const std::string& path,
                     const std::string& label) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.precision(17);
  out << lf.n << " " << lf.N << " " << lf.Nc << " " << label << "\n";
  for (int site = 0; site < lf.sites(); ++site) {
    for (int dir = 0; dir < lf.n; ++dir) {
      const MatrixXcd& m = lf.link(site, dir);
      for (int i = 0; i < lf.Nc; ++i)
        for (int j = 0; j < lf.Nc; ++j)
          out << m(i, j).real() << " " << m(i, j).imag() << " ";
      out << "\n";
    }
  }
}

LinkField load_link_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open link table " + path);
  LinkField lf;
  std::string label;
  in >> lf.n >> lf.N >> lf.Nc >> label;
  if (!in || lf.n < 1 || lf.n > 4 || lf.N < 2 || lf.Nc < 1)
    throw InvalidDescriptor("malformed link table header in " + path);
  lf.a = 1.0 / lf.N;
  lf.links.resize(static_cast<size_t>(lf.sites()) * lf.n);
  for (int site = 0; site < lf.sites(); ++site) {
    for (int dir = 0; dir < lf.n; ++dir) {
      MatrixXcd m(lf.Nc, lf.Nc);
      for (int i = 0; i < lf.Nc; ++i)
        for (int j = 0; j < lf.Nc; ++j) {
          double re, im;
          in >> re >> im;
          m(i, j) = cxd(re, im);
        }
      if (!in) throw InvalidDescriptor("truncated link table " + path);
      if ((m.adjoint() * m - MatrixXcd::Identity(lf.Nc, lf.Nc)).cwiseAbs().maxCoeff() >
          1e-10)
        throw NonUnitaryGauge("non-unitary link in table " + path);
      lf.link(site, dir) = m;
    }
  }
  return lf;
}

}  // namespace latindex
