#include "latindex/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "latindex/eig.hpp"
#include "latindex/latops.hpp"

namespace latindex {

namespace {

struct Snapshot {
  double m = 0.0;
  VectorXd evals;
  MatrixXcd evecs;
  int negatives = 0;
  double min_abs = 0.0;
};

Snapshot snapshot(const OperatorFamily& family, double m) {
  Snapshot s;
  s.m = m;
  MatrixXcd H = family(m);
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() >= 1e-10)
    throw Error("family(m) is not hermitian");
  eigh(H, s.evals, s.evecs);
  s.negatives = 0;
  s.min_abs = std::abs(s.evals(0));
  for (long i = 0; i < s.evals.size(); ++i) {
    if (s.evals(i) < 0) ++s.negatives;
    s.min_abs = std::min(s.min_abs, std::abs(s.evals(i)));
  }
  return s;
}

VectorXd windowed(const Snapshot& s, double lambda0) {
  std::vector<double> w;
  for (long i = 0; i < s.evals.size(); ++i)
    if (std::abs(s.evals(i)) <= lambda0) w.push_back(s.evals(i));
  return Eigen::Map<VectorXd>(w.data(), static_cast<long>(w.size()));
}

// Worst projection of a windowed left-end eigenvector onto the span of
// the windowed right-end eigenvectors.  Using the subspace projection
// keeps degenerate levels (arbitrary rotations within a multiplet) from
// flagging a false ambiguity.
double worst_match(const Snapshot& a, const Snapshot& b, double lambda0) {
  const double wide = 2.0 * lambda0;  // partners may drift past the window edge
  std::vector<long> cols;
  for (long j = 0; j < b.evals.size(); ++j)
    if (std::abs(b.evals(j)) <= wide) cols.push_back(j);
  double worst = 1.0;
  for (long i = 0; i < a.evals.size(); ++i) {
    if (std::abs(a.evals(i)) > lambda0) continue;
    double proj_sq = 0.0;
    for (long j : cols) {
      const double ov = std::abs(a.evecs.col(i).dot(b.evecs.col(j)));
      proj_sq += ov * ov;
    }
    worst = std::min(worst, std::sqrt(proj_sq));
  }
  return worst;
}

void track_interval(const OperatorFamily& family, const Snapshot& left,
                    const Snapshot& right, double lambda0, int depth,
                    FlowResult& out) {
  const int delta = left.negatives - right.negatives;
  // a dip without a net sign change may hide a canceling crossing pair;
  // localize it, but only a few levels deep since it cannot move sf
  const bool dip = std::min(left.min_abs, right.min_abs) < 0.25 * lambda0 &&
                   delta == 0 && depth < 6;
  const bool multiple = std::abs(delta) > 1;
  const bool ambiguous = worst_match(left, right, lambda0) < 0.5;
  if (depth < 12 && (dip || multiple || ambiguous)) {
    Snapshot mid = snapshot(family, 0.5 * (left.m + right.m));
    out.spectra.emplace_back(mid.m, windowed(mid, lambda0));
    track_interval(family, left, mid, lambda0, depth + 1, out);
    track_interval(family, mid, right, lambda0, depth + 1, out);
    return;
  }
  if (delta != 0)
    out.crossings.push_back(
        {left.m, right.m, delta > 0 ? 1 : -1, std::abs(delta)});
}

}  // namespace

MassGrid make_mass_grid(double M, int count) {
  if (M <= 0) throw Error("mass endpoint must be positive");
  if (count < 9) throw Error("mass grid needs at least 9 points");
  MassGrid g;
  g.M = M;
  g.points.resize(count);
  for (int i = 0; i < count; ++i)
    g.points[i] = -M + 2.0 * M * i / (count - 1);
  g.points.front() = -M;
  g.points.back() = M;
  return g;
}

EtaResult eta_invariant(const MatrixXcd& H) {
  VectorXd ev = eigvalsh(H);
  EtaResult r;
  r.min_abs_eig = std::abs(ev(0));
  for (long i = 0; i < ev.size(); ++i) {
    r.min_abs_eig = std::min(r.min_abs_eig, std::abs(ev(i)));
    if (ev(i) > 0)
      ++r.eta;
    else if (ev(i) < 0)
      --r.eta;
  }
  if (r.min_abs_eig < 1e-10)
    throw NearZeroMode("eigenvalue at zero; eta ill-defined");
  return r;
}

FlowResult spectral_flow(const OperatorFamily& family, const MassGrid& grid,
                         double lambda0) {
  if (grid.points.size() < 9 || grid.points.front() != -grid.M ||
      grid.points.back() != grid.M)
    throw Error("bad mass grid");
  FlowResult out;
  out.grid = grid;

  std::vector<Snapshot> snaps;
  snaps.reserve(grid.points.size());
  for (double m : grid.points) snaps.push_back(snapshot(family, m));
  if (snaps.front().min_abs < 1e-10 || snaps.back().min_abs < 1e-10)
    throw EndpointKernel("zero eigenvalue at a mass endpoint");

  out.lambda0 = lambda0 > 0
                    ? lambda0
                    : 0.5 * std::min(snaps.front().min_abs, snaps.back().min_abs);
  for (const auto& s : snaps) out.spectra.emplace_back(s.m, windowed(s, out.lambda0));
  for (size_t i = 0; i + 1 < snaps.size(); ++i)
    track_interval(family, snaps[i], snaps[i + 1], out.lambda0, 0, out);

  out.sf = 0;
  for (const auto& c : out.crossings) out.sf += c.sign * c.count;

  // method B: endpoint eta invariants
  int eta_m = 0, eta_p = 0;
  for (long i = 0; i < snaps.front().evals.size(); ++i)
    eta_m += snaps.front().evals(i) > 0 ? 1 : -1;
  for (long i = 0; i < snaps.back().evals.size(); ++i)
    eta_p += snaps.back().evals(i) > 0 ? 1 : -1;
  out.eta_minus = eta_m;
  out.eta_plus = eta_p;
  if (2 * out.sf != eta_p - eta_m)
    throw MethodMismatch("crossing count disagrees with endpoint etas");

  std::sort(out.spectra.begin(), out.spectra.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.m_lo < b.m_lo; });
  return out;
}

int wilson_index(const LinkField& lf, const GammaRep& rep, double M) {
  if (M <= 0) throw Error("mass endpoint must be positive");
  EtaResult r = eta_invariant(wilson_dirac(lf, rep, -M).to_dense());
  if (r.eta % 2 != 0) throw Error("odd eta; index undefined");
  return -r.eta / 2;
}

void write_flow_csv(const FlowResult& fr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.precision(17);
  out << "m,index,lambda\n";
  for (const auto& [m, ev] : fr.spectra)
    for (long i = 0; i < ev.size(); ++i)
      out << m << "," << i << "," << ev(i) << "\n";
}

std::string flow_summary_json(const FlowResult& fr) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"sf\": " << fr.sf << ", \"eta_minus\": " << fr.eta_minus
     << ", \"eta_plus\": " << fr.eta_plus << ", \"lambda0\": " << fr.lambda0
     << ", \"crossings\": [";
  for (size_t i = 0; i < fr.crossings.size(); ++i) {
    const auto& c = fr.crossings[i];
    if (i) os << ", ";
    os << "{\"m_lo\": " << c.m_lo << ", \"m_hi\": " << c.m_hi
       << ", \"sign\": " << c.sign << ", \"count\": " << c.count << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace latindex
