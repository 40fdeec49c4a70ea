#ifndef LATINDEX_SPECTRAL_HPP
#define LATINDEX_SPECTRAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "latindex/clifford.hpp"
#include "latindex/gauge.hpp"
#include "latindex/types.hpp"

namespace latindex {

// One-parameter Hermitian family over the mass interval [-M, M].
using OperatorFamily = std::function<MatrixXcd(double)>;

struct MassGrid {
  double M = 1.0;
  std::vector<double> points;  // strictly increasing, endpoints exactly -M, +M
};

// Uniform grid with `count` points (count >= 9).
MassGrid make_mass_grid(double M, int count = 9);

struct EtaResult {
  int eta = 0;
  double min_abs_eig = 0.0;
};

// eta = #(lambda > 0) - #(lambda < 0) by full diagonalization.
EtaResult eta_invariant(const MatrixXcd& H);

struct Crossing {
  double m_lo = 0.0;
  double m_hi = 0.0;
  int sign = 0;   // direction of the net flow on this subinterval
  int count = 0;  // number of crossings carried by it
};

struct FlowResult {
  MassGrid grid;
  double lambda0 = 0.0;
  // (m, eigenvalues inside [-lambda0, lambda0]) for every evaluation point,
  // bisection refinements included
  std::vector<std::pair<double, VectorXd>> spectra;
  std::vector<Crossing> crossings;
  int sf = 0;
  int eta_minus = 0;
  int eta_plus = 0;
};

// Spectral flow by two methods that must agree: (A) signed crossing
// counting on adaptively bisected intervals (bisect when an eigenvalue
// dips below lambda0/4, more than one crossing shares an interval, or
// eigenvector matching across the interval is ambiguous), and (B) the
// endpoint identity sf = (eta(+M) - eta(-M)) / 2.
// lambda0 <= 0 selects the default 0.5 * min endpoint gap.
FlowResult spectral_flow(const OperatorFamily& family, const MassGrid& grid,
                         double lambda0 = 0.0);

// -eta(H_W(-M)) / 2.
int wilson_index(const LinkField& lf, const GammaRep& rep, double M);

void write_flow_csv(const FlowResult& fr, const std::string& path);
std::string flow_summary_json(const FlowResult& fr);

}  // namespace latindex

#endif
