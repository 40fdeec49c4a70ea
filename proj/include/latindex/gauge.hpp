#ifndef LATINDEX_GAUGE_HPP
#define LATINDEX_GAUGE_HPP

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "latindex/types.hpp"

namespace latindex {

enum class ConnectionKind { Trivial, U1Flux, U1FluxPlusSmooth, External };

// One real Fourier component of a smooth periodic connection:
//   alpha_dir(x) += amplitude * cos(2*pi*wave.x + phase).
struct FourierMode {
  int direction = 0;  // which alpha_i it contributes to
  std::array<int, 4> wave{{0, 0, 0, 0}};
  double amplitude = 0.0;
  double phase = 0.0;
};

struct ConnectionDescriptor {
  ConnectionKind kind = ConnectionKind::Trivial;
  int n = 2;
  int group_dim = 1;
  int flux = 0;  // U(1) topological charge Q
  std::vector<FourierMode> perturbation;
  std::string table_path;  // External only
};

void validate(const ConnectionDescriptor& desc);

// Lattice link field U(z, z+e_i a), color matrices only.
struct LinkField {
  int N = 0;
  double a = 0.0;
  int n = 2;
  int Nc = 1;
  std::vector<MatrixXcd> links;  // site * n + dir, site lexicographic (z_0 slowest)

  int sites() const;
  int site_index(const std::vector<int>& z) const;
  std::vector<int> site_coords(int site) const;
  int neighbor(int site, int dir, int step) const;
  const MatrixXcd& link(int site, int dir) const { return links[site * n + dir]; }
  MatrixXcd& link(int site, int dir) { return links[site * n + dir]; }
};

// Two-point unitary U(x,y) on the stripe |x-y| < a0, the single object
// from which both the continuum connection and every lattice link field
// are derived.
//
// U(1) flux convention (documented, fixed once): in the chart x in [0,1)^2
// the connection is alpha = (0, 2*pi*Q*x_1) and transport along the
// straight minimal-image segment is U(x,y) = exp(-i Int alpha.dl), with a
// transition twist exp(+-2*pi*i*Q*x_2) collected whenever the segment
// crosses the x_1 = 0 seam.  This makes U(y,x) = U(x,y)^{-1} exact.
struct GeneralizedLink {
  ConnectionDescriptor desc;
  double a0 = 0.5;
  std::shared_ptr<LinkField> table;  // External only

  int color_dim() const { return desc.group_dim; }
  // x, y are points on the torus (any real representatives), size n.
  MatrixXcd evaluate(const VectorXd& x, const VectorXd& y) const;
};

GeneralizedLink make_generalized_link(const ConnectionDescriptor& desc);

LinkField discretize(const GeneralizedLink& link, int N);

struct ChargeResult {
  int charge = 0;
  double residual = 0.0;
};

// Total topological charge from plaquette phases (n=2, Nc=1 only).
ChargeResult plaquette_charge(const LinkField& lf);

// Sampled lower bound on the curvature constant F of the triangle
// holonomy inequality |id - U_W(x,y,z)| <= F |x-y| |x-z|.
double curvature_bound(const GeneralizedLink& link, int samples,
                       unsigned long seed = 20240901u);

LinkField gauge_transform(const LinkField& lf, const std::vector<MatrixXcd>& g);

// Generate Haar-ish random per-site unitaries for covariance tests.
std::vector<MatrixXcd> random_gauge(const LinkField& lf, unsigned long seed);

void save_link_table(const LinkField& lf, const std::string& path,
                     const std::string& label = "external");
LinkField load_link_table(const std::string& path);

// Straight-line integral of the perturbation component alpha.dl from x to y
// (minimal image), in closed form.
double perturbation_line_integral(const std::vector<FourierMode>& modes, int n,
                                  const VectorXd& x, const VectorXd& d);

// alpha_i(x) of the perturbation, and the maximum curvature sup |F_12|
// implied by its Fourier data (n=2).
double perturbation_alpha(const std::vector<FourierMode>& modes, int dir,
                          const VectorXd& x);
double perturbation_max_curvature(const std::vector<FourierMode>& modes);

}  // namespace latindex

#endif
