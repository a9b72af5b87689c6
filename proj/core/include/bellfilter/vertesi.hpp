#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellfilter/filter.hpp"
#include "bellfilter/pauli.hpp"

namespace bellfilter {

inline constexpr double kVertesiClassicalBound = 1.0;

/// Polar-angle bands Omega_a^b (Alice) and Omega_c^d (Bob) on the unit
/// sphere, with x = (sin p1 sin p2, sin p1 cos p2, cos p1).
/// Requires 0 <= a < b <= pi/2 and 0 <= c < d <= pi/2.
struct CapWindow {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Throws BadWindow unless 0 <= lo < hi <= pi/2.
void validate_band(double lo, double hi);
void validate_window(const CapWindow& w);

CapWindow hemisphere_window();

/// Node counts per sphere band: Gauss-Legendre in the polar angle,
/// periodic trapezoid in the azimuth.
struct QuadratureSpec {
  int n_polar = 24;
  int n_azimuth = 24;
};

/// Tensor quadrature over one band lo <= p1 <= hi. The sin(p1) surface
/// factor is folded into the weights, so the weights sum to the band area.
/// azimuth_offset shifts the azimuth grid by that fraction of one step.
class CapQuadrature {
 public:
  CapQuadrature(double lo, double hi, const QuadratureSpec& spec,
                double azimuth_offset = 0.0);

  const std::vector<Eigen::Vector3d>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  double total_weight() const;
  Eigen::Vector3d first_moment() const;

 private:
  std::vector<Eigen::Vector3d> nodes_;
  std::vector<double> weights_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// 2 pi (cos lo - cos hi).
double cap_area(double lo, double hi);

/// Integral of the unit vector over the band: (0, 0, pi (cos^2 lo - cos^2 hi)).
Eigen::Vector3d cap_first_moment(double lo, double hi);

/// Integral of |M (x - y)| over band x band. The |.| kink on the diagonal
/// limits a single tensor grid to slow one-sided convergence (from below);
/// this averages the aligned grid with one whose y-azimuths are staggered by
/// half a step (which converges from above).
double band_pair_distance(const Eigen::Matrix3d& M, double lo, double hi,
                          const QuadratureSpec& spec);

struct VertesiTerms {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double sum() const { return term1 + term2 + term3; }
};

/// term1 = |<m_ab, X m_cd>| / (s_ab s_cd) from closed-form band moments,
/// term2 = integral over Omega_c^d^2 of |X (x - y)| / (2 s_cd^2),
/// term3 = integral over Omega_a^b^2 of |X^T (x - y)| / (2 s_ab^2).
VertesiTerms vertesi_terms(const Eigen::Matrix3d& X, const CapWindow& w,
                           const QuadratureSpec& q = {});

struct VertesiResult {
  double bound = 0.0;
  CapWindow window;
  std::optional<FilterParams> filter;
  VertesiTerms terms;
  double norm = 1.0;
  bool violating = false;
};

/// (term1 + term2 + term3) / N with X, N from filtered_correlation when a
/// filter is given, else X = T and N = 1.
VertesiResult vertesi_lower_bound(const ExtendedCorrelation& tt,
                                  const std::optional<FilterParams>& fp,
                                  const CapWindow& w, const QuadratureSpec& q = {});

struct VertesiSearchOptions {
  // Quadrature used while searching, and for the final evaluation.
  QuadratureSpec coarse{12, 12};
  QuadratureSpec fine{24, 24};
  // Window seeding grid: grid_cells + 1 values per angle on [0, pi/2].
  int grid_cells = 8;
  QuadratureSpec grid_quadrature{8, 8};
  // Coarse optima re-optimized at the fine quadrature.
  int top_candidates = 5;
  int polish_iterations = 400;
  // Pin parts of the search. Fixed strengths may lie outside the box.
  std::optional<std::pair<double, double>> fixed_strengths;
  std::optional<CapWindow> fixed_window;
};

/// Maximizes the lower bound over the window and, with with_filter, over
/// FilterParams as well: window-grid seeding at coarse quadrature, then
/// Nelder-Mead at coarse quadrature, then re-optimization of the best
/// candidates at the fine quadrature. Deterministic per opts.seed.
VertesiResult maximize_vertesi_bound(const DensityMatrix& rho, bool with_filter,
                                     const OptimizerOptions& opts = {},
                                     const VertesiSearchOptions& search = {});

}  // namespace bellfilter
