#include "bellfilter/vertesi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "bellfilter/error.hpp"
#include "bellfilter/nelder_mead.hpp"

namespace bellfilter {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Narrowest band the search will evaluate.
constexpr double kMinBandWidth = 1e-6;

// Images M x of the nodes stored as separate coordinate arrays so the pair
// loops vectorize.
struct ImageCloud {
  std::vector<double> x, y, z, w;

  ImageCloud(const CapQuadrature& q, const Eigen::Matrix3d& m) {
    const std::size_t n = q.size();
    x.resize(n);
    y.resize(n);
    z.resize(n);
    w = q.weights();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d v = m * q.nodes()[i];
      x[i] = v(0);
      y[i] = v(1);
      z[i] = v(2);
    }
  }
};

double weighted_distance_sum(const ImageCloud& p, const ImageCloud& q,
                             bool symmetric) {
  const std::size_t n = p.x.size();
  const std::size_t m = q.x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = p.x[i], py = p.y[i], pz = p.z[i];
    const std::size_t j0 = symmetric ? i + 1 : 0;
    double row = 0.0;
    for (std::size_t j = j0; j < m; ++j) {
      const double dx = px - q.x[j], dy = py - q.y[j], dz = pz - q.z[j];
      row += q.w[j] * std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    total += p.w[i] * row;
  }
  return symmetric ? 2.0 * total : total;
}

// Which parameters a search varies; the rest come from `fixed`.
struct SearchLayout {
  bool strengths = false;
  bool rotations = false;
  bool window = false;

  int size() const {
    return (strengths ? 2 : 0) + (rotations ? 4 : 0) + (window ? 4 : 0);
  }
};

struct SearchPoint {
  FilterParams filter;
  CapWindow window;
  bool feasible = true;
};

std::pair<double, double> decode_band(double u, double v) {
  const double p = fold_into(u, 0.0, kHalfPi);
  const double q = fold_into(v, 0.0, kHalfPi);
  return {std::min(p, q), std::max(p, q)};
}

SearchPoint decode(const Eigen::VectorXd& v, const SearchLayout& layout,
                   const SearchPoint& fixed, const OptimizerOptions& opts) {
  SearchPoint out = fixed;
  int k = 0;
  if (layout.strengths) {
    out.filter.x = fold_into(v(k++), opts.strength_min, opts.strength_max);
    out.filter.y = fold_into(v(k++), opts.strength_min, opts.strength_max);
  }
  if (layout.rotations) {
    out.filter.euler_a = axis_frame(v(k), v(k + 1));
    out.filter.euler_b = axis_frame(v(k + 2), v(k + 3));
    k += 4;
  }
  if (layout.window) {
    const auto [a, b] = decode_band(v(k), v(k + 1));
    const auto [c, d] = decode_band(v(k + 2), v(k + 3));
    out.window = {a, b, c, d};
    out.feasible = b - a >= kMinBandWidth && d - c >= kMinBandWidth;
  }
  return out;
}

Eigen::VectorXd encode(const SearchPoint& p, const SearchLayout& layout) {
  Eigen::VectorXd v(layout.size());
  int k = 0;
  if (layout.strengths) {
    v(k++) = p.filter.x;
    v(k++) = p.filter.y;
  }
  if (layout.rotations) {
    const auto [ta, pa] = frame_axis(p.filter.euler_a);
    const auto [tb, pb] = frame_axis(p.filter.euler_b);
    v.segment(k, 4) << ta, pa, tb, pb;
    k += 4;
  }
  if (layout.window) v.segment(k, 4) << p.window.a, p.window.b, p.window.c, p.window.d;
  return v;
}

Eigen::VectorXd initial_step(const SearchLayout& layout, const OptimizerOptions& opts,
                             double scale) {
  Eigen::VectorXd s(layout.size());
  int k = 0;
  if (layout.strengths) {
    s(k++) = 0.2 * (opts.strength_max - opts.strength_min);
    s(k++) = 0.2 * (opts.strength_max - opts.strength_min);
  }
  if (layout.rotations) {
    s.segment(k, 4).setConstant(0.6);
    k += 4;
  }
  if (layout.window) s.segment(k, 4).setConstant(0.15);
  return scale * s;
}

double evaluate(const ExtendedCorrelation& tt, const SearchPoint& p, bool filtered,
                const QuadratureSpec& q) {
  if (!p.feasible) return 0.0;
  try {
    return vertesi_lower_bound(tt, filtered ? std::optional<FilterParams>(p.filter)
                                            : std::nullopt,
                               p.window, q)
        .bound;
  } catch (const Error&) {
    return 0.0;
  }
}

struct Candidate {
  SearchPoint point;
  double value = 0.0;
};

}  // namespace

void validate_band(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= kHalfPi + 1e-15))
    throw Error(ErrorCode::BadWindow, "band requires 0 <= lo < hi <= pi/2, got [" +
                                          std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
}

void validate_window(const CapWindow& w) {
  validate_band(w.a, w.b);
  validate_band(w.c, w.d);
}

CapWindow hemisphere_window() { return {0.0, kHalfPi, 0.0, kHalfPi}; }

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "Gauss-Legendre needs n >= 1");
  thread_local std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  const auto un = static_cast<std::size_t>(n);
  std::vector<double> nodes(un), weights(un);
  const double dn = n;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (dn + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = dn * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -z;
    nodes[hi] = z;
    weights[lo] = weights[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(std::move(nodes), std::move(weights)))
      .first->second;
}

CapQuadrature::CapQuadrature(double lo, double hi, const QuadratureSpec& spec,
                             double azimuth_offset) {
  validate_band(lo, hi);
  if (spec.n_polar < 1 || spec.n_azimuth < 1)
    throw Error(ErrorCode::InvalidInput, "quadrature needs positive node counts");

  const auto& [gx, gw] = gauss_legendre(spec.n_polar);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const double dphi = kTwoPi / spec.n_azimuth;

  std::vector<double> sin_phi(static_cast<std::size_t>(spec.n_azimuth));
  std::vector<double> cos_phi(sin_phi.size());
  for (int j = 0; j < spec.n_azimuth; ++j) {
    const double phi = dphi * (j + azimuth_offset);
    sin_phi[static_cast<std::size_t>(j)] = std::sin(phi);
    cos_phi[static_cast<std::size_t>(j)] = std::cos(phi);
  }

  nodes_.reserve(static_cast<std::size_t>(spec.n_polar * spec.n_azimuth));
  weights_.reserve(nodes_.capacity());
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double theta = mid + half * gx[i];
    const double st = std::sin(theta), ct = std::cos(theta);
    const double wt = half * gw[i] * st * dphi;
    for (std::size_t j = 0; j < sin_phi.size(); ++j) {
      nodes_.emplace_back(st * sin_phi[j], st * cos_phi[j], ct);
      weights_.push_back(wt);
    }
  }
}

double CapQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

Eigen::Vector3d CapQuadrature::first_moment() const {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < nodes_.size(); ++i) m += weights_[i] * nodes_[i];
  return m;
}

double cap_area(double lo, double hi) {
  validate_band(lo, hi);
  return kTwoPi * (std::cos(lo) - std::cos(hi));
}

Eigen::Vector3d cap_first_moment(double lo, double hi) {
  if (lo == hi && lo >= 0.0 && lo <= kHalfPi) return Eigen::Vector3d::Zero();
  validate_band(lo, hi);
  const double cl = std::cos(lo), ch = std::cos(hi);
  return {0.0, 0.0, kPi * (cl * cl - ch * ch)};
}

double band_pair_distance(const Eigen::Matrix3d& M, double lo, double hi,
                          const QuadratureSpec& spec) {
  const CapQuadrature aligned(lo, hi, spec, 0.0);
  const CapQuadrature staggered(lo, hi, spec, 0.5);
  const ImageCloud p(aligned, M);
  const ImageCloud q(staggered, M);
  return 0.5 * (weighted_distance_sum(p, p, true) + weighted_distance_sum(p, q, false));
}

VertesiTerms vertesi_terms(const Eigen::Matrix3d& X, const CapWindow& w,
                           const QuadratureSpec& q) {
  validate_window(w);
  const double s_ab = cap_area(w.a, w.b);
  const double s_cd = cap_area(w.c, w.d);
  VertesiTerms t;
  t.term1 = std::abs(cap_first_moment(w.a, w.b).dot(X * cap_first_moment(w.c, w.d))) /
            (s_ab * s_cd);
  t.term2 = band_pair_distance(X, w.c, w.d, q) / (2.0 * s_cd * s_cd);
  t.term3 = band_pair_distance(X.transpose(), w.a, w.b, q) / (2.0 * s_ab * s_ab);
  return t;
}

VertesiResult vertesi_lower_bound(const ExtendedCorrelation& tt,
                                  const std::optional<FilterParams>& fp,
                                  const CapWindow& w, const QuadratureSpec& q) {
  VertesiResult r;
  r.window = w;
  r.filter = fp;
  Eigen::Matrix3d X = tt.T();
  if (fp) {
    const FilteredCorrelation fc = filtered_correlation(tt, *fp);
    X = fc.X;
    r.norm = fc.N;
  }
  r.terms = vertesi_terms(X, w, q);
  r.bound = r.terms.sum() / r.norm;
  r.violating = r.bound > kVertesiClassicalBound;
  return r;
}

VertesiResult maximize_vertesi_bound(const DensityMatrix& rho, bool with_filter,
                                     const OptimizerOptions& opts,
                                     const VertesiSearchOptions& search) {
  if (opts.restarts < 0 || opts.max_iterations <= 0 || search.grid_cells < 1 ||
      search.top_candidates < 1 || !(opts.strength_min > 0.0) ||
      !(opts.strength_max > opts.strength_min))
    throw Error(ErrorCode::InvalidInput, "invalid Vertesi search options");
  if (search.fixed_window) validate_window(*search.fixed_window);
  if (search.fixed_strengths &&
      !(search.fixed_strengths->first > 0.0 && search.fixed_strengths->second > 0.0))
    throw Error(ErrorCode::OutOfRange, "fixed filter strengths must be positive");

  const ExtendedCorrelation tt = correlation_data(rho);

  SearchLayout layout;
  layout.strengths = with_filter && !search.fixed_strengths;
  layout.rotations = with_filter;
  layout.window = !search.fixed_window;

  SearchPoint fixed;
  if (search.fixed_strengths) {
    fixed.filter.x = search.fixed_strengths->first;
    fixed.filter.y = search.fixed_strengths->second;
  }
  fixed.window = search.fixed_window.value_or(hemisphere_window());

  // Filter starting points: the identity frame first, then a Sobol sequence.
  std::vector<SearchPoint> filter_starts{fixed};
  if (with_filter) {
    const auto pts = low_discrepancy_points(kFilterSearchDim, opts.restarts, opts.seed);
    for (const auto& u : pts) {
      SearchPoint p = fixed;
      if (layout.strengths) {
        p.filter.x = opts.strength_min + u(0) * (opts.strength_max - opts.strength_min);
        p.filter.y = opts.strength_min + u(1) * (opts.strength_max - opts.strength_min);
      }
      p.filter.euler_a = axis_frame(std::acos(1.0 - 2.0 * u(2)), kTwoPi * u(3));
      p.filter.euler_b = axis_frame(std::acos(1.0 - 2.0 * u(4)), kTwoPi * u(5));
      filter_starts.push_back(p);
    }
  }

  // Window seeding per filter start.
  std::vector<Candidate> seeds;
  for (const SearchPoint& start : filter_starts) {
    if (!layout.window) {
      seeds.push_back({start, evaluate(tt, start, with_filter, search.coarse)});
      continue;
    }
    std::vector<Candidate> cells;
    const double h = kHalfPi / search.grid_cells;
    for (int ia = 0; ia <= search.grid_cells; ++ia)
      for (int ib = ia + 1; ib <= search.grid_cells; ++ib)
        for (int ic = 0; ic <= search.grid_cells; ++ic)
          for (int id = ic + 1; id <= search.grid_cells; ++id) {
            SearchPoint p = start;
            p.window = {ia * h, ib * h, ic * h, id * h};
            cells.push_back({p, evaluate(tt, p, with_filter, search.grid_quadrature)});
          }
    // Without a filter there is nothing else to diversify over, so keep
    // several windows; otherwise the best window per filter start.
    const std::size_t keep =
        with_filter ? 1 : static_cast<std::size_t>(search.top_candidates);
    std::partial_sort(cells.begin(), cells.begin() + std::min(keep, cells.size()),
                      cells.end(), [](const Candidate& l, const Candidate& r) {
                        return l.value > r.value;
                      });
    cells.resize(std::min(keep, cells.size()));
    seeds.insert(seeds.end(), cells.begin(), cells.end());
  }

  NelderMeadOptions nm;
  nm.max_iterations = opts.max_iterations;
  nm.tolerance = opts.tolerance;

  auto optimize = [&](const SearchPoint& from, const QuadratureSpec& q,
                      double step_scale, int max_iter) {
    const Objective f = [&](const Eigen::VectorXd& v) {
      return -evaluate(tt, decode(v, layout, fixed, opts), with_filter, q);
    };
    NelderMeadOptions o = nm;
    o.max_iterations = max_iter;
    const NelderMeadResult res =
        nelder_mead_minimize(f, encode(from, layout), initial_step(layout, opts, step_scale), o);
    return std::make_pair(Candidate{decode(res.x, layout, fixed, opts), -res.value},
                          res.converged);
  };

  std::vector<Candidate> refined;
  if (layout.size() == 0) {
    refined = seeds;
  } else {
    for (const Candidate& seed : seeds)
      refined.push_back(optimize(seed.point, search.coarse, 1.0, opts.max_iterations).first);
  }
  std::stable_sort(refined.begin(), refined.end(),
                   [](const Candidate& l, const Candidate& r) { return l.value > r.value; });
  refined.resize(std::min(refined.size(), static_cast<std::size_t>(search.top_candidates)));

  Candidate best{fixed, -1.0};
  for (const Candidate& c : refined) {
    Candidate fine{c.point, evaluate(tt, c.point, with_filter, search.fine)};
    if (layout.size() > 0 && search.polish_iterations > 0) {
      const Candidate polished =
          optimize(c.point, search.fine, 0.05, search.polish_iterations).first;
      if (polished.value > fine.value) fine = polished;
    }
    if (fine.value > best.value) best = fine;
  }

  VertesiResult out;
  if (best.value < 0.0 || !best.point.feasible) {
    out.window = fixed.window;
    out.bound = 0.0;
    return out;
  }
  std::optional<FilterParams> fp;
  if (with_filter) fp = canonical_filter(best.point.filter);
  out = vertesi_lower_bound(tt, fp, best.point.window, search.fine);
  return out;
}

}  // namespace bellfilter
