#include "bellfilter/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/random/sobol.hpp>

#include "bellfilter/error.hpp"

namespace bellfilter {
namespace {

double safe_eval(const Objective& f, const Eigen::VectorXd& x, int& count) {
  ++count;
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& step,
                                      const NelderMeadOptions& options) {
  const auto n = static_cast<int>(x0.size());
  if (n == 0 || step.size() != x0.size())
    throw Error(ErrorCode::InvalidInput, "Nelder-Mead needs matching x0 and step sizes");

  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 0.5 / dn;
  const double shrink = 1.0 - 1.0 / dn;

  NelderMeadResult result;
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fv(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)](i) += step(i);
  for (std::size_t i = 0; i < simplex.size(); ++i)
    fv[i] = safe_eval(f, simplex[i], result.evaluations);

  std::vector<std::size_t> order(simplex.size());
  Eigen::VectorXd centroid(n);

  for (result.iterations = 0; result.iterations < options.max_iterations;
       ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    const double spread = fv[worst] - fv[best];
    if (std::isfinite(spread) &&
        spread <= options.tolerance * std::max(1.0, std::abs(fv[best]))) {
      result.converged = true;
      break;
    }

    centroid.setZero();
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
    centroid /= dn;

    const Eigen::VectorXd xr = centroid + reflect * (centroid - simplex[worst]);
    const double fr = safe_eval(f, xr, result.evaluations);

    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = safe_eval(f, xe, result.evaluations);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }

    // contraction, outside if the reflected point beat the worst vertex
    const bool outside = fr < fv[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + contract * (xr - centroid))
                : Eigen::VectorXd(centroid + contract * (simplex[worst] - centroid));
    const double fc = safe_eval(f, xc, result.evaluations);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }

    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
      fv[i] = safe_eval(f, simplex[i], result.evaluations);
    }
  }

  const auto best_it = std::min_element(fv.begin(), fv.end());
  const auto best = static_cast<std::size_t>(std::distance(fv.begin(), best_it));
  result.x = simplex[best];
  result.value = fv[best];
  return result;
}

std::vector<Eigen::VectorXd> low_discrepancy_points(int dim, int count,
                                                    std::uint64_t seed) {
  if (dim <= 0 || count < 0)
    throw Error(ErrorCode::InvalidInput, "bad low-discrepancy request");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd shift(dim);
  for (int i = 0; i < dim; ++i) shift(i) = seed == 0 ? 0.0 : unit(rng);

  boost::random::sobol engine(static_cast<std::size_t>(dim));
  // The first Sobol point is the origin; skip it.
  engine.discard(static_cast<std::uintmax_t>(dim));
  const double scale = 1.0 / (static_cast<double>(engine.max()) + 1.0);

  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
      const double u = static_cast<double>(engine()) * scale + shift(i);
      p(i) = u - std::floor(u);
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace bellfilter
