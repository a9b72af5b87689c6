#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace bellfilter {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  int max_iterations = 2000;
  // Converged once the spread of function values over the simplex drops
  // below this (absolute, scaled by max(1, |f_best|)).
  double tolerance = 1e-10;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the dimension-adaptive Nelder-Mead simplex method
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink
/// 1 - 1/n). The initial simplex is x0 plus step(i) along each axis.
/// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& step,
                                      const NelderMeadOptions& options = {});

/// `count` points of a Sobol sequence in [0, 1)^dim, shifted modulo 1 by a
/// seed-derived offset (Cranley-Patterson rotation). Deterministic per seed.
std::vector<Eigen::VectorXd> low_discrepancy_points(int dim, int count,
                                                    std::uint64_t seed);

}  // namespace bellfilter
