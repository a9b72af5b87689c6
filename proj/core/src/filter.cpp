#include "bellfilter/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellfilter/error.hpp"
#include "bellfilter/nelder_mead.hpp"

namespace bellfilter {
namespace {

constexpr int kDim = kFilterSearchDim;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_filter(const Matrix2c& f, const char* name) {
  if ((f - f.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw Error(ErrorCode::InvalidInput, std::string(name) + " is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(f, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kPositiveTol)
    throw Error(ErrorCode::InvalidInput,
                std::string(name) + " is not positive semidefinite");
}

}  // namespace

Eigen::Matrix<double, 3, 4> filter_coefficients(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorCode::OutOfRange, "filter strength must be positive");
  Eigen::Matrix<double, 3, 4> c = Eigen::Matrix<double, 3, 4>::Zero();
  c(0, 0) = 0.5 * (1.0 - x * x);
  c(0, 1) = 0.5 * (1.0 + x * x);
  c(1, 2) = x;
  c(2, 3) = x;
  return c;
}

FilteredCorrelation filtered_correlation(const ExtendedCorrelation& tt,
                                         const FilterParams& fp) {
  const Eigen::Matrix<double, 3, 4> c = filter_coefficients(fp.x);
  const Eigen::Matrix<double, 3, 4> d = filter_coefficients(fp.y);
  const Eigen::Matrix4d w = local_unitary_rotate(tt, euler_to_rotation(fp.euler_a),
                                                 euler_to_rotation(fp.euler_b))
                                .ttilde;

  // Sigma^2 = (1 + x^2)/2 I + (1 - x^2)/2 sigma1
  const Eigen::Vector2d cn(0.5 * (1.0 + fp.x * fp.x), 0.5 * (1.0 - fp.x * fp.x));
  const Eigen::Vector2d dn(0.5 * (1.0 + fp.y * fp.y), 0.5 * (1.0 - fp.y * fp.y));

  FilteredCorrelation out;
  out.X = c * w * d.transpose();
  out.N = cn.dot(w.block<2, 2>(0, 0) * dn);
  if (!(out.N >= kNormFloor))
    throw Error(ErrorCode::VanishingNorm,
                "filter normalization " + std::to_string(out.N) + " below floor");
  return out;
}

Matrix2c filter_operator(double strength, const EulerAngles& frame) {
  if (!(strength >= 0.0))
    throw Error(ErrorCode::OutOfRange, "filter strength must be non-negative");
  const Matrix2c u = unitary_from_euler(frame);
  Matrix2c sigma = Matrix2c::Zero();
  sigma(0, 0) = strength;
  sigma(1, 1) = 1.0;
  return u * sigma * u.adjoint();
}

double filter_norm(const DensityMatrix& rho, const Matrix2c& fa, const Matrix2c& fb) {
  const Matrix4c f = kron(fa, fb);
  return (f * rho.matrix() * f.adjoint()).trace().real();
}

DensityMatrix apply_filter_density(const DensityMatrix& rho, const Matrix2c& fa,
                                   const Matrix2c& fb) {
  check_filter(fa, "F_A");
  check_filter(fb, "F_B");
  const Matrix4c f = kron(fa, fb);
  const Matrix4c out = f * rho.matrix() * f.adjoint();
  const double n = out.trace().real();
  if (!(n >= kNormFloor))
    throw Error(ErrorCode::VanishingNorm,
                "filtered trace " + std::to_string(n) + " below floor");
  return make_density(out / n);
}

double filtered_mvci_objective(const ExtendedCorrelation& tt, const FilterParams& fp) {
  const FilteredCorrelation fc = filtered_correlation(tt, fp);
  return mvci(fc.T_prime()).value;
}

double fold_into(double value, double lo, double hi) {
  const double width = hi - lo;
  if (!(width > 0.0)) return lo;
  double t = std::fmod(value - lo, 2.0 * width);
  if (t < 0.0) t += 2.0 * width;
  if (t > width) t = 2.0 * width - t;
  return lo + t;
}

EulerAngles axis_frame(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  // rows: radial, polar and azimuthal unit vectors (right-handed)
  Eigen::Matrix3d r;
  r << st * cp, st * sp, ct,
       ct * cp, ct * sp, -st,
       -sp, cp, 0.0;
  return euler_from_rotation(r);
}

std::pair<double, double> frame_axis(const EulerAngles& frame) {
  const Eigen::Vector3d n = euler_to_rotation(frame).matrix.row(0);
  return {std::acos(std::clamp(n(2), -1.0, 1.0)), std::atan2(n(1), n(0))};
}

FilterParams decode_filter(const Eigen::VectorXd& v, int offset,
                           const OptimizerOptions& opts) {
  FilterParams fp;
  fp.x = fold_into(v(offset), opts.strength_min, opts.strength_max);
  fp.y = fold_into(v(offset + 1), opts.strength_min, opts.strength_max);
  fp.euler_a = axis_frame(v(offset + 2), v(offset + 3));
  fp.euler_b = axis_frame(v(offset + 4), v(offset + 5));
  return fp;
}

FilterParams canonical_filter(const FilterParams& fp) {
  FilterParams out = fp;
  out.euler_a = canonical_euler(fp.euler_a);
  out.euler_b = canonical_euler(fp.euler_b);
  return out;
}

FilterResult maximize_filtered_mvci(const DensityMatrix& rho,
                                    const OptimizerOptions& opts) {
  if (opts.restarts < 0 || opts.max_iterations <= 0 ||
      !(opts.strength_min > 0.0) || !(opts.strength_max > opts.strength_min))
    throw Error(ErrorCode::InvalidInput, "invalid optimizer options");

  const ExtendedCorrelation tt = correlation_data(rho);

  FilterResult best;
  best.unfiltered = mvci(tt.T()).value;
  best.value = best.unfiltered;
  best.params = FilterParams{};
  best.converged = true;

  const Objective negative_value = [&](const Eigen::VectorXd& v) {
    const FilterParams fp = decode_filter(v, 0, opts);
    try {
      return -filtered_mvci_objective(tt, fp);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd step(kDim);
  const double strength_step = 0.2 * (opts.strength_max - opts.strength_min);
  step << strength_step, strength_step, 0.6, 0.6, 0.6, 0.6;

  NelderMeadOptions nm;
  nm.max_iterations = opts.max_iterations;
  nm.tolerance = opts.tolerance;

  const auto starts = low_discrepancy_points(kDim, opts.restarts, opts.seed);
  for (int k = 0; k < opts.restarts; ++k) {
    const Eigen::VectorXd& u = starts[static_cast<std::size_t>(k)];
    Eigen::VectorXd x0(kDim);
    x0(0) = opts.strength_min + u(0) * (opts.strength_max - opts.strength_min);
    x0(1) = opts.strength_min + u(1) * (opts.strength_max - opts.strength_min);
    // axes uniform on the sphere
    x0(2) = std::acos(1.0 - 2.0 * u(2));
    x0(3) = kTwoPi * u(3);
    x0(4) = std::acos(1.0 - 2.0 * u(4));
    x0(5) = kTwoPi * u(5);

    NelderMeadResult run = nelder_mead_minimize(negative_value, x0, step, nm);
    // One restart from the end point guards against a collapsed simplex.
    NelderMeadResult polish = nelder_mead_minimize(negative_value, run.x, 0.1 * step, nm);
    if (polish.value <= run.value) run = polish;

    ++best.restarts_used;
    const double value = -run.value;
    if (std::isfinite(value) && value > best.value) {
      best.value = value;
      best.params = canonical_filter(decode_filter(run.x, 0, opts));
      best.converged = polish.converged;
    }
  }
  return best;
}

}  // namespace bellfilter
