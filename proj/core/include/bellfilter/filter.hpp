#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "bellfilter/chsh.hpp"
#include "bellfilter/pauli.hpp"

namespace bellfilter {

/// Below this normalization a filtered state is treated as annihilated.
inline constexpr double kNormFloor = 1e-9;

/// Local filter F_A x F_B with F_A = U diag(x, 1) U^dag and
/// F_B = V diag(y, 1) V^dag. U and V enter only through the rotations they
/// induce on Pauli coefficients, parameterized by ZYZ Euler angles.
struct FilterParams {
  double x = 1.0;
  double y = 1.0;
  EulerAngles euler_a;
  EulerAngles euler_b;
};

/// Coefficients expressing Sigma sigma_k Sigma (Sigma = diag(x, 1)) in the
/// Pauli basis, one row per k = 1..3:
///   [(1 - x^2)/2, (1 + x^2)/2, 0, 0], [0, 0, x, 0], [0, 0, 0, x].
/// Throws OutOfRange for x <= 0.
Eigen::Matrix<double, 3, 4> filter_coefficients(double x);

struct FilteredCorrelation {
  Eigen::Matrix3d X = Eigen::Matrix3d::Identity();
  double N = 1.0;

  /// Correlation block of the filtered state in the rotated frame.
  Eigen::Matrix3d T_prime() const { return X / N; }
};

/// X = C W D^T with W = diag(1, O_A) ttilde diag(1, O_B)^T, and
/// N = tr[(Sigma_A^2 x Sigma_B^2) W-state] = sum_{a,b in {0,1}} c_a d_b W(a, b)
/// with c = ((1 + x^2)/2, (1 - x^2)/2) and d likewise in y.
/// Throws VanishingNorm when N < kNormFloor.
FilteredCorrelation filtered_correlation(const ExtendedCorrelation& tt,
                                         const FilterParams& fp);

/// F = U diag(strength, 1) U^dag for the U whose rotation has the given angles.
Matrix2c filter_operator(double strength, const EulerAngles& frame);

/// (F_A x F_B) rho (F_A x F_B)^dag / N computed directly on the density
/// matrix. Throws InvalidInput if a filter is not positive semidefinite and
/// VanishingNorm when N < kNormFloor.
DensityMatrix apply_filter_density(const DensityMatrix& rho, const Matrix2c& fa,
                                   const Matrix2c& fb);

/// Trace of the unnormalized filtered operator.
double filter_norm(const DensityMatrix& rho, const Matrix2c& fa, const Matrix2c& fb);

/// 2 sqrt(tau1' + tau2') for the two largest eigenvalues of X^T X / N^2.
double filtered_mvci_objective(const ExtendedCorrelation& tt, const FilterParams& fp);

struct OptimizerOptions {
  int restarts = 32;
  int max_iterations = 2000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  // Search box for the filter strengths x and y.
  double strength_min = 1e-3;
  double strength_max = 1.0;
};

struct FilterResult {
  double value = 0.0;
  FilterParams params;
  int restarts_used = 0;
  bool converged = false;
  double unfiltered = 0.0;
  bool violating() const { return value > kChshClassicalBound; }
};

/// Multi-start Nelder-Mead over the strengths and the two filter axes. The
/// identity filter is always a candidate, so value >= mvci(rho).
/// Deterministic per seed; ties between restarts go to the lowest index.
FilterResult maximize_filtered_mvci(const DensityMatrix& rho,
                                    const OptimizerOptions& opts = {});

// A rotation about the filter axis (the first row of O) commutes with Sigma,
// so a filter frame is fixed by that axis alone. The search works with its
// polar angles (theta, phi) and converts to Euler angles at the end.
EulerAngles axis_frame(double theta, double phi);
std::pair<double, double> frame_axis(const EulerAngles& frame);

// Parameter-vector helpers shared with the Vertesi search. Layout:
// [x, y, theta_A, phi_A, theta_B, phi_B].
inline constexpr int kFilterSearchDim = 6;
double fold_into(double value, double lo, double hi);
FilterParams decode_filter(const Eigen::VectorXd& v, int offset,
                           const OptimizerOptions& opts);
FilterParams canonical_filter(const FilterParams& fp);

}  // namespace bellfilter
