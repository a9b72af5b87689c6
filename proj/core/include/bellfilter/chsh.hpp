#pragma once

#include <Eigen/Dense>

#include "bellfilter/pauli.hpp"

namespace bellfilter {

inline constexpr double kChshClassicalBound = 2.0;

/// Maximal CHSH expectation over all observables, 2 sqrt(tau1 + tau2), with
/// tau1 >= tau2 the two largest eigenvalues of T^T T.
struct ChshResult {
  double value = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  bool violating = false;
};

ChshResult mvci(const Eigen::Matrix3d& T);
ChshResult mvci(const DensityMatrix& rho);

/// Bloch directions of A_i = a_i . sigma and B_j = b_j . sigma.
struct ChshSettings {
  Eigen::Vector3d a1, a2, b1, b2;
};

/// Settings attaining mvci(T). b1, b2 are mixed from the two leading
/// eigenvectors of T^T T at angle +-atan(sqrt(tau2 / tau1)); a1, a2 are the
/// normalized images of those eigenvectors under T.
/// Throws DegenerateCorrelation when tau1 < 1e-12.
ChshSettings optimal_chsh_settings(const Eigen::Matrix3d& T);

/// A1 x B1 + A1 x B2 + A2 x B1 - A2 x B2.
Matrix4c chsh_operator(const ChshSettings& settings);
double chsh_expectation(const DensityMatrix& rho, const ChshSettings& settings);

/// Lower bound on the optimal teleportation fidelity,
/// (1 + mvci / 12) / 2, for mvci in [0, 2 sqrt 2].
double teleportation_fidelity_bound(double mvci_value);

/// -x log2 x - (1 - x) log2 (1 - x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// Upper bound on Eve's Holevo quantity, h((1 + sqrt((mvci/2)^2 - 1)) / 2).
/// Defined for mvci in [2, 2 sqrt 2].
double holevo_bound(double mvci_value);

}  // namespace bellfilter
