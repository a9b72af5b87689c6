#include "bellfilter/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bellfilter/error.hpp"

namespace bellfilter {
namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
constexpr double kRangeSlack = 1e-9;

Matrix2c bloch_observable(const Eigen::Vector3d& v) {
  return v(0) * pauli(1) + v(1) * pauli(2) + v(2) * pauli(3);
}

// Any unit vector orthogonal to v.
Eigen::Vector3d orthogonal_unit(const Eigen::Vector3d& v) {
  Eigen::Vector3d trial = std::abs(v(0)) < 0.9 ? Eigen::Vector3d::UnitX()
                                               : Eigen::Vector3d::UnitY();
  return v.cross(trial).normalized();
}

}  // namespace

ChshResult mvci(const Eigen::Matrix3d& T) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(T.transpose() * T,
                                                        Eigen::EigenvaluesOnly);
  // ascending order
  const Eigen::Vector3d ev = solver.eigenvalues();
  ChshResult r;
  r.tau1 = std::max(ev(2), 0.0);
  r.tau2 = std::max(ev(1), 0.0);
  r.value = 2.0 * std::sqrt(r.tau1 + r.tau2);
  r.violating = r.value > kChshClassicalBound;
  return r;
}

ChshResult mvci(const DensityMatrix& rho) { return mvci(correlation_data(rho).T()); }

ChshSettings optimal_chsh_settings(const Eigen::Matrix3d& T) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(T.transpose() * T);
  const Eigen::Vector3d ev = solver.eigenvalues();
  const double tau1 = std::max(ev(2), 0.0);
  const double tau2 = std::max(ev(1), 0.0);
  if (tau1 < 1e-12)
    throw Error(ErrorCode::DegenerateCorrelation,
                "correlation block vanishes; CHSH settings undefined");

  const Eigen::Vector3d e1 = solver.eigenvectors().col(2);
  const Eigen::Vector3d e2 = solver.eigenvectors().col(1);
  const double theta = std::atan2(std::sqrt(tau2), std::sqrt(tau1));

  ChshSettings s;
  s.b1 = (std::cos(theta) * e1 + std::sin(theta) * e2).normalized();
  s.b2 = (std::cos(theta) * e1 - std::sin(theta) * e2).normalized();
  s.a1 = (T * e1).normalized();
  const Eigen::Vector3d te2 = T * e2;
  s.a2 = te2.norm() > 1e-12 ? Eigen::Vector3d(te2.normalized()) : orthogonal_unit(s.a1);
  return s;
}

Matrix4c chsh_operator(const ChshSettings& s) {
  const Matrix2c a1 = bloch_observable(s.a1), a2 = bloch_observable(s.a2);
  const Matrix2c b1 = bloch_observable(s.b1), b2 = bloch_observable(s.b2);
  return kron(a1, b1) + kron(a1, b2) + kron(a2, b1) - kron(a2, b2);
}

double chsh_expectation(const DensityMatrix& rho, const ChshSettings& settings) {
  return (rho.matrix() * chsh_operator(settings)).trace().real();
}

double teleportation_fidelity_bound(double mvci_value) {
  if (!(mvci_value >= -kRangeSlack && mvci_value <= kTsirelson + kRangeSlack))
    throw Error(ErrorCode::OutOfRange, "CHSH value must lie in [0, 2 sqrt 2]");
  return 0.5 * (1.0 + mvci_value / 12.0);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw Error(ErrorCode::OutOfRange, "binary entropy argument must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double holevo_bound(double mvci_value) {
  if (!(mvci_value >= kChshClassicalBound && mvci_value <= kTsirelson + kRangeSlack))
    throw Error(ErrorCode::OutOfRange, "Holevo bound needs a CHSH value in [2, 2 sqrt 2]");
  const double half = 0.5 * mvci_value;
  const double root = std::sqrt(std::max(half * half - 1.0, 0.0));
  return binary_entropy(std::min(0.5 * (1.0 + root), 1.0));
}

}  // namespace bellfilter
