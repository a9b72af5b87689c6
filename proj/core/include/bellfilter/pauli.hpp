#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace bellfilter {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Pauli basis in the frame used throughout the library:
///
///   sigma0 = I,  sigma1 = diag(-1, 1),  sigma2 = [[0, 1], [1, 0]],
///   sigma3 = [[0, i], [-i, 0]].
///
/// In the textbook labelling this is (sigma1, sigma2, sigma3) = (-Z, X, -Y).
/// The triple is right-handed (sigma1 sigma2 = i sigma3), so qubit unitaries
/// still act on coefficient vectors through SO(3). Filters are diagonal in
/// this frame, i.e. aligned with the sigma1 axis.
const Matrix2c& pauli(int k);

/// Kronecker product a x b with a acting on qubit A.
Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

// Tolerances applied by make_density.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositiveTol = 1e-10;

/// Validated two-qubit state: Hermitian, unit trace, positive semidefinite.
/// Only make_density can construct one.
class DensityMatrix {
 public:
  const Matrix4c& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  explicit DensityMatrix(Matrix4c entries) : entries_(std::move(entries)) {}
  friend DensityMatrix make_density(const Matrix4c& entries);

  Matrix4c entries_;
};

DensityMatrix make_density(const Matrix4c& entries);

DensityMatrix maximally_mixed();
Matrix4c singlet_projector();

/// p |psi-><psi-| + (1 - p) I/4, defined for -1/3 <= p <= 1.
DensityMatrix werner(double p);

/// (I + r sigma1 x I - p sum_i sigma_i x sigma_i) / 4.
DensityMatrix rho1(double p, double r);

/// (I + p sigma1 x I + p sum_i sigma_i x sigma_i) / 4.
DensityMatrix rho2(double p);

/// Pauli-basis coefficients ttilde(a, b) = tr[rho sigma_a x sigma_b]:
///
///   ttilde = [[1, r^T], [s, T]]
///
/// r is Bob's Bloch vector (top row), s is Alice's (left column) and T is the
/// 3x3 correlation block.
struct ExtendedCorrelation {
  Eigen::Matrix4d ttilde = Eigen::Matrix4d::Identity();

  Eigen::Vector3d r() const { return ttilde.block<1, 3>(0, 1).transpose(); }
  Eigen::Vector3d s() const { return ttilde.block<3, 1>(1, 0); }
  Eigen::Matrix3d T() const { return ttilde.block<3, 3>(1, 1); }
};

ExtendedCorrelation correlation_data(const DensityMatrix& rho);

/// Inverse of correlation_data: (1/4) sum_ab ttilde(a, b) sigma_a x sigma_b.
Matrix4c density_from_correlation(const Eigen::Matrix4d& ttilde);

Matrix4c partial_transpose_b(const Matrix4c& m);

/// Smallest eigenvalue of the partial transpose over B. Negative values
/// witness entanglement.
double ppt_min_eigenvalue(const DensityMatrix& rho);

struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Proper rotation together with the ZYZ angles it was built from.
struct Rotation3 {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity();
  EulerAngles origin;
};

/// R = Rz(alpha) Ry(beta) Rz(gamma).
Rotation3 euler_to_rotation(double alpha, double beta, double gamma);
Rotation3 euler_to_rotation(const EulerAngles& angles);

/// Equivalent angles inside [0, 2pi) x [0, pi] x [0, 2pi).
EulerAngles canonical_euler(const EulerAngles& angles);

/// ZYZ angles of a proper rotation, in canonical ranges. At beta = 0 or pi
/// only alpha +- gamma is determined; alpha is set to 0 there.
EulerAngles euler_from_rotation(const Eigen::Matrix3d& r);

/// SO(3) image of a qubit unitary: U sigma_i U^dag = sum_j R(i, j) sigma_j.
Eigen::Matrix3d rotation_from_unitary(const Matrix2c& u);

/// A unitary U with rotation_from_unitary(U) == euler_to_rotation(angles).
Matrix2c unitary_from_euler(const EulerAngles& angles);

/// Block-embedded rotations acting on the extended correlation matrix:
/// diag(1, O_A) ttilde diag(1, O_B)^T.
ExtendedCorrelation local_unitary_rotate(const ExtendedCorrelation& tt,
                                         const Rotation3& oa,
                                         const Rotation3& ob);

/// (U x V) rho (U x V)^dag.
Matrix4c conjugate_local(const Matrix4c& rho, const Matrix2c& u,
                         const Matrix2c& v);

}  // namespace bellfilter
