#include "bellfilter/pauli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bellfilter/error.hpp"

namespace bellfilter {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

Matrix4c sum_sigma_sigma() {
  Matrix4c acc = Matrix4c::Zero();
  for (int k = 1; k <= 3; ++k) acc += kron(pauli(k), pauli(k));
  return acc;
}

Eigen::Matrix3d rot_z(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Eigen::Matrix3d m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Eigen::Matrix3d rot_y(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Eigen::Matrix3d m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

// exp(i t sigma_k / 2)
Matrix2c half_turn(int k, double t) {
  return std::cos(0.5 * t) * Matrix2c::Identity() +
         Complex(0.0, std::sin(0.5 * t)) * pauli(k);
}

double wrap_2pi(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const Matrix2c& pauli(int k) {
  static const std::array<Matrix2c, 4> basis = [] {
    const Complex i(0.0, 1.0);
    std::array<Matrix2c, 4> b;
    b[0] = Matrix2c::Identity();
    b[1] << -1.0, 0.0, 0.0, 1.0;
    b[2] << 0.0, 1.0, 1.0, 0.0;
    b[3] << 0.0, i, -i, 0.0;
    return b;
  }();
  if (k < 0 || k > 3)
    throw Error(ErrorCode::OutOfRange, "Pauli index must be in 0..3");
  return basis[static_cast<std::size_t>(k)];
}

DensityMatrix make_density(const Matrix4c& entries) {
  if (!entries.allFinite())
    throw Error(ErrorCode::InvalidInput, "density matrix has non-finite entries");

  const double herm_err = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol)
    throw Error(ErrorCode::NotHermitian,
                "max |rho - rho^dag| = " + describe(herm_err));

  const double trace_err = std::abs(entries.trace() - Complex(1.0, 0.0));
  if (trace_err > kTraceTol)
    throw Error(ErrorCode::TraceNotOne, "|tr rho - 1| = " + describe(trace_err));

  Matrix4c herm = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(herm, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPositiveTol)
    throw Error(ErrorCode::NotPositive,
                "minimal eigenvalue " + describe(min_eig));

  return DensityMatrix(std::move(herm));
}

DensityMatrix maximally_mixed() { return make_density(0.25 * Matrix4c::Identity()); }

Matrix4c singlet_projector() {
  // (|01> - |10>)/sqrt(2) in the computational basis.
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

DensityMatrix werner(double p) {
  if (!std::isfinite(p) || p < -1.0 / 3.0 - 1e-12 || p > 1.0 + 1e-12)
    throw Error(ErrorCode::OutOfRange,
                "Werner parameter " + describe(p) + " outside [-1/3, 1]");
  return make_density(p * singlet_projector() +
                      (1.0 - p) * 0.25 * Matrix4c::Identity());
}

DensityMatrix rho1(double p, double r) {
  if (!std::isfinite(p) || !std::isfinite(r))
    throw Error(ErrorCode::OutOfRange, "rho1 parameters must be finite");
  const Matrix4c m = 0.25 * (Matrix4c::Identity() +
                             r * kron(pauli(1), pauli(0)) - p * sum_sigma_sigma());
  return make_density(m);
}

DensityMatrix rho2(double p) {
  if (!std::isfinite(p))
    throw Error(ErrorCode::OutOfRange, "rho2 parameter must be finite");
  const Matrix4c m = 0.25 * (Matrix4c::Identity() +
                             p * kron(pauli(1), pauli(0)) + p * sum_sigma_sigma());
  return make_density(m);
}

ExtendedCorrelation correlation_data(const DensityMatrix& rho) {
  ExtendedCorrelation out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Complex t = (rho.matrix() * kron(pauli(a), pauli(b))).trace();
      out.ttilde(a, b) = t.real();
    }
  }
  out.ttilde(0, 0) = 1.0;
  return out;
}

Matrix4c density_from_correlation(const Eigen::Matrix4d& ttilde) {
  Matrix4c m = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m += ttilde(a, b) * kron(pauli(a), pauli(b));
  return 0.25 * m;
}

Matrix4c partial_transpose_b(const Matrix4c& m) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
  return out;
}

double ppt_min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(partial_transpose_b(rho.matrix()),
                                                 Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Rotation3 euler_to_rotation(double alpha, double beta, double gamma) {
  Rotation3 r;
  r.matrix = rot_z(alpha) * rot_y(beta) * rot_z(gamma);
  r.origin = {alpha, beta, gamma};
  return r;
}

Rotation3 euler_to_rotation(const EulerAngles& angles) {
  return euler_to_rotation(angles.alpha, angles.beta, angles.gamma);
}

EulerAngles canonical_euler(const EulerAngles& angles) {
  double alpha = angles.alpha;
  double gamma = angles.gamma;
  double beta = wrap_2pi(angles.beta);
  // Rz(a) Ry(-b) Rz(g) == Rz(a + pi) Ry(b) Rz(g + pi)
  if (beta > std::numbers::pi) {
    beta = kTwoPi - beta;
    alpha += std::numbers::pi;
    gamma += std::numbers::pi;
  }
  return {wrap_2pi(alpha), beta, wrap_2pi(gamma)};
}

EulerAngles euler_from_rotation(const Eigen::Matrix3d& r) {
  const double sin_beta = std::hypot(r(0, 2), r(1, 2));
  if (sin_beta < 1e-12) {
    if (r(2, 2) > 0.0) return canonical_euler({0.0, 0.0, std::atan2(r(1, 0), r(0, 0))});
    return canonical_euler({0.0, std::numbers::pi, std::atan2(r(1, 0), -r(0, 0))});
  }
  return canonical_euler({std::atan2(r(1, 2), r(0, 2)), std::atan2(sin_beta, r(2, 2)),
                          std::atan2(r(2, 1), -r(2, 0))});
}

Eigen::Matrix3d rotation_from_unitary(const Matrix2c& u) {
  Eigen::Matrix3d r;
  for (int i = 1; i <= 3; ++i) {
    const Matrix2c rotated = u * pauli(i) * u.adjoint();
    for (int j = 1; j <= 3; ++j)
      r(i - 1, j - 1) = 0.5 * (rotated * pauli(j)).trace().real();
  }
  return r;
}

Matrix2c unitary_from_euler(const EulerAngles& angles) {
  // R(U1 U2) = R(U2) R(U1) and R(exp(i t sigma_k / 2)) is the active rotation
  // about axis k, so the factors appear in reverse order.
  return half_turn(3, angles.gamma) * half_turn(2, angles.beta) *
         half_turn(3, angles.alpha);
}

ExtendedCorrelation local_unitary_rotate(const ExtendedCorrelation& tt,
                                         const Rotation3& oa,
                                         const Rotation3& ob) {
  Eigen::Matrix4d ea = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d eb = Eigen::Matrix4d::Identity();
  ea.block<3, 3>(1, 1) = oa.matrix;
  eb.block<3, 3>(1, 1) = ob.matrix;
  ExtendedCorrelation out;
  out.ttilde = ea * tt.ttilde * eb.transpose();
  return out;
}

Matrix4c conjugate_local(const Matrix4c& rho, const Matrix2c& u,
                         const Matrix2c& v) {
  const Matrix4c uv = kron(u, v);
  return uv * rho * uv.adjoint();
}

}  // namespace bellfilter
