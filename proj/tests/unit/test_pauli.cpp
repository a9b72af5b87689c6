#include <doctest/doctest.h>

#include "bellfilter/error.hpp"
#include "bellfilter/pauli.hpp"
#include "oracle.hpp"

using namespace bellfilter;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pauli table follows the diag(-1,1) convention") {
  for (int k = 0; k < 4; ++k) CHECK(max_abs(pauli(k) - oracle::sigma(k)) == 0.0);
  for (int k = 1; k <= 3; ++k) {
    CHECK(max_abs(pauli(k) - pauli(k).adjoint()) == 0.0);
    CHECK(std::abs(pauli(k).trace()) == 0.0);
    CHECK(max_abs(pauli(k) * pauli(k) - Matrix2c::Identity()) == 0.0);
  }
  // right-handed: sigma1 sigma2 = i sigma3
  CHECK(max_abs(pauli(1) * pauli(2) - Complex(0, 1) * pauli(3)) < 1e-15);
  CHECK_THROWS_AS(pauli(4), Error);
}

TEST_CASE("kron matches index formula") {
  oracle::Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const Matrix2c a = Matrix2c::Random(), b = Matrix2c::Random();
    CHECK(max_abs(kron(a, b) - oracle::kron(a, b)) < 1e-15);
  }
}

TEST_CASE("make_density validation") {
  CHECK_NOTHROW(make_density(Matrix4c::Identity() / 4.0));
  CHECK(max_abs(maximally_mixed().matrix() - Matrix4c::Identity() / 4.0) == 0.0);

  const DensityMatrix s = make_density(singlet_projector());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(s.matrix());
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(es.eigenvalues()(2)) < 1e-12);
  CHECK(max_abs(singlet_projector() - oracle::singlet()) < 1e-15);

  Matrix4c bumped = Matrix4c::Identity() / 4.0;
  bumped(0, 0) += 0.1;
  CHECK(code_of([&] { make_density(bumped); }) == ErrorCode::TraceNotOne);

  Matrix4c skew = Matrix4c::Identity() / 4.0;
  skew(0, 1) = Complex(0.1, 0.0);
  CHECK(code_of([&] { make_density(skew); }) == ErrorCode::NotHermitian);

  Matrix4c neg = Matrix4c::Identity() / 4.0;
  neg(0, 0) = -0.1;
  neg(1, 1) = 0.6;
  CHECK(code_of([&] { make_density(neg); }) == ErrorCode::NotPositive);

  Matrix4c nan = Matrix4c::Identity() / 4.0;
  nan(2, 2) = std::nan("");
  CHECK_THROWS_AS(make_density(nan), Error);
}

TEST_CASE("werner family") {
  CHECK(max_abs(werner(0).matrix() - Matrix4c::Identity() / 4.0) < 1e-15);
  CHECK(max_abs(werner(1).matrix() - oracle::singlet()) < 1e-15);
  for (double p : {-1.0 / 3.0, -0.2, 0.3, 0.5, 0.9})
    CHECK(max_abs(werner(p).matrix() - oracle::werner(p)) < 1e-15);
  const Eigen::Matrix3d t = correlation_data(werner(0.5)).T();
  CHECK((t - (-0.5) * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(code_of([] { werner(1.01); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { werner(-0.34); }) == ErrorCode::OutOfRange);
}

TEST_CASE("rho1 family") {
  CHECK(max_abs(rho1(0, 0).matrix() - Matrix4c::Identity() / 4.0) < 1e-15);
  CHECK_NOTHROW(rho1(0.7, 0.3));
  CHECK(max_abs(rho1(0.705, 0.04).matrix() - oracle::rho1(0.705, 0.04)) < 1e-15);
  // the oracle confirms the state really is outside the physical region
  CHECK(oracle::min_eigenvalue(oracle::rho1(0.75, 0.3)) == doctest::Approx(-0.0125));
  CHECK(code_of([] { rho1(0.75, 0.3); }) == ErrorCode::NotPositive);
}

TEST_CASE("rho2 family") {
  CHECK(max_abs(rho2(0).matrix() - Matrix4c::Identity() / 4.0) < 1e-15);
  CHECK_NOTHROW(rho2(-0.5));
  CHECK(max_abs(rho2(-0.4).matrix() - oracle::rho2(-0.4)) < 1e-15);
  CHECK(oracle::min_eigenvalue(oracle::rho2(-0.6)) == doctest::Approx(-0.05));
  CHECK(code_of([] { rho2(-0.6); }) == ErrorCode::NotPositive);
}

TEST_CASE("correlation_data") {
  const ExtendedCorrelation s = correlation_data(make_density(singlet_projector()));
  CHECK(s.ttilde(0, 0) == 1.0);
  CHECK((s.T() + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(s.r().norm() < 1e-15);
  CHECK(s.s().norm() < 1e-15);

  const ExtendedCorrelation t2 = correlation_data(rho2(-0.3));
  CHECK((t2.s() - Eigen::Vector3d(-0.3, 0, 0)).norm() < 1e-15);
  CHECK(t2.r().norm() < 1e-15);
  CHECK((t2.T() - (-0.3) * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // r is Bob's Bloch vector
  const Matrix4c prod = oracle::kron(Matrix2c::Identity() / 2.0,
                                     oracle::pure_qubit(Eigen::Vector3d(0, 0, 1)));
  const ExtendedCorrelation tp = correlation_data(make_density(prod));
  CHECK((tp.r() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK(tp.s().norm() < 1e-15);

  oracle::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Matrix4c m = oracle::random_state_any_rank(rng);
    const ExtendedCorrelation tt = correlation_data(make_density(m));
    CHECK((tt.ttilde - oracle::correlations(m)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(tt.ttilde.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    CHECK(max_abs(density_from_correlation(tt.ttilde) - m) < 1e-10);
  }
}

TEST_CASE("ppt_min_eigenvalue") {
  CHECK(ppt_min_eigenvalue(maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ppt_min_eigenvalue(werner(1)) == doctest::Approx(-0.5).epsilon(1e-12));

  oracle::Rng rng(3);
  for (int i = 0; i < 100; ++i)
    CHECK(ppt_min_eigenvalue(make_density(oracle::random_separable(rng))) >= -1e-10);
  for (int i = 0; i < 20; ++i) {
    const Matrix4c m = oracle::random_state(rng);
    CHECK(ppt_min_eigenvalue(make_density(m)) ==
          doctest::Approx(oracle::min_eigenvalue(oracle::partial_transpose_b(m))).epsilon(1e-12));
  }
  // rho2 is entangled below -(sqrt5 - 1)/4
  const double edge = -(std::sqrt(5.0) - 1.0) / 4.0;
  CHECK(ppt_min_eigenvalue(rho2(edge)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ppt_min_eigenvalue(rho2(edge - 1e-4)) < 0.0);
  CHECK(ppt_min_eigenvalue(rho2(edge + 1e-4)) > 0.0);
}

TEST_CASE("euler_to_rotation") {
  const Rotation3 id = euler_to_rotation(0, 0, 0);
  CHECK((id.matrix - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  const Rotation3 half = euler_to_rotation(oracle::kPi, 0, 0);
  Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
  expect(0, 0) = -1;
  expect(1, 1) = -1;
  expect(2, 2) = 1;
  CHECK((half.matrix - expect).cwiseAbs().maxCoeff() < 1e-15);

  oracle::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const EulerAngles e{oracle::uniform(rng, -7, 7), oracle::uniform(rng, -7, 7),
                        oracle::uniform(rng, -7, 7)};
    const Rotation3 r = euler_to_rotation(e);
    CHECK((r.matrix.transpose() * r.matrix - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(r.matrix.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.origin.alpha == e.alpha);
    const Eigen::Matrix3d zyz = oracle::rz(e.alpha) * oracle::ry(e.beta) * oracle::rz(e.gamma);
    CHECK((r.matrix - zyz).cwiseAbs().maxCoeff() < 1e-12);

    // the double cover: the SU(2) element maps back onto the same rotation
    const Matrix2c u = unitary_from_euler(e);
    CHECK(max_abs(u * u.adjoint() - Matrix2c::Identity()) < 1e-12);
    CHECK((oracle::rotation_of(u) - r.matrix).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rotation_from_unitary(u) - r.matrix).cwiseAbs().maxCoeff() < 1e-12);

    const EulerAngles c = canonical_euler(e);
    CHECK(c.alpha >= 0.0);
    CHECK(c.alpha < 2 * oracle::kPi);
    CHECK(c.beta >= 0.0);
    CHECK(c.beta <= oracle::kPi);
    CHECK(c.gamma >= 0.0);
    CHECK(c.gamma < 2 * oracle::kPi);
    CHECK((euler_to_rotation(c).matrix - r.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("local_unitary_rotate") {
  oracle::Rng rng(5);
  const ExtendedCorrelation s = correlation_data(make_density(singlet_projector()));
  const ExtendedCorrelation same = local_unitary_rotate(s, Rotation3{}, Rotation3{});
  CHECK((same.ttilde - s.ttilde).cwiseAbs().maxCoeff() == 0.0);

  for (int i = 0; i < 50; ++i) {
    const EulerAngles e{oracle::uniform(rng, 0, 6), oracle::uniform(rng, 0, 3),
                        oracle::uniform(rng, 0, 6)};
    const Rotation3 o = euler_to_rotation(e);
    const ExtendedCorrelation r = local_unitary_rotate(s, o, o);
    CHECK(r.ttilde(0, 0) == 1.0);
    CHECK((r.T() + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    const Matrix4c m = oracle::random_state(rng);
    const ExtendedCorrelation tt = correlation_data(make_density(m));
    const Rotation3 ob = euler_to_rotation(oracle::uniform(rng, 0, 6),
                                           oracle::uniform(rng, 0, 3),
                                           oracle::uniform(rng, 0, 6));
    const ExtendedCorrelation rot = local_unitary_rotate(tt, o, ob);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> e1(tt.T().transpose() * tt.T());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> e2(rot.T().transpose() * rot.T());
    CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("conjugating a state rotates its correlations") {
  oracle::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const Matrix4c m = oracle::random_state(rng);
    const Matrix2c u = oracle::random_unitary(rng), v = oracle::random_unitary(rng);
    const Matrix4c conj = conjugate_local(m, u, v);
    CHECK(max_abs(conj - oracle::kron(u, v) * m * oracle::kron(u, v).adjoint()) < 1e-14);
    // (U x V) rho (U x V)^dagger has T' = R_U^T T R_V
    const Eigen::Matrix3d expect =
        oracle::rotation_of(u).transpose() * oracle::T_block(m) * oracle::rotation_of(v);
    CHECK((oracle::T_block(conj) - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}
