#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>

#include "bellfilter/error.hpp"
#include "bellfilter/lhv.hpp"
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

double entry_sigma(double p, std::int64_t n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("model validation") {
  CHECK_NOTHROW(LhvModel(0.5));
  CHECK_NOTHROW(LhvModel(1e-6));
  CHECK(code_of([] { LhvModel(0.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { LhvModel(0.6); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { LhvModel(0.3, Eigen::Vector3d(1, 1, 0)); }) == ErrorCode::OutOfRange);

  // target state is rho2(-q)
  for (double q : {0.1, 0.309, 0.45, 0.5})
    CHECK((LhvModel(q).target_state().matrix() - oracle::rho2(-q)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("analytic joint distribution") {
  const LhvModel m(0.4);
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  const JointDistribution same = quantum_joint(m, x, x);
  CHECK(same.p_pp == doctest::Approx(0.05).epsilon(1e-14));

  const JointDistribution perp =
      quantum_joint(m, Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ());
  for (int a : {1, -1})
    for (int b : {1, -1}) CHECK(perp.get(a, b) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(perp.get(0, 1), Error);

  oracle::Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const double q = oracle::uniform(rng, 0.01, 0.5);
    const LhvModel model(q);
    const Eigen::Vector3d a = oracle::random_unit(rng), b = oracle::random_unit(rng);
    const JointDistribution j = quantum_joint(model, a, b);
    const oracle::M4 rho = oracle::rho2(-q);
    auto proj = [](const Eigen::Vector3d& v, int s) {
      return oracle::M2(0.5 * (oracle::sigma(0) +
                               s * (v(0) * oracle::sigma(1) + v(1) * oracle::sigma(2) +
                                    v(2) * oracle::sigma(3))));
    };
    for (int sa : {1, -1})
      for (int sb : {1, -1}) {
        const double p = (rho * oracle::kron(proj(a, sa), proj(b, sb))).trace().real();
        CHECK(std::abs(j.get(sa, sb) - p) < 1e-12);
      }
    const JointDistribution d = joint_from_state(model.target_state(), a, b);
    CHECK(std::abs(d.p_mp - j.p_mp) < 1e-12);
    CHECK(std::abs(j.sum() - 1.0) < 1e-12);
    CHECK(j.correlator() == doctest::Approx(-q * a.dot(b)).epsilon(1e-12));
    CHECK(j.alice_mean() == doctest::Approx(-q * a(0)).epsilon(1e-12));
    CHECK(std::abs(j.bob_mean()) < 1e-12);
  }
  CHECK(code_of([&] { quantum_joint(m, Eigen::Vector3d(2, 0, 0), x); }) == ErrorCode::OutOfRange);
}

TEST_CASE("biased sampler moments") {
  LhvRng rng(52);
  const Eigen::Vector3d a = Eigen::Vector3d(1, 2, -2).normalized();
  const int n = 1000000;
  double s1 = 0, sabs = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d l = sample_biased_lambda(a, rng);
    REQUIRE(std::abs(l.norm() - 1.0) < 1e-12);
    const double z = a.dot(l);
    s1 += z;
    sabs += std::abs(z);
    s2 += z * z;
  }
  // under the density |z| on [-1, 1]: Var z = 1/2, Var|z| = 1/2 - 4/9, Var z^2 = 1/3 - 1/4
  CHECK(std::abs(s1 / n) < 3.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(sabs / n - 2.0 / 3.0) < 3.0 * std::sqrt((0.5 - 4.0 / 9.0) / n));
  CHECK(std::abs(s2 / n - 0.5) < 3.0 * std::sqrt((1.0 / 3.0 - 0.25) / n));
}

TEST_CASE("biased sampler passes Kolmogorov-Smirnov") {
  LhvRng rng(53);
  const Eigen::Vector3d a = Eigen::Vector3d::UnitZ();
  const int n = 100000;
  std::vector<double> z(n);
  for (auto& v : z) v = a.dot(sample_biased_lambda(a, rng));
  std::sort(z.begin(), z.end());
  double d = 0;
  for (int i = 0; i < n; ++i) {
    const double f = 0.5 + 0.5 * z[i] * std::abs(z[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(f - static_cast<double>(i + 1) / n)});
  }
  // asymptotic critical value at significance 1e-3
  CHECK(d * std::sqrt(static_cast<double>(n)) < 1.9495);
}

TEST_CASE("simulation") {
  const LhvModel m(0.45);
  const Eigen::Vector3d a = Eigen::Vector3d(0.3, -0.4, 0.5).normalized();
  const Eigen::Vector3d b = Eigen::Vector3d(-0.6, 0.1, 0.7).normalized();

  const JointDistribution one = simulate_lhv(m, a, b, 1, 9);
  CHECK(one.sum() == 1.0);
  CHECK(std::max({one.p_pp, one.p_pm, one.p_mp, one.p_mm}) == 1.0);

  const JointDistribution s1 = simulate_lhv(m, a, b, 10000, 9);
  const JointDistribution s2 = simulate_lhv(m, a, b, 10000, 9);
  CHECK(s1.p_pp == s2.p_pp);
  CHECK(s1.p_mm == s2.p_mm);
  CHECK(s1.sum() == doctest::Approx(1.0).epsilon(1e-15));

  const std::int64_t n = 1000000;
  const JointDistribution sim = simulate_lhv(m, a, b, n, 10);
  const JointDistribution exact = quantum_joint(m, a, b);
  for (int sa : {1, -1})
    for (int sb : {1, -1})
      CHECK(std::abs(sim.get(sa, sb) - exact.get(sa, sb)) <
            4.0 * entry_sigma(exact.get(sa, sb), n));

  CHECK(code_of([&] { simulate_lhv(m, a, b, 0, 1); }) == ErrorCode::OutOfRange);
}

TEST_CASE("correlators and marginals over many pairs") {
  LhvRng pick(54);
  const LhvModel m(0.45);
  const std::int64_t n = 200000;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d a = random_unit_vector(pick), b = random_unit_vector(pick);
    const JointDistribution sim = simulate_lhv(m, a, b, n, 100 + i);
    const double e_ab = -m.q() * a.dot(b);
    const double e_a = -m.q() * a(0);
    // variance of a +-1 variable with mean e is 1 - e^2
    CHECK(std::abs(sim.correlator() - e_ab) < 4.0 * std::sqrt((1 - e_ab * e_ab) / n));
    CHECK(std::abs(sim.alice_mean() - e_a) < 4.0 * std::sqrt((1 - e_a * e_a) / n));
    CHECK(std::abs(sim.bob_mean()) < 4.0 * std::sqrt(1.0 / n));
  }
}

TEST_CASE("lhv report") {
  const LhvModel m(0.45);
  LhvRng pick(55);
  std::vector<DirectionPair> pairs;
  for (int i = 0; i < 20; ++i) pairs.emplace_back(random_unit_vector(pick), random_unit_vector(pick));

  const LhvReport big = lhv_report(m, pairs, 1000000, 7);
  CHECK(big.pairs == 20);
  CHECK(big.max_abs_deviation < 4e-3);
  CHECK(big.within(4.0));

  const LhvReport small = lhv_report(m, pairs, 10000, 7);
  CHECK(big.max_abs_deviation < small.max_abs_deviation);

  CHECK(code_of([&] { lhv_report(m, {}, 100, 1); }) == ErrorCode::InvalidInput);
}
