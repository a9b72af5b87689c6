#include "bellfilter/lhv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellfilter/error.hpp"

namespace bellfilter {
namespace {

constexpr double kUnitTol = 1e-10;

void require_unit(const Eigen::Vector3d& v, const char* name) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTol)
    throw Error(ErrorCode::OutOfRange, std::string(name) + " must be a unit vector");
}

Matrix2c bloch_operator(const Eigen::Vector3d& v) {
  return v(0) * pauli(1) + v(1) * pauli(2) + v(2) * pauli(3);
}

// Orthonormal e1, e2 completing the frame around a unit vector.
std::pair<Eigen::Vector3d, Eigen::Vector3d> frame_around(const Eigen::Vector3d& a) {
  const Eigen::Vector3d trial =
      std::abs(a(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = a.cross(trial).normalized();
  return {e1, a.cross(e1)};
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

LhvModel::LhvModel(double q, Eigen::Vector3d marginal_axis)
    : q_(q), axis_(std::move(marginal_axis)) {
  if (!(q > 0.0 && q <= 0.5))
    throw Error(ErrorCode::OutOfRange, "LHV model requires 0 < q <= 1/2, got " +
                                           std::to_string(q));
  require_unit(axis_, "marginal axis");
}

DensityMatrix LhvModel::target_state() const {
  const Matrix2c alice =
      0.5 * (Matrix2c::Identity() - (q_ / (1.0 - q_)) * bloch_operator(axis_));
  const Matrix4c m =
      q_ * singlet_projector() + (1.0 - q_) * kron(alice, 0.5 * Matrix2c::Identity());
  return make_density(m);
}

double JointDistribution::get(int a, int b) const {
  if (a == 1 && b == 1) return p_pp;
  if (a == 1 && b == -1) return p_pm;
  if (a == -1 && b == 1) return p_mp;
  if (a == -1 && b == -1) return p_mm;
  throw Error(ErrorCode::OutOfRange, "outcomes must be +-1");
}

JointDistribution quantum_joint(const LhvModel& model, const Eigen::Vector3d& avec,
                                const Eigen::Vector3d& bvec) {
  require_unit(avec, "avec");
  require_unit(bvec, "bvec");
  const double q = model.q();
  const double ab = avec.dot(bvec);
  const double am = avec.dot(model.marginal_axis());
  auto p = [&](int a, int b) { return (1.0 - q * a * b * ab) / 4.0 - a * am * q / 4.0; };
  return {p(1, 1), p(1, -1), p(-1, 1), p(-1, -1)};
}

JointDistribution joint_from_state(const DensityMatrix& rho, const Eigen::Vector3d& avec,
                                   const Eigen::Vector3d& bvec) {
  require_unit(avec, "avec");
  require_unit(bvec, "bvec");
  const Matrix2c id = Matrix2c::Identity();
  auto p = [&](int a, int b) {
    const Matrix2c pa = 0.5 * (id + static_cast<double>(a) * bloch_operator(avec));
    const Matrix2c pb = 0.5 * (id + static_cast<double>(b) * bloch_operator(bvec));
    return (rho.matrix() * kron(pa, pb)).trace().real();
  };
  return {p(1, 1), p(1, -1), p(-1, 1), p(-1, -1)};
}

Eigen::Vector3d random_unit_vector(LhvRng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Eigen::Vector3d sample_biased_lambda(const Eigen::Vector3d& avec, LhvRng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // |z| has density 2|z| on [0, 1], so |z| = sqrt(u).
  const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
  const double z = sign * std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const auto [e1, e2] = frame_around(avec);
  return z * avec + r * std::cos(phi) * e1 + r * std::sin(phi) * e2;
}

JointDistribution simulate_lhv(const LhvModel& model, const Eigen::Vector3d& avec,
                               const Eigen::Vector3d& bvec, std::int64_t n,
                               std::uint64_t seed) {
  require_unit(avec, "avec");
  require_unit(bvec, "bvec");
  if (n < 1) throw Error(ErrorCode::OutOfRange, "number of trials must be >= 1");

  LhvRng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double q = model.q();
  const double alice_plus =
      0.5 * (1.0 - (q / (1.0 - q)) * avec.dot(model.marginal_axis()));

  std::array<std::int64_t, 4> counts{};
  for (std::int64_t t = 0; t < n; ++t) {
    int a = 0;
    int b = 0;
    if (unit(rng) < q) {
      const Eigen::Vector3d lambda = sample_biased_lambda(avec, rng);
      a = avec.dot(lambda) >= 0.0 ? -1 : 1;
      b = bvec.dot(lambda) >= 0.0 ? 1 : -1;
    } else {
      a = unit(rng) < alice_plus ? 1 : -1;
      b = unit(rng) < 0.5 ? 1 : -1;
    }
    ++counts[static_cast<std::size_t>((a == 1 ? 0 : 2) + (b == 1 ? 0 : 1))];
  }
  const double dn = static_cast<double>(n);
  return {counts[0] / dn, counts[1] / dn, counts[2] / dn, counts[3] / dn};
}

LhvReport lhv_report(const LhvModel& model, const std::vector<DirectionPair>& pairs,
                     std::int64_t n, std::uint64_t seed) {
  if (pairs.empty()) throw Error(ErrorCode::InvalidInput, "direction pair list is empty");
  if (n < 1) throw Error(ErrorCode::OutOfRange, "number of trials must be >= 1");

  LhvReport report;
  report.pairs = pairs.size();
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [avec, bvec] = pairs[i];
    const JointDistribution exact = quantum_joint(model, avec, bvec);
    const JointDistribution sim = simulate_lhv(model, avec, bvec, n, sub_seed(seed, i));
    const std::array<std::pair<double, double>, 4> entries{
        {{exact.p_pp, sim.p_pp}, {exact.p_pm, sim.p_pm},
         {exact.p_mp, sim.p_mp}, {exact.p_mm, sim.p_mm}}};
    for (const auto& [p, f] : entries) {
      const double dev = std::abs(f - p);
      report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
      const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / dn);
      const double z = sigma > 0.0 ? dev / sigma : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      report.max_sigma = std::max(report.max_sigma, z);
    }
  }
  return report;
}

}  // namespace bellfilter
