#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bellfilter/pauli.hpp"

namespace bellfilter {

/// Local hidden-variable model reproducing the statistics of
/// rho2(-q) = q |psi-><psi-| + (1 - q) (I - q/(1-q) sigma_m)/2 x I/2,
/// valid for 0 < q <= 1/2. sigma_m is the Pauli operator along marginal_axis
/// (the sigma1 axis for rho2).
class LhvModel {
 public:
  explicit LhvModel(double q, Eigen::Vector3d marginal_axis = Eigen::Vector3d::UnitX());

  double q() const noexcept { return q_; }
  const Eigen::Vector3d& marginal_axis() const noexcept { return axis_; }

  /// The quantum state the model simulates.
  DensityMatrix target_state() const;

 private:
  double q_;
  Eigen::Vector3d axis_;
};

/// Probabilities of the outcome pairs (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct JointDistribution {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  double get(int a, int b) const;
  double sum() const { return p_pp + p_pm + p_mp + p_mm; }
  double correlator() const { return p_pp - p_pm - p_mp + p_mm; }
  double alice_mean() const { return p_pp + p_pm - p_mp - p_mm; }
  double bob_mean() const { return p_pp - p_pm + p_mp - p_mm; }
};

/// p(a, b) = (1 - q a b (avec . bvec)) / 4 - a q (avec . marginal_axis) / 4.
JointDistribution quantum_joint(const LhvModel& model, const Eigen::Vector3d& avec,
                                const Eigen::Vector3d& bvec);

/// tr[(P_a x P_b) rho] with P_a = (I + a avec . sigma) / 2.
JointDistribution joint_from_state(const DensityMatrix& rho, const Eigen::Vector3d& avec,
                                   const Eigen::Vector3d& bvec);

using LhvRng = std::mt19937_64;

/// Unit vector with density |avec . lambda| / (2 pi) on the sphere:
/// cos(theta) = s sqrt(u) about avec with s = +-1 equiprobable, u uniform,
/// azimuth uniform.
Eigen::Vector3d sample_biased_lambda(const Eigen::Vector3d& avec, LhvRng& rng);

/// Empirical outcome frequencies over n trials of the model. With
/// probability q the parties share a biased lambda and output
/// a = -sgn(avec . lambda), b = sgn(bvec . lambda) (sgn(0) = +1); otherwise
/// Alice outputs +-1 with probability (1 -+ q/(1-q) avec . axis) / 2 and Bob
/// flips a fair coin. Deterministic per seed.
JointDistribution simulate_lhv(const LhvModel& model, const Eigen::Vector3d& avec,
                               const Eigen::Vector3d& bvec, std::int64_t n,
                               std::uint64_t seed);

using DirectionPair = std::pair<Eigen::Vector3d, Eigen::Vector3d>;

struct LhvReport {
  double max_abs_deviation = 0.0;
  // Largest deviation in units of the binomial standard error
  // sqrt(p (1 - p) / n) of the analytic entry.
  double max_sigma = 0.0;
  std::size_t pairs = 0;

  bool within(double sigmas) const { return max_sigma <= sigmas; }
};

/// Runs simulate_lhv on every pair (pair i uses a sub-seed derived from
/// (seed, i)) and compares entrywise against quantum_joint.
LhvReport lhv_report(const LhvModel& model, const std::vector<DirectionPair>& pairs,
                     std::int64_t n, std::uint64_t seed);

/// Uniformly distributed unit vector.
Eigen::Vector3d random_unit_vector(LhvRng& rng);

}  // namespace bellfilter
