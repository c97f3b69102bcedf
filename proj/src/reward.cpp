#include "depthsim/reward.hpp"

#include <cmath>

#include "depthsim/error.hpp"

namespace depthsim::policy {

RewardTerms reward_terms(const RewardInputs& in, const RewardOptions& options) {
  for (double k : in.kp) {
    if (!(k > 0.0)) fail(ErrorKind::InvalidInput, "reward: proportional gains must be > 0");
  }
  RewardTerms t{};
  auto set = [&t](RewardTerm which, double v) { t[static_cast<std::size_t>(which)] = v; };

  set(RewardTerm::XVelocity, std::exp(-3.0 * std::abs(in.v_cmd_x - in.v_mean_x)));
  set(RewardTerm::YVelocity, std::exp(-10.0 * std::abs(in.v_cmd_y - in.v_mean_y)));
  set(RewardTerm::ZVelocity, std::exp(-2.0 * std::abs(in.v_z)));
  set(RewardTerm::AngularVelocity,
      std::exp(-(in.omega_xy[0] * in.omega_xy[0] + in.omega_xy[1] * in.omega_xy[1])));
  set(RewardTerm::Orientation,
      std::exp(-100.0 * (in.gravity_xy[0] * in.gravity_xy[0] + in.gravity_xy[1] * in.gravity_xy[1])));

  double torques = 0.0, joint_vel = 0.0, limits = 0.0, excess_l1 = 0.0, excess_sq = 0.0;
  for (int j = 0; j < kNumJoints; ++j) {
    const double ratio = in.tau[j] / in.kp[j];
    torques += ratio * ratio;
    joint_vel += in.dq[j] * in.dq[j];
    limits += std::max(0.0, in.q[j] - in.q_max[j]) + std::max(0.0, in.q_min[j] - in.q[j]);
    const double excess = std::max(0.0, std::abs(in.tau[j]) - in.tau_max[j]);
    excess_l1 += excess;
    excess_sq += excess * excess;
  }
  set(RewardTerm::Torques, torques);
  set(RewardTerm::JointVelocity, joint_vel);
  set(RewardTerm::DofPosLimits, limits);
  const double excess_norm =
      options.torque_norm == TorqueNorm::L1 ? excess_l1 : std::sqrt(excess_sq);
  set(RewardTerm::TorqueLimits, std::exp(-0.005 * excess_norm));

  set(RewardTerm::DeltaVCommand, std::exp(-200.0 * std::abs(in.a22)));
  set(RewardTerm::DeltaCycle, std::exp(-200.0 * std::abs(in.a21)));
  set(RewardTerm::DeltaCommandSmoothness,
      std::hypot(in.a21 - in.a21_prev, in.a22 - in.a22_prev));

  double stumble = 0.0, stumble_swing = 0.0;
  for (int f = 0; f < kNumFeet; ++f) {
    if (std::abs(in.foot_fx[f]) > options.stumble_ratio * in.foot_fz[f]) stumble += 1.0;
    if (in.swing[f] && std::abs(in.foot_fx[f]) > options.swing_force_limit) stumble_swing += 1.0;
  }
  set(RewardTerm::Stumble, stumble);
  set(RewardTerm::StumbleSwing, stumble_swing);
  return t;
}

double total_reward(const RewardWeights& weights, const RewardTerms& terms, double amp_r) {
  double total = weights.amp * amp_r;
  for (int i = 0; i < kNumRewardTerms; ++i) {
    const auto it = weights.terms.find(kRewardTermNames[i]);
    if (it == weights.terms.end()) {
      fail(ErrorKind::Config, "missing reward weight for '" + std::string(kRewardTermNames[i]) + "'");
    }
    total += it->second * terms[i];
  }
  return total;
}

}  // namespace depthsim::policy
