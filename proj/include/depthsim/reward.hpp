#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "depthsim/policy.hpp"

namespace depthsim::policy {

inline constexpr int kNumFeet = 2;

/// Per-step quantities referenced by the locomotion reward terms.
struct RewardInputs {
  double v_cmd_x = 0.0;
  double v_cmd_y = 0.0;
  double v_mean_x = 0.0;  ///< averaged base velocity
  double v_mean_y = 0.0;
  double v_z = 0.0;
  std::array<double, 2> omega_xy{};
  std::array<double, 2> gravity_xy{};  ///< projected gravity, x/y components
  JointVector tau{};
  JointVector kp{};
  JointVector q{};
  JointVector dq{};
  JointVector q_min{};
  JointVector q_max{};
  JointVector tau_max{};
  std::array<double, kNumFeet> foot_fx{};
  std::array<double, kNumFeet> foot_fz{};
  std::array<bool, kNumFeet> swing{};
  double a21 = 0.0;  ///< gait-phase residual
  double a22 = 0.0;  ///< forward-velocity residual
  double a21_prev = 0.0;
  double a22_prev = 0.0;
};

enum class RewardTerm {
  XVelocity,
  YVelocity,
  ZVelocity,
  AngularVelocity,
  Orientation,
  Torques,
  JointVelocity,
  DofPosLimits,
  TorqueLimits,
  DeltaVCommand,
  DeltaCycle,
  DeltaCommandSmoothness,
  Stumble,
  StumbleSwing,
};

inline constexpr int kNumRewardTerms = 14;

inline constexpr std::array<std::string_view, kNumRewardTerms> kRewardTermNames{
    "x_velocity",   "y_velocity",      "z_velocity",     "angular_velocity",
    "orientation",  "torques",         "joint_velocity", "dof_pos_limits",
    "torque_limits", "delta_v_command", "delta_cycle",    "delta_command_smoothness",
    "stumble",      "stumble_swing",
};

enum class TorqueNorm { L1, L2 };

struct RewardOptions {
  TorqueNorm torque_norm = TorqueNorm::L1;
  double stumble_ratio = 0.5;       ///< |F_x| > ratio * F_z
  double swing_force_limit = 10.0;  ///< N
};

using RewardTerms = std::array<double, kNumRewardTerms>;

inline double term(const RewardTerms& t, RewardTerm which) {
  return t[static_cast<std::size_t>(which)];
}

/// Evaluates every term; throws InvalidInput if any gain is not positive.
RewardTerms reward_terms(const RewardInputs& in, const RewardOptions& options = {});

struct RewardWeights {
  double amp = 0.0;
  std::map<std::string, double, std::less<>> terms;
};

/// amp weight * amp_r + sum of weighted terms; throws Config if a term has no weight.
double total_reward(const RewardWeights& weights, const RewardTerms& terms, double amp_r);

}  // namespace depthsim::policy
