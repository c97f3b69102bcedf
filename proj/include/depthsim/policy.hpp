#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace depthsim::policy {

inline constexpr int kNumJoints = 20;
inline constexpr int kHeightmapSize = 400;
inline constexpr int kBlindObsSize = 56;
inline constexpr int kPercObsSize = kBlindObsSize + kHeightmapSize + kNumJoints;  // 476
inline constexpr int kActionSize = 22;

using JointVector = std::array<double, kNumJoints>;
using Vec3d = std::array<double, 3>;

/// Proprioceptive observation, packed in declaration order.
struct BlindObservation {
  JointVector q{};
  JointVector dq{};
  Vec3d omega{};
  Vec3d gravity{};
  Vec3d command{};               ///< (v_x, v_y, yaw rate)
  std::array<double, 4> clock{};  ///< see clock_signals
  Vec3d v_hat{};

  bool operator==(const BlindObservation&) const = default;
};

struct PerceptiveObservation {
  BlindObservation blind;
  std::array<double, kHeightmapSize> heightmap{};
  JointVector a_blind{};

  bool operator==(const PerceptiveObservation&) const = default;
};

/// Offsets of each component inside the packed vectors.
struct BlindLayout {
  static constexpr int q = 0;
  static constexpr int dq = 20;
  static constexpr int omega = 40;
  static constexpr int gravity = 43;
  static constexpr int command = 46;
  static constexpr int clock = 49;
  static constexpr int v_hat = 53;
};
struct PercLayout {
  static constexpr int blind = 0;
  static constexpr int heightmap = kBlindObsSize;
  static constexpr int a_blind = kBlindObsSize + kHeightmapSize;
};

std::vector<double> assemble_blind_obs(const BlindObservation& obs);
std::vector<double> assemble_perc_obs(const PerceptiveObservation& obs);

/// Throws InvalidInput on a length mismatch.
BlindObservation unpack_blind_obs(std::span<const double> packed);
PerceptiveObservation unpack_perc_obs(std::span<const double> packed);

/// Builds the perceptive observation from variable-length parts; throws
/// InvalidInput unless they have 400 and 20 entries.
PerceptiveObservation make_perc_obs(const BlindObservation& blind, std::span<const double> heightmap,
                                    std::span<const double> a_blind);

/// Joint targets followed by the gait-phase (index 20) and forward-velocity
/// (index 21) residuals.
struct Action22 {
  JointVector joint_targets{};
  double delta_phase = 0.0;
  double delta_vx = 0.0;

  static Action22 from_vector(std::span<const double> a);
};

/// (1 - alpha) * a_mod + alpha * a_blind; throws InvalidInput unless alpha in [0, 1].
JointVector blend_actions(const JointVector& a_mod, const JointVector& a_blind, double alpha);

struct GaitClock {
  double phi = 0.0;          ///< wrapped to [0, 2*pi)
  double gamma_left = 0.0;
  double gamma_right = 3.14159265358979323846;
  double dphi_min = -0.05;
  double dphi_max = 0.05;
  double dphi_cmd = 0.0;     ///< nominal increment per control step
};

struct PhaseUpdate {
  double phi = 0.0;
  double applied = 0.0;
};

/// Clips the residual increment to [dphi_min, dphi_max], adds the nominal
/// increment and wraps the phase into [0, 2*pi).
PhaseUpdate update_phase(const GaitClock& clock, double delta_phi);

double wrap_phase(double phi);

struct VelocityBounds {
  double min = -0.3;
  double max = 0.3;
};

double modulate_velocity(double v_x, double delta_vx, const VelocityBounds& bounds);

/// [sin(phi + g_L), cos(phi + g_L), sin(phi + g_R), cos(phi + g_R)]
std::array<double, 4> clock_signals(const GaitClock& clock);

/// AMP style reward max(0, 1 - (d - 1)^2 / 4).
double amp_reward(double discriminator);

}  // namespace depthsim::policy
