#include "depthsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "depthsim/error.hpp"

namespace depthsim::policy {
namespace {

template <std::size_t N>
void put(std::vector<double>& out, const std::array<double, N>& part) {
  out.insert(out.end(), part.begin(), part.end());
}

template <std::size_t N>
void take(std::span<const double> in, int offset, std::array<double, N>& part) {
  std::copy_n(in.begin() + offset, N, part.begin());
}

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": expected " + std::to_string(want) +
                                      " values, got " + std::to_string(got));
  }
}

}  // namespace

std::vector<double> assemble_blind_obs(const BlindObservation& obs) {
  std::vector<double> out;
  out.reserve(kBlindObsSize);
  put(out, obs.q);
  put(out, obs.dq);
  put(out, obs.omega);
  put(out, obs.gravity);
  put(out, obs.command);
  put(out, obs.clock);
  put(out, obs.v_hat);
  return out;
}

std::vector<double> assemble_perc_obs(const PerceptiveObservation& obs) {
  std::vector<double> out = assemble_blind_obs(obs.blind);
  out.reserve(kPercObsSize);
  put(out, obs.heightmap);
  put(out, obs.a_blind);
  return out;
}

BlindObservation unpack_blind_obs(std::span<const double> packed) {
  require_length(packed.size(), kBlindObsSize, "blind observation");
  BlindObservation obs;
  take(packed, BlindLayout::q, obs.q);
  take(packed, BlindLayout::dq, obs.dq);
  take(packed, BlindLayout::omega, obs.omega);
  take(packed, BlindLayout::gravity, obs.gravity);
  take(packed, BlindLayout::command, obs.command);
  take(packed, BlindLayout::clock, obs.clock);
  take(packed, BlindLayout::v_hat, obs.v_hat);
  return obs;
}

PerceptiveObservation unpack_perc_obs(std::span<const double> packed) {
  require_length(packed.size(), kPercObsSize, "perceptive observation");
  PerceptiveObservation obs;
  obs.blind = unpack_blind_obs(packed.first(kBlindObsSize));
  take(packed, PercLayout::heightmap, obs.heightmap);
  take(packed, PercLayout::a_blind, obs.a_blind);
  return obs;
}

PerceptiveObservation make_perc_obs(const BlindObservation& blind, std::span<const double> heightmap,
                                    std::span<const double> a_blind) {
  require_length(heightmap.size(), kHeightmapSize, "heightmap");
  require_length(a_blind.size(), kNumJoints, "blind action");
  PerceptiveObservation obs;
  obs.blind = blind;
  std::copy(heightmap.begin(), heightmap.end(), obs.heightmap.begin());
  std::copy(a_blind.begin(), a_blind.end(), obs.a_blind.begin());
  return obs;
}

Action22 Action22::from_vector(std::span<const double> a) {
  require_length(a.size(), kActionSize, "action");
  Action22 out;
  std::copy_n(a.begin(), kNumJoints, out.joint_targets.begin());
  out.delta_phase = a[20];
  out.delta_vx = a[21];
  return out;
}

JointVector blend_actions(const JointVector& a_mod, const JointVector& a_blind, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorKind::InvalidInput, "blend_actions: alpha " + std::to_string(alpha) + " outside [0, 1]");
  }
  JointVector out{};
  for (int i = 0; i < kNumJoints; ++i) out[i] = (1.0 - alpha) * a_mod[i] + alpha * a_blind[i];
  return out;
}

double wrap_phase(double phi) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

PhaseUpdate update_phase(const GaitClock& clock, double delta_phi) {
  const double applied = std::clamp(delta_phi, clock.dphi_min, clock.dphi_max) + clock.dphi_cmd;
  return {wrap_phase(clock.phi + applied), applied};
}

double modulate_velocity(double v_x, double delta_vx, const VelocityBounds& bounds) {
  return std::clamp(delta_vx, bounds.min, bounds.max) + v_x;
}

std::array<double, 4> clock_signals(const GaitClock& clock) {
  const double left = clock.phi + clock.gamma_left;
  const double right = clock.phi + clock.gamma_right;
  return {std::sin(left), std::cos(left), std::sin(right), std::cos(right)};
}

double amp_reward(double d) {
  const double e = d - 1.0;
  return std::max(0.0, 1.0 - 0.25 * e * e);
}

}  // namespace depthsim::policy
