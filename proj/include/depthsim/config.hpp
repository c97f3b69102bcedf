#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "depthsim/camera.hpp"
#include "depthsim/heightmap.hpp"
#include "depthsim/noise.hpp"
#include "depthsim/reward.hpp"
#include "depthsim/terrain.hpp"

namespace depthsim {

struct CameraConfig {
  PinholeIntrinsics intrinsics;
  CameraMount mount;
  /// Fixed world-to-camera map; when set the mount and base poses are ignored.
  std::optional<Extrinsics> extrinsics;

  Extrinsics extrinsics_for(const BasePose& base) const {
    return extrinsics ? *extrinsics : mounted_extrinsics(base, mount);
  }
};

struct RobotConfig {
  /// "builtin:biped", a template file path as written, or "inline".
  std::string source = "builtin:biped";
  KinematicTemplate tmpl;
  /// Body poses relative to the base; defaults to identity for every body.
  BodyPoseSet rest_poses;
};

struct RewardConfig {
  policy::RewardWeights weights;
  policy::RewardOptions options;
};

struct GaitConfig {
  policy::GaitClock clock;
  policy::VelocityBounds velocity;
};

/// Everything a render or dataset run depends on.
struct SceneConfig {
  TerrainSpec terrain;
  CameraConfig camera;
  std::optional<RobotConfig> robot;
  NoiseParams noise;
  PipelineToggles toggles;
  HeightmapLayout heightmap;
  int environments = 1;
  /// One pose shared by all environments, or one per environment.
  std::vector<BasePose> bases{BasePose{Vec3(0.0, 0.0, 0.9), 0.0}};
  std::uint64_t seed = 0;
  int stack_size = 5;
  RewardConfig reward;
  GaitConfig gait;

  BasePose base_for(int env) const;
  void validate() const;
};

policy::RewardWeights default_reward_weights();

/// Parses the JSON scene format. Unknown keys are rejected; missing keys take
/// defaults. Relative template paths resolve against `base_dir`.
SceneConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
SceneConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const SceneConfig& config);
/// Sorted-key compact JSON of the fully resolved config.
std::string canonical_config(const SceneConfig& config);
/// FNV-1a 64 of canonical_config.
std::uint64_t config_hash(const SceneConfig& config);

/// Applies a "--toggle stage=bool" override; throws Config on bad syntax.
void apply_toggle(PipelineToggles& toggles, std::string_view assignment);

}  // namespace depthsim
