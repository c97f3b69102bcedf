#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "depthsim/bvh.hpp"
#include "depthsim/config.hpp"
#include "depthsim/heightmap.hpp"
#include "depthsim/image.hpp"
#include "depthsim/trajectory.hpp"

namespace depthsim {

struct OutputFormat {
  bool pfm = true;
  bool png16 = false;

  /// "pfm", "png16" or "both"; throws Config otherwise.
  static OutputFormat parse(std::string_view name);
};

struct FrameOutput {
  DepthImage clean;
  DepthImage corrupted;
  HeightmapGrid heightmap;
};

/// Holds the shared terrain BVH for a scene and renders frames against it.
class SceneRenderer {
 public:
  explicit SceneRenderer(SceneConfig config, unsigned threads = 1);

  /// World body poses default to the config's rest poses carried by `base`.
  FrameOutput render_frame(int env, std::int64_t frame, const BasePose& base,
                           const std::optional<BodyPoseSet>& world_bodies = std::nullopt) const;

  const SceneConfig& config() const { return config_; }
  const Bvh& terrain() const { return terrain_; }

 private:
  SceneConfig config_;
  Bvh terrain_;
  unsigned threads_;
};

/// One frame per environment at the configured base poses. Files land in
/// out_dir/env<e>/frame000000_{clean,depth}.{pfm,png}. Returns written paths.
std::vector<std::filesystem::path> run_render(const SceneConfig& config,
                                              const std::filesystem::path& out_dir,
                                              const OutputFormat& format, unsigned threads = 1);

inline constexpr int kManifestVersion = 1;

/// Renders every trajectory row and writes clean depth, corrupted depth and
/// the ground-truth heightmap per (env, frame), plus out_dir/manifest.json.
/// Throws Config when a row references an environment >= config.environments
/// or carries a body count that does not match the robot template.
nlohmann::json run_dataset(const SceneConfig& config, const std::vector<TrajectoryRow>& trajectory,
                           const std::filesystem::path& out_dir, const OutputFormat& format,
                           unsigned threads = 1);

/// Re-hashes every file referenced by out_dir/manifest.json; returns the
/// relative paths whose checksum is missing or wrong.
std::vector<std::string> verify_manifest(const std::filesystem::path& out_dir);

struct TerrainMae {
  std::string terrain;
  std::size_t frames = 0;
  double mean_cm = 0.0;
  double std_cm = 0.0;  ///< population standard deviation over frames
};

struct MaeReport {
  std::vector<TerrainMae> rows;      ///< sorted by terrain label
  std::vector<std::string> errors;   ///< one entry per unpaired or mismatched file
};

/// Pairs each ground-truth heightmap under gt_dir with the file at the same
/// relative path under pred_dir. Labels come from manifest.json files found
/// under gt_dir; without manifests every .bin is used and labelled by its
/// top-level directory (or "all").
MaeReport eval_mae(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

}  // namespace depthsim
