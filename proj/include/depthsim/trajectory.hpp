#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "depthsim/camera.hpp"
#include "depthsim/geometry.hpp"

namespace depthsim {

/// One row of a trajectory CSV.
///
/// Header columns: frame, env, x, y, z, yaw, then optionally for every body j
/// b<j>_qw, b<j>_qx, b<j>_qy, b<j>_qz, b<j>_tx, b<j>_ty, b<j>_tz giving world
/// body poses. Column order is free; names are matched exactly.
struct TrajectoryRow {
  std::int64_t frame = 0;
  int env = 0;
  BasePose base;
  std::optional<BodyPoseSet> bodies;
};

/// Throws Config with the offending line on malformed input, duplicate
/// (env, frame) pairs, or body columns that are incomplete.
std::vector<TrajectoryRow> parse_trajectory(std::string_view csv);

}  // namespace depthsim
