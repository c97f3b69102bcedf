#pragma once

#include <optional>
#include <vector>

#include "depthsim/bvh.hpp"
#include "depthsim/camera.hpp"
#include "depthsim/image.hpp"

namespace depthsim {

struct RenderOptions {
  unsigned threads = 1;  ///< 0 = all hardware threads
};

/// Depth of the nearest hit over terrain and robot: the camera-frame z of the
/// hit point, 0.0 where nothing is hit. Either scene part may be null.
DepthImage render_depth(const Bvh* terrain, const Bvh* robot, const PinholeIntrinsics& intr,
                        const Extrinsics& extr, const RenderOptions& options = {});

/// Convenience overload building BVHs on the fly; empty meshes are skipped.
DepthImage render_depth(const TriangleMesh& terrain, const TriangleMesh* robot,
                        const PinholeIntrinsics& intr, const Extrinsics& extr,
                        const RenderOptions& options = {});

/// One environment of a batched render.
struct EnvironmentView {
  Extrinsics camera;
  std::optional<TriangleMesh> robot;  ///< posed robot; nullopt disables self-occlusion
};

/// Renders B environments against one shared terrain BVH. Each robot mesh
/// gets its own BVH per call.
std::vector<DepthImage> render_batch(const Bvh& terrain, const std::vector<EnvironmentView>& envs,
                                     const PinholeIntrinsics& intr,
                                     const RenderOptions& options = {});

}  // namespace depthsim
