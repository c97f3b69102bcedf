#include "depthsim/render.hpp"

#include "depthsim/parallel.hpp"

namespace depthsim {

DepthImage render_depth(const Bvh* terrain, const Bvh* robot, const PinholeIntrinsics& intr,
                        const Extrinsics& extr, const RenderOptions& options) {
  intr.validate();
  extr.validate();
  DepthImage image(intr.width, intr.height, kNoDepth);
  parallel_for(intr.height, options.threads, [&](int v) {
    for (int u = 0; u < intr.width; ++u) {
      const Ray ray = pixel_ray(intr, extr, u, v);
      std::optional<Hit> hit;
      if (terrain) hit = terrain->intersect(ray);
      if (robot) {
        auto robot_hit = robot->intersect(ray);
        if (robot_hit && (!hit || robot_hit->t < hit->t)) hit = robot_hit;
      }
      if (!hit) continue;
      const double z = extr.to_camera(hit->point).z();
      if (z > 0.0) image.at(u, v) = static_cast<float>(z);
    }
  });
  return image;
}

DepthImage render_depth(const TriangleMesh& terrain, const TriangleMesh* robot,
                        const PinholeIntrinsics& intr, const Extrinsics& extr,
                        const RenderOptions& options) {
  std::optional<Bvh> terrain_bvh, robot_bvh;
  if (!terrain.empty()) terrain_bvh = Bvh::build(terrain);
  if (robot && !robot->empty()) robot_bvh = Bvh::build(*robot);
  return render_depth(terrain_bvh ? &*terrain_bvh : nullptr, robot_bvh ? &*robot_bvh : nullptr,
                      intr, extr, options);
}

std::vector<DepthImage> render_batch(const Bvh& terrain, const std::vector<EnvironmentView>& envs,
                                     const PinholeIntrinsics& intr,
                                     const RenderOptions& options) {
  std::vector<DepthImage> out;
  out.reserve(envs.size());
  for (const EnvironmentView& env : envs) {
    std::optional<Bvh> robot_bvh;
    if (env.robot && !env.robot->empty()) robot_bvh = Bvh::build(*env.robot);
    out.push_back(render_depth(&terrain, robot_bvh ? &*robot_bvh : nullptr, intr, env.camera, options));
  }
  return out;
}

}  // namespace depthsim
