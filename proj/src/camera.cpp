#include "depthsim/camera.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "depthsim/error.hpp"

namespace depthsim {

void PinholeIntrinsics::validate() const {
  if (!(fx > 0.0 && fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy) ||
      !std::isfinite(cx) || !std::isfinite(cy)) {
    fail(ErrorKind::InvalidInput, "intrinsics: focal lengths must be positive and finite");
  }
  if (width <= 0 || height <= 0) fail(ErrorKind::InvalidInput, "intrinsics: empty image");
}

Extrinsics Extrinsics::from_camera_pose(const Vec3& position, const Mat3& camera_to_world) {
  Extrinsics e;
  e.rotation = camera_to_world.transpose();
  e.translation = -(e.rotation * position);
  return e;
}

void Extrinsics::validate() const {
  const double ortho = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-9) || std::abs(rotation.determinant() - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidInput, "extrinsics: rotation is not a proper orthonormal matrix");
  }
  if (!translation.allFinite()) fail(ErrorKind::InvalidInput, "extrinsics: non-finite translation");
}

Ray pixel_ray(const PinholeIntrinsics& intr, const Extrinsics& extr, int u, int v) {
  if (u < 0 || u >= intr.width || v < 0 || v >= intr.height) {
    fail(ErrorKind::Domain, "pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                ") outside image");
  }
  const double x = (u - intr.cx) / intr.fx;
  const double y = (v - intr.cy) / intr.fy;
  const Vec3 d_c = Vec3(x, y, 1.0).normalized();
  const Mat3 rt = extr.rotation.transpose();
  return {rt * (-extr.translation), rt * d_c};
}

Mat3 BasePose::rotation() const {
  return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
}

Extrinsics mounted_extrinsics(const BasePose& base, const CameraMount& mount) {
  // Camera axes expressed in the base frame (x forward, y left, z up).
  const double c = std::cos(mount.pitch), s = std::sin(mount.pitch);
  const Vec3 z_axis(c, 0.0, -s);
  const Vec3 x_axis(0.0, -1.0, 0.0);
  const Vec3 y_axis = z_axis.cross(x_axis);
  Mat3 base_from_camera;
  base_from_camera.col(0) = x_axis;
  base_from_camera.col(1) = y_axis;
  base_from_camera.col(2) = z_axis;

  const Mat3 world_from_base = base.rotation();
  return Extrinsics::from_camera_pose(base.position + world_from_base * mount.offset,
                                      world_from_base * base_from_camera);
}

}  // namespace depthsim
