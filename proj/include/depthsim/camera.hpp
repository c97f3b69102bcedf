#pragma once

#include "depthsim/geometry.hpp"

namespace depthsim {

/// Pinhole intrinsics in pixels. Camera frame: +z optical axis, +x right, +y down.
struct PinholeIntrinsics {
  double fx = 300.0;
  double fy = 300.0;
  double cx = 300.0;
  double cy = 240.0;
  int width = 600;
  int height = 480;

  void validate() const;
};

/// World-to-camera map p_c = rotation * p_w + translation.
struct Extrinsics {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Extrinsics identity() { return {}; }
  /// From the camera's world position and its camera-to-world rotation.
  static Extrinsics from_camera_pose(const Vec3& position, const Mat3& camera_to_world);

  Vec3 to_camera(const Vec3& p_world) const { return rotation * p_world + translation; }
  Vec3 camera_center() const { return rotation.transpose() * (-translation); }

  /// Throws InvalidInput unless rotation is orthonormal with det +1 (1e-9).
  void validate() const;
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

/// Ray through integer pixel (u, v); throws Domain outside the image.
Ray pixel_ray(const PinholeIntrinsics& intr, const Extrinsics& extr, int u, int v);

/// Camera rigidly attached to a yaw-only floating base.
struct CameraMount {
  Vec3 offset{0.12, 0.0, 0.2};   ///< camera position in the base frame (m)
  double pitch = 0.9;            ///< downward tilt of the optical axis (rad)
};

struct BasePose {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;

  Mat3 rotation() const;
};

Extrinsics mounted_extrinsics(const BasePose& base, const CameraMount& mount);

}  // namespace depthsim
