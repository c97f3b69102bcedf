#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace depthsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Unit quaternion stored scalar-first (w, x, y, z).
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quat identity() { return {}; }
  static Quat from_axis_angle(const Vec3& axis, double angle);

  double norm() const;
};

/// Inputs deviating from unit norm by more than this are rejected;
/// anything closer is renormalized before use.
inline constexpr double kQuatNormTolerance = 1e-6;

/// Returns `q` renormalized, or throws InvalidInput if it is too far from unit.
Quat checked_unit(const Quat& q);

Vec3 quat_rotate(const Quat& q, const Vec3& v);
Quat quat_multiply(const Quat& a, const Quat& b);
Mat3 quat_to_matrix(const Quat& q);

using Face = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  bool empty() const { return faces.empty(); }

  /// Throws InvalidInput when a face references a missing vertex.
  void validate() const;
};

/// Canonical per-body vertex set; vertex k belongs to body `body_index[k]`.
struct KinematicTemplate {
  std::vector<Vec3> local_vertices;
  std::vector<Face> faces;
  std::vector<std::uint32_t> body_index;
  std::uint32_t body_count = 0;

  void validate() const;
};

struct BodyPose {
  Quat orientation;
  Vec3 translation = Vec3::Zero();

  /// Rigid composition: (this ∘ inner)(p) = this(inner(p)).
  BodyPose compose(const BodyPose& inner) const;
  Vec3 apply(const Vec3& p) const;
};

using BodyPoseSet = std::vector<BodyPose>;

TriangleMesh apply_terrain_offset(TriangleMesh mesh, double border);
TriangleMesh pose_robot(const KinematicTemplate& tmpl, const BodyPoseSet& poses);
TriangleMesh merge_meshes(const TriangleMesh& a, const TriangleMesh& b);

/// Closed axis-aligned box with outward-facing triangles.
TriangleMesh make_box(const Vec3& lo, const Vec3& hi);

/// Axis-aligned bounds of all vertices; returns false for a vertex-less mesh.
bool mesh_bounds(const TriangleMesh& mesh, Vec3& lo, Vec3& hi);

void write_obj(std::ostream& out, const TriangleMesh& mesh);

}  // namespace depthsim
