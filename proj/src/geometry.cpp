#include "depthsim/geometry.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Geometry>

#include "depthsim/error.hpp"

namespace depthsim {

Quat Quat::from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 n = axis.normalized();
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), n.x() * s, n.y() * s, n.z() * s};
}

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quat checked_unit(const Quat& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kQuatNormTolerance) {
    fail(ErrorKind::InvalidInput,
         "quaternion norm " + std::to_string(n) + " is not unit");
  }
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Vec3 quat_rotate(const Quat& q_in, const Vec3& v) {
  const Quat q = checked_unit(q_in);
  const Vec3 u(q.x, q.y, q.z);
  // v' = v + 2w(u x v) + 2 u x (u x v)
  const Vec3 uv = u.cross(v);
  return v + 2.0 * q.w * uv + 2.0 * u.cross(uv);
}

Quat quat_multiply(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Mat3 quat_to_matrix(const Quat& q_in) {
  const Quat q = checked_unit(q_in);
  return Eigen::Quaterniond(q.w, q.x, q.y, q.z).toRotationMatrix();
}

void TriangleMesh::validate() const {
  const auto n = vertices.size();
  for (const Face& f : faces) {
    for (auto idx : f) {
      if (idx >= n) {
        fail(ErrorKind::InvalidInput, "face index " + std::to_string(idx) +
                                          " out of range for " +
                                          std::to_string(n) + " vertices");
      }
    }
  }
}

void KinematicTemplate::validate() const {
  if (body_index.size() != local_vertices.size()) {
    fail(ErrorKind::InvalidInput,
         "body_index length does not match vertex count");
  }
  for (auto b : body_index) {
    if (b >= body_count) {
      fail(ErrorKind::InvalidInput,
           "body index " + std::to_string(b) + " >= body count " +
               std::to_string(body_count));
    }
  }
  for (const Face& f : faces) {
    for (auto idx : f) {
      if (idx >= local_vertices.size()) {
        fail(ErrorKind::InvalidInput, "template face index out of range");
      }
    }
  }
}

BodyPose BodyPose::compose(const BodyPose& inner) const {
  return {quat_multiply(checked_unit(orientation), checked_unit(inner.orientation)),
          quat_rotate(orientation, inner.translation) + translation};
}

Vec3 BodyPose::apply(const Vec3& p) const {
  return quat_rotate(orientation, p) + translation;
}

TriangleMesh apply_terrain_offset(TriangleMesh mesh, double border) {
  const Vec3 offset(-border, -border, 0.0);
  for (Vec3& v : mesh.vertices) v += offset;
  return mesh;
}

TriangleMesh pose_robot(const KinematicTemplate& tmpl, const BodyPoseSet& poses) {
  tmpl.validate();
  if (poses.size() != tmpl.body_count) {
    fail(ErrorKind::InvalidInput,
         "got " + std::to_string(poses.size()) + " body poses for a template with " +
             std::to_string(tmpl.body_count) + " bodies");
  }
  std::vector<Mat3> rotations;
  rotations.reserve(poses.size());
  for (const BodyPose& p : poses) rotations.push_back(quat_to_matrix(p.orientation));

  TriangleMesh out;
  out.faces = tmpl.faces;
  out.vertices.resize(tmpl.local_vertices.size());
  for (std::size_t k = 0; k < tmpl.local_vertices.size(); ++k) {
    const auto b = tmpl.body_index[k];
    out.vertices[k] = rotations[b] * tmpl.local_vertices[k] + poses[b].translation;
  }
  return out;
}

TriangleMesh merge_meshes(const TriangleMesh& a, const TriangleMesh& b) {
  TriangleMesh out;
  out.vertices.reserve(a.vertices.size() + b.vertices.size());
  out.vertices = a.vertices;
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  out.faces.reserve(a.faces.size() + b.faces.size());
  out.faces = a.faces;
  const auto shift = static_cast<std::uint32_t>(a.vertices.size());
  for (const Face& f : b.faces) out.faces.push_back({f[0] + shift, f[1] + shift, f[2] + shift});
  return out;
}

TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                            (i & 4) ? hi.z() : lo.z());
  }
  // corner index bits: x=1, y=2, z=4
  m.faces = {{0, 2, 1}, {1, 2, 3},   // -z
             {4, 5, 6}, {5, 7, 6},   // +z
             {0, 1, 4}, {1, 5, 4},   // -y
             {2, 6, 3}, {3, 6, 7},   // +y
             {0, 4, 2}, {2, 4, 6},   // -x
             {1, 3, 5}, {3, 7, 5}};  // +x
  return m;
}

bool mesh_bounds(const TriangleMesh& mesh, Vec3& lo, Vec3& hi) {
  if (mesh.vertices.empty()) return false;
  lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const Vec3& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return true;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out.precision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Face& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace depthsim
