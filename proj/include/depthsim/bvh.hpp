#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "depthsim/camera.hpp"
#include "depthsim/geometry.hpp"

namespace depthsim {

/// Hits closer than this along the ray are ignored.
inline constexpr double kRayEpsilon = 1e-6;

struct Hit {
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  std::uint32_t face = 0;
};

/// Two-sided Moller-Trumbore test. Barycentric bounds carry a 1e-10 slack so
/// rays through shared edges and vertices never fall between triangles.
std::optional<double> intersect_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1,
                                         const Vec3& v2);

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void grow(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void grow(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  bool contains(const Aabb& b) const {
    return (lo.array() <= b.lo.array()).all() && (b.hi.array() <= hi.array()).all();
  }
};

class Bvh {
 public:
  static constexpr std::uint32_t kMaxLeafSize = 4;

  struct Node {
    Aabb bounds;
    // Leaf: triangles [first, first + count). Interior: children first, first + 1.
    std::uint32_t first = 0;
    std::uint32_t count = 0;
    bool is_leaf() const { return count > 0; }
  };

  /// Median split on the longest axis; throws InvalidInput for an empty mesh.
  static Bvh build(const TriangleMesh& mesh);

  std::optional<Hit> intersect(const Ray& ray) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  /// Source face id of each leaf slot.
  const std::vector<std::uint32_t>& face_order() const { return face_order_; }
  std::size_t triangle_count() const { return face_order_.size(); }
  const Aabb& bounds() const { return nodes_.front().bounds; }

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> face_order_;
  std::vector<std::array<Vec3, 3>> triangles_;  // in leaf order
};

/// Exhaustive nearest-hit reference over every face.
std::optional<Hit> brute_force_intersect(const TriangleMesh& mesh, const Ray& ray);

}  // namespace depthsim
