#include "depthsim/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "depthsim/error.hpp"

namespace depthsim {
namespace {

constexpr double kBarycentricSlack = 1e-10;
constexpr double kParallelTolerance = 1e-12;
// Node boxes are padded so the barycentric slack can never push a hit outside them.
constexpr double kBoxPad = 1e-7;

bool slab_test(const Aabb& box, const Vec3& origin, const Vec3& inv_dir, const Vec3& dir,
               double t_max) {
  double lo = 0.0;
  double hi = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.lo[a] || origin[a] > box.hi[a]) return false;
      continue;
    }
    double t0 = (box.lo[a] - origin[a]) * inv_dir[a];
    double t1 = (box.hi[a] - origin[a]) * inv_dir[a];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return false;
  }
  return true;
}

struct BuildItem {
  Aabb bounds;
  Vec3 centroid;
  std::uint32_t face;
};

}  // namespace

std::optional<double> intersect_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1,
                                         const Vec3& v2) {
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) <= kParallelTolerance * e1.norm() * e2.norm()) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - v0;
  const double u = s.dot(p) * inv;
  if (u < -kBarycentricSlack || u > 1.0 + kBarycentricSlack) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * inv;
  if (v < -kBarycentricSlack || u + v > 1.0 + kBarycentricSlack) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (!(t > kRayEpsilon) || !std::isfinite(t)) return std::nullopt;
  return t;
}

Bvh Bvh::build(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) fail(ErrorKind::InvalidInput, "cannot build a BVH over an empty mesh");
  mesh.validate();

  std::vector<BuildItem> items(mesh.faces.size());
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    BuildItem& it = items[f];
    for (auto idx : mesh.faces[f]) it.bounds.grow(mesh.vertices[idx]);
    it.bounds.lo.array() -= kBoxPad;
    it.bounds.hi.array() += kBoxPad;
    it.centroid = 0.5 * (it.bounds.lo + it.bounds.hi);
    it.face = f;
  }

  Bvh bvh;
  bvh.nodes_.reserve(2 * items.size() / kMaxLeafSize + 1);
  struct Pending {
    std::uint32_t node, begin, end;
  };
  std::vector<Pending> stack;
  bvh.nodes_.emplace_back();
  stack.push_back({0, 0, static_cast<std::uint32_t>(items.size())});
  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    Aabb bounds;
    for (std::uint32_t i = job.begin; i < job.end; ++i) bounds.grow(items[i].bounds);
    bvh.nodes_[job.node].bounds = bounds;

    const std::uint32_t n = job.end - job.begin;
    if (n <= kMaxLeafSize) {
      bvh.nodes_[job.node].first = job.begin;
      bvh.nodes_[job.node].count = n;
      continue;
    }
    int axis = 0;
    const Vec3 extent = bounds.hi - bounds.lo;
    if (extent.y() > extent[axis]) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;
    const auto first = items.begin() + job.begin;
    const auto mid = first + n / 2;
    // Full order with an index tie-break keeps the tree identical across platforms.
    std::sort(first, items.begin() + job.end, [axis](const BuildItem& a, const BuildItem& b) {
      if (a.centroid[axis] != b.centroid[axis]) return a.centroid[axis] < b.centroid[axis];
      return a.face < b.face;
    });
    const auto left = static_cast<std::uint32_t>(bvh.nodes_.size());
    bvh.nodes_.emplace_back();
    bvh.nodes_.emplace_back();
    bvh.nodes_[job.node].first = left;
    bvh.nodes_[job.node].count = 0;
    const auto split = static_cast<std::uint32_t>(mid - items.begin());
    stack.push_back({left + 1, split, job.end});
    stack.push_back({left, job.begin, split});
  }

  bvh.face_order_.reserve(items.size());
  bvh.triangles_.reserve(items.size());
  for (const BuildItem& it : items) {
    const Face& f = mesh.faces[it.face];
    bvh.face_order_.push_back(it.face);
    bvh.triangles_.push_back({mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]});
  }
  return bvh;
}

std::optional<Hit> Bvh::intersect(const Ray& ray) const {
  const Vec3 inv_dir = ray.direction.cwiseInverse();
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_slot = 0;
  bool found = false;

  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!slab_test(node.bounds, ray.origin, inv_dir, ray.direction, best)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto& tri = triangles_[i];
        if (auto t = intersect_triangle(ray, tri[0], tri[1], tri[2])) {
          // Equal distances resolve to the lowest source face id, as in the brute-force scan.
          if (*t < best || (*t == best && face_order_[i] < face_order_[best_slot])) {
            best = *t;
            best_slot = i;
            found = true;
          }
        }
      }
      continue;
    }
    // Visit the child nearer along the ray first.
    const std::uint32_t a = node.first, b = node.first + 1;
    const Vec3 delta = (nodes_[a].bounds.lo + nodes_[a].bounds.hi) - (nodes_[b].bounds.lo + nodes_[b].bounds.hi);
    const bool a_first = delta.dot(ray.direction) <= 0.0;
    stack[top++] = a_first ? b : a;
    stack[top++] = a_first ? a : b;
  }
  if (!found) return std::nullopt;
  return Hit{best, ray.origin + best * ray.direction, face_order_[best_slot]};
}

std::optional<Hit> brute_force_intersect(const TriangleMesh& mesh, const Ray& ray) {
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_face = 0;
  bool found = false;
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    if (auto t = intersect_triangle(ray, mesh.vertices[face[0]], mesh.vertices[face[1]],
                                    mesh.vertices[face[2]])) {
      if (*t < best) {
        best = *t;
        best_face = f;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  return Hit{best, ray.origin + best * ray.direction, best_face};
}

}  // namespace depthsim
