#include "depthsim/robot.hpp"

#include <cmath>

#include "depthsim/error.hpp"

namespace depthsim {
namespace {

void add_body_box(KinematicTemplate& t, std::uint32_t body, const Vec3& lo, const Vec3& hi) {
  const TriangleMesh box = make_box(lo, hi);
  const auto base = static_cast<std::uint32_t>(t.local_vertices.size());
  for (const Vec3& v : box.vertices) {
    t.local_vertices.push_back(v);
    t.body_index.push_back(body);
  }
  for (const Face& f : box.faces) t.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
}

Vec3 vec3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) fail(ErrorKind::Config, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

KinematicTemplate builtin_biped_template() {
  KinematicTemplate t;
  t.body_count = 5;
  add_body_box(t, 0, {-0.1, -0.15, -0.1}, {0.1, 0.15, 0.25});
  for (int side = 0; side < 2; ++side) {
    const double y = side == 0 ? 0.1 : -0.1;
    add_body_box(t, 1 + side, {-0.04, y - 0.04, -0.85}, {0.04, y + 0.04, -0.1});
    add_body_box(t, 3 + side, {-0.05, y - 0.05, -0.9}, {0.2, y + 0.05, -0.85});
  }
  return t;
}

KinematicTemplate template_from_json(const nlohmann::json& j) {
  try {
    KinematicTemplate t;
    t.body_count = j.at("body_count").get<std::uint32_t>();
    for (const auto& v : j.at("vertices")) t.local_vertices.push_back(vec3_from_json(v));
    for (const auto& f : j.at("faces")) {
      if (!f.is_array() || f.size() != 3) fail(ErrorKind::Config, "template faces must be index triples");
      t.faces.push_back({f[0].get<std::uint32_t>(), f[1].get<std::uint32_t>(), f[2].get<std::uint32_t>()});
    }
    t.body_index = j.at("body_index").get<std::vector<std::uint32_t>>();
    for (const auto& [key, _] : j.items()) {
      if (key != "body_count" && key != "vertices" && key != "faces" && key != "body_index") {
        fail(ErrorKind::Config, "unknown template key '" + key + "'");
      }
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, std::string("robot template: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Config, std::string("robot template: ") + e.what());
  }
}

nlohmann::json template_to_json(const KinematicTemplate& tmpl) {
  nlohmann::json j;
  j["body_count"] = tmpl.body_count;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const Vec3& v : tmpl.local_vertices) verts.push_back({v.x(), v.y(), v.z()});
  auto& faces = j["faces"] = nlohmann::json::array();
  for (const Face& f : tmpl.faces) faces.push_back({f[0], f[1], f[2]});
  j["body_index"] = tmpl.body_index;
  return j;
}

BodyPose base_body_pose(const BasePose& base) {
  return {Quat::from_axis_angle(Vec3::UnitZ(), base.yaw), base.position};
}

BodyPoseSet world_body_poses(const BasePose& base, const BodyPoseSet& rest) {
  const BodyPose world_from_base = base_body_pose(base);
  BodyPoseSet out;
  out.reserve(rest.size());
  for (const BodyPose& p : rest) out.push_back(world_from_base.compose(p));
  return out;
}

}  // namespace depthsim
