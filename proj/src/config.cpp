#include "depthsim/config.hpp"

#include <set>
#include <string>

#include "depthsim/error.hpp"
#include "depthsim/io.hpp"
#include "depthsim/robot.hpp"

namespace depthsim {
namespace {

using nlohmann::json;

// Reads optional fields of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::Config, path_ + ": expected an object");
  }
  /// Call once every key has been read.
  void done() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) fail(ErrorKind::Config, "unknown key '" + path_ + "." + key + "'");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (const json* v = find(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        fail(ErrorKind::Config, path_ + "." + key + ": wrong type");
      }
    }
  }

  void get(const std::string& key, Vec3& out) {
    if (const json* v = find(key)) out = vec3(*v, path_ + "." + key);
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  static Vec3 vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      fail(ErrorKind::Config, where + ": expected [x, y, z]");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

BasePose parse_base(const json& j, const std::string& where) {
  Section s(j, where);
  BasePose b;
  s.get("position", b.position);
  s.get("yaw", b.yaw);
  s.done();
  return b;
}

BodyPose parse_body_pose(const json& j, const std::string& where) {
  Section s(j, where);
  BodyPose p;
  if (const json* q = s.find("orientation")) {
    if (!q->is_array() || q->size() != 4) fail(ErrorKind::Config, where + ".orientation: expected [w, x, y, z]");
    p.orientation = {(*q)[0].get<double>(), (*q)[1].get<double>(), (*q)[2].get<double>(), (*q)[3].get<double>()};
    try {
      p.orientation = checked_unit(p.orientation);
    } catch (const Error& e) {
      fail(ErrorKind::Config, where + ": " + e.what());
    }
  }
  s.get("translation", p.translation);
  s.done();
  return p;
}

void parse_terrain(const json& j, TerrainSpec& t) {
  Section s(j, "terrain");
  std::string kind(to_string(t.kind));
  s.get("kind", kind);
  t.kind = terrain_kind_from_string(kind);
  s.get("extent", t.extent);
  s.get("cell", t.cell);
  s.get("border", t.border);
  s.get("seed", t.seed);
  if (const json* pj = s.find("params")) {
    Section p(*pj, "terrain.params");
    TerrainParams& tp = t.params;
    p.get("start", tp.start);
    p.get("step_height", tp.step_height);
    p.get("step_run", tp.step_run);
    p.get("slope_grade", tp.slope_grade);
    p.get("roughness", tp.roughness);
    p.get("gap_width", tp.gap_width);
    p.get("gap_depth", tp.gap_depth);
    p.get("plane_height", tp.plane_height);
    p.get("block_size", tp.block_size);
    p.get("block_height", tp.block_height);
    p.get("hurdle_height", tp.hurdle_height);
    p.get("hurdle_width", tp.hurdle_width);
    p.done();
  }
  s.done();
}

void parse_camera(const json& j, CameraConfig& c) {
  Section s(j, "camera");
  if (const json* ij = s.find("intrinsics")) {
    Section i(*ij, "camera.intrinsics");
    i.get("fx", c.intrinsics.fx);
    i.get("fy", c.intrinsics.fy);
    i.get("cx", c.intrinsics.cx);
    i.get("cy", c.intrinsics.cy);
    i.get("width", c.intrinsics.width);
    i.get("height", c.intrinsics.height);
    i.done();
  }
  if (const json* mj = s.find("mount")) {
    Section m(*mj, "camera.mount");
    m.get("offset", c.mount.offset);
    m.get("pitch", c.mount.pitch);
    m.done();
  }
  if (const json* ej = s.find("extrinsics")) {
    Section e(*ej, "camera.extrinsics");
    Extrinsics ex;
    if (const json* r = e.find("rotation")) {
      if (!r->is_array() || r->size() != 3) fail(ErrorKind::Config, "camera.extrinsics.rotation: expected 3 rows");
      for (int row = 0; row < 3; ++row) {
        ex.rotation.row(row) = Section::vec3((*r)[row], "camera.extrinsics.rotation").transpose();
      }
    }
    e.get("translation", ex.translation);
    try {
      ex.validate();
    } catch (const Error& err) {
      fail(ErrorKind::Config, err.what());
    }
    c.extrinsics = ex;
    e.done();
  }
  s.done();
}

void parse_robot(const json& j, const std::filesystem::path& base_dir, RobotConfig& r) {
  Section s(j, "robot");
  const json* tj = s.find("template");
  if (!tj || (tj->is_string() && tj->get<std::string>() == "builtin:biped")) {
    r.source = "builtin:biped";
    r.tmpl = builtin_biped_template();
  } else if (tj->is_string()) {
    const std::filesystem::path path = base_dir / tj->get<std::string>();
    json file;
    try {
      file = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
      fail(ErrorKind::Config, "robot template '" + path.string() + "': " + e.what());
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
    r.source = "inline";
    r.tmpl = template_from_json(file);
  } else {
    r.source = "inline";
    r.tmpl = template_from_json(*tj);
  }
  r.rest_poses.assign(r.tmpl.body_count, BodyPose{});
  if (const json* rp = s.find("rest_poses")) {
    if (!rp->is_array() || rp->size() != r.tmpl.body_count) {
      fail(ErrorKind::Config, "robot.rest_poses: need one pose per body");
    }
    for (std::size_t i = 0; i < rp->size(); ++i) {
      r.rest_poses[i] = parse_body_pose((*rp)[i], "robot.rest_poses[" + std::to_string(i) + "]");
    }
  }
  s.done();
}

void parse_noise(const json& j, NoiseParams& n) {
  Section s(j, "noise");
  s.get("a", n.a);
  s.get("b", n.b);
  s.get("c", n.c);
  s.get("alpha", n.alpha);
  s.get("w", n.w);
  s.get("rho", n.rho);
  s.get("lambda_e", n.lambda_e);
  s.get("z_min", n.z_min);
  s.get("z_max", n.z_max);
  s.get("margin", n.margin);
  s.get("edge_percentile", n.edge_percentile);
  s.done();
}

void parse_reward(const json& j, RewardConfig& r) {
  Section s(j, "reward");
  s.get("amp_weight", r.weights.amp);
  if (const json* wj = s.find("weights")) {
    Section w(*wj, "reward.weights");
    for (auto name : policy::kRewardTermNames) w.get(std::string(name), r.weights.terms[std::string(name)]);
    w.done();
  }
  std::string norm = r.options.torque_norm == policy::TorqueNorm::L1 ? "l1" : "l2";
  s.get("torque_norm", norm);
  if (norm == "l1") {
    r.options.torque_norm = policy::TorqueNorm::L1;
  } else if (norm == "l2") {
    r.options.torque_norm = policy::TorqueNorm::L2;
  } else {
    fail(ErrorKind::Config, "reward.torque_norm must be 'l1' or 'l2'");
  }
  s.get("stumble_ratio", r.options.stumble_ratio);
  s.get("swing_force_limit", r.options.swing_force_limit);
  s.done();
}

void parse_gait(const json& j, GaitConfig& g) {
  Section s(j, "gait");
  s.get("gamma_left", g.clock.gamma_left);
  s.get("gamma_right", g.clock.gamma_right);
  s.get("dphi_min", g.clock.dphi_min);
  s.get("dphi_max", g.clock.dphi_max);
  s.get("dphi_cmd", g.clock.dphi_cmd);
  s.get("v_min", g.velocity.min);
  s.get("v_max", g.velocity.max);
  s.done();
}

}  // namespace

policy::RewardWeights default_reward_weights() {
  policy::RewardWeights w;
  w.amp = 0.5;
  w.terms = {
      {"x_velocity", 1.0},       {"y_velocity", 0.5},
      {"z_velocity", 0.2},       {"angular_velocity", 0.2},
      {"orientation", 0.5},      {"torques", -0.1},
      {"joint_velocity", -1e-4}, {"dof_pos_limits", -1.0},
      {"torque_limits", 0.1},    {"delta_v_command", 0.1},
      {"delta_cycle", 0.1},      {"delta_command_smoothness", -0.05},
      {"stumble", -0.5},         {"stumble_swing", -0.5},
  };
  return w;
}

BasePose SceneConfig::base_for(int env) const {
  return bases.size() == 1 ? bases.front() : bases.at(static_cast<std::size_t>(env));
}

void SceneConfig::validate() const {
  terrain.validate();
  try {
    camera.intrinsics.validate();
    if (camera.extrinsics) camera.extrinsics->validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  noise.validate();
  heightmap.validate();
  if (environments < 1) fail(ErrorKind::Config, "environments must be >= 1");
  if (bases.size() != 1 && bases.size() != static_cast<std::size_t>(environments)) {
    fail(ErrorKind::Config, "bases: need one pose or one per environment");
  }
  if (stack_size < 1) fail(ErrorKind::Config, "stack_size must be >= 1");
  if (toggles.crop_resize && 2 * noise.margin >= std::min(camera.intrinsics.width, camera.intrinsics.height)) {
    fail(ErrorKind::Config, "noise.margin too large for the image");
  }
  if (gait.clock.dphi_min > gait.clock.dphi_max || gait.velocity.min > gait.velocity.max) {
    fail(ErrorKind::Config, "gait: lower bound exceeds upper bound");
  }
}

SceneConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  SceneConfig c;
  c.reward.weights = default_reward_weights();
  try {
    Section s(root, "config");
    if (const json* v = s.find("terrain")) parse_terrain(*v, c.terrain);
    if (const json* v = s.find("camera")) parse_camera(*v, c.camera);
    if (const json* v = s.find("robot"); v && !v->is_null()) {
      c.robot.emplace();
      parse_robot(*v, base_dir, *c.robot);
    }
    if (const json* v = s.find("noise")) parse_noise(*v, c.noise);
    if (const json* v = s.find("toggles")) {
      Section t(*v, "toggles");
      t.get("self_occlusion", c.toggles.self_occlusion);
      t.get("crop_resize", c.toggles.crop_resize);
      t.get("noise_model", c.toggles.noise_model);
      t.done();
    }
    if (const json* v = s.find("heightmap")) {
      Section h(*v, "heightmap");
      h.get("rows", c.heightmap.rows);
      h.get("cols", c.heightmap.cols);
      h.get("cell", c.heightmap.cell);
      h.get("origin_forward", c.heightmap.origin_forward);
      h.get("origin_lateral", c.heightmap.origin_lateral);
      h.done();
    }
    s.get("environments", c.environments);
    if (const json* v = s.find("bases")) {
      if (!v->is_array() || v->empty()) fail(ErrorKind::Config, "bases: expected a non-empty array");
      c.bases.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        c.bases.push_back(parse_base((*v)[i], "bases[" + std::to_string(i) + "]"));
      }
    }
    s.get("seed", c.seed);
    s.get("stack_size", c.stack_size);
    if (const json* v = s.find("reward")) parse_reward(*v, c.reward);
    if (const json* v = s.find("gait")) parse_gait(*v, c.gait);
    s.done();
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

SceneConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path), path.parent_path());
}

nlohmann::json config_to_json(const SceneConfig& c) {
  json j;
  const TerrainParams& p = c.terrain.params;
  j["terrain"] = {
      {"kind", std::string(to_string(c.terrain.kind))},
      {"extent", c.terrain.extent},
      {"cell", c.terrain.cell},
      {"border", c.terrain.border},
      {"seed", c.terrain.seed},
      {"params",
       {{"start", p.start}, {"step_height", p.step_height}, {"step_run", p.step_run},
        {"slope_grade", p.slope_grade}, {"roughness", p.roughness}, {"gap_width", p.gap_width},
        {"gap_depth", p.gap_depth}, {"plane_height", p.plane_height}, {"block_size", p.block_size},
        {"block_height", p.block_height}, {"hurdle_height", p.hurdle_height},
        {"hurdle_width", p.hurdle_width}}},
  };
  const PinholeIntrinsics& in = c.camera.intrinsics;
  j["camera"] = {
      {"intrinsics",
       {{"fx", in.fx}, {"fy", in.fy}, {"cx", in.cx}, {"cy", in.cy}, {"width", in.width}, {"height", in.height}}},
      {"mount", {{"offset", vec3_json(c.camera.mount.offset)}, {"pitch", c.camera.mount.pitch}}},
  };
  if (c.camera.extrinsics) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(vec3_json(c.camera.extrinsics->rotation.row(r).transpose()));
    j["camera"]["extrinsics"] = {{"rotation", rows}, {"translation", vec3_json(c.camera.extrinsics->translation)}};
  }
  if (c.robot) {
    json robot;
    robot["template"] = c.robot->source == "builtin:biped" ? json("builtin:biped") : template_to_json(c.robot->tmpl);
    json rest = json::array();
    for (const BodyPose& bp : c.robot->rest_poses) {
      const Quat& q = bp.orientation;
      rest.push_back({{"orientation", {q.w, q.x, q.y, q.z}}, {"translation", vec3_json(bp.translation)}});
    }
    robot["rest_poses"] = rest;
    j["robot"] = robot;
  }
  const NoiseParams& n = c.noise;
  j["noise"] = {{"a", n.a},         {"b", n.b},         {"c", n.c},
                {"alpha", n.alpha}, {"w", n.w},         {"rho", n.rho},
                {"lambda_e", n.lambda_e}, {"z_min", n.z_min}, {"z_max", n.z_max},
                {"margin", n.margin}, {"edge_percentile", n.edge_percentile}};
  j["toggles"] = {{"self_occlusion", c.toggles.self_occlusion},
                  {"crop_resize", c.toggles.crop_resize},
                  {"noise_model", c.toggles.noise_model}};
  const HeightmapLayout& h = c.heightmap;
  j["heightmap"] = {{"rows", h.rows}, {"cols", h.cols}, {"cell", h.cell},
                    {"origin_forward", h.origin_forward}, {"origin_lateral", h.origin_lateral}};
  j["environments"] = c.environments;
  json bases = json::array();
  for (const BasePose& b : c.bases) bases.push_back({{"position", vec3_json(b.position)}, {"yaw", b.yaw}});
  j["bases"] = bases;
  j["seed"] = c.seed;
  j["stack_size"] = c.stack_size;
  json weights = json::object();
  for (const auto& [name, w] : c.reward.weights.terms) weights[name] = w;
  j["reward"] = {{"amp_weight", c.reward.weights.amp},
                 {"weights", weights},
                 {"torque_norm", c.reward.options.torque_norm == policy::TorqueNorm::L1 ? "l1" : "l2"},
                 {"stumble_ratio", c.reward.options.stumble_ratio},
                 {"swing_force_limit", c.reward.options.swing_force_limit}};
  j["gait"] = {{"gamma_left", c.gait.clock.gamma_left}, {"gamma_right", c.gait.clock.gamma_right},
               {"dphi_min", c.gait.clock.dphi_min},     {"dphi_max", c.gait.clock.dphi_max},
               {"dphi_cmd", c.gait.clock.dphi_cmd},     {"v_min", c.gait.velocity.min},
               {"v_max", c.gait.velocity.max}};
  return j;
}

std::string canonical_config(const SceneConfig& config) { return config_to_json(config).dump(); }

std::uint64_t config_hash(const SceneConfig& config) { return io::fnv1a64(canonical_config(config)); }

void apply_toggle(PipelineToggles& toggles, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) fail(ErrorKind::Config, "toggle must look like stage=true|false");
  const std::string_view stage = assignment.substr(0, eq);
  const std::string_view value = assignment.substr(eq + 1);
  bool on = false;
  if (value == "true" || value == "1" || value == "on") {
    on = true;
  } else if (value != "false" && value != "0" && value != "off") {
    fail(ErrorKind::Config, "toggle value must be true or false");
  }
  if (stage == "self_occlusion") {
    toggles.self_occlusion = on;
  } else if (stage == "crop_resize") {
    toggles.crop_resize = on;
  } else if (stage == "noise_model") {
    toggles.noise_model = on;
  } else {
    fail(ErrorKind::Config, "unknown toggle stage '" + std::string(stage) + "'");
  }
}

}  // namespace depthsim
