#include "depthsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "depthsim/error.hpp"
#include "depthsim/io.hpp"
#include "depthsim/noise.hpp"
#include "depthsim/render.hpp"
#include "depthsim/robot.hpp"
#include "depthsim/terrain.hpp"

namespace depthsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_stem(int env, std::int64_t frame) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "env%d/frame%06lld", env, static_cast<long long>(frame));
  return buf;
}

json file_entry(const fs::path& root, const std::string& rel, std::string_view bytes) {
  io::write_file(root / rel, bytes);
  return {{"path", rel}, {"fnv1a64", io::hex64(io::fnv1a64(bytes))}};
}

json write_png_entry(const fs::path& root, const std::string& rel, const DepthImage& image) {
  io::write_png16(root / rel, image);
  return {{"path", rel}, {"fnv1a64", io::hex64(io::fnv1a64(io::read_file(root / rel)))}};
}

}  // namespace

OutputFormat OutputFormat::parse(std::string_view name) {
  if (name == "pfm") return {true, false};
  if (name == "png16") return {false, true};
  if (name == "both") return {true, true};
  fail(ErrorKind::Config, "format must be pfm, png16 or both");
}

SceneRenderer::SceneRenderer(SceneConfig config, unsigned threads)
    : config_(std::move(config)), terrain_(Bvh::build(build_terrain(config_.terrain))), threads_(threads) {
  config_.validate();
}

FrameOutput SceneRenderer::render_frame(int env, std::int64_t frame, const BasePose& base,
                                        const std::optional<BodyPoseSet>& world_bodies) const {
  const SceneConfig& c = config_;
  std::optional<Bvh> robot;
  if (c.toggles.self_occlusion && c.robot) {
    const BodyPoseSet poses = world_bodies ? *world_bodies : world_body_poses(base, c.robot->rest_poses);
    robot = Bvh::build(pose_robot(c.robot->tmpl, poses));
  }
  FrameOutput out;
  out.clean = render_depth(&terrain_, robot ? &*robot : nullptr, c.camera.intrinsics,
                           c.camera.extrinsics_for(base), RenderOptions{threads_});
  out.corrupted = corrupt(out.clean, c.noise, c.toggles,
                          StreamKey{c.seed, static_cast<std::uint64_t>(frame), static_cast<std::uint64_t>(env)});
  out.heightmap = extract_heightmap(terrain_, base, c.heightmap);
  return out;
}

std::vector<fs::path> run_render(const SceneConfig& config, const fs::path& out_dir,
                                 const OutputFormat& format, unsigned threads) {
  const SceneRenderer renderer(config, threads);
  std::vector<fs::path> written;
  for (int env = 0; env < config.environments; ++env) {
    const FrameOutput f = renderer.render_frame(env, 0, config.base_for(env));
    const fs::path stem = out_dir / frame_stem(env, 0);
    auto emit = [&](const DepthImage& image, const std::string& suffix) {
      if (format.pfm) {
        written.push_back(stem.string() + suffix + ".pfm");
        io::write_pfm(written.back(), image);
      }
      if (format.png16) {
        written.push_back(stem.string() + suffix + ".png");
        io::write_png16(written.back(), image);
      }
    };
    emit(f.clean, "_clean");
    emit(f.corrupted, "_depth");
  }
  return written;
}

json run_dataset(const SceneConfig& config, const std::vector<TrajectoryRow>& trajectory,
                 const fs::path& out_dir, const OutputFormat& format, unsigned threads) {
  std::vector<const TrajectoryRow*> rows;
  for (const TrajectoryRow& r : trajectory) {
    if (r.env >= config.environments) {
      fail(ErrorKind::Config, "trajectory references env " + std::to_string(r.env) + " but the config has " +
                                  std::to_string(config.environments) + " environments");
    }
    if (r.bodies) {
      if (!config.robot) fail(ErrorKind::Config, "trajectory has body poses but the config has no robot");
      if (r.bodies->size() != config.robot->tmpl.body_count) {
        fail(ErrorKind::Config, "trajectory body count does not match the robot template");
      }
    }
    rows.push_back(&r);
  }
  std::sort(rows.begin(), rows.end(), [](const TrajectoryRow* a, const TrajectoryRow* b) {
    return std::pair(a->env, a->frame) < std::pair(b->env, b->frame);
  });

  std::set<std::pair<int, std::int64_t>> present;
  for (const TrajectoryRow* r : rows) present.emplace(r->env, r->frame);

  const SceneRenderer renderer(config, threads);
  json records = json::array();
  for (const TrajectoryRow* r : rows) {
    std::optional<BodyPoseSet> bodies;
    if (r->bodies) {
      bodies = *r->bodies;
      for (BodyPose& p : *bodies) p.orientation = checked_unit(p.orientation);
    }
    const FrameOutput f = renderer.render_frame(r->env, r->frame, r->base, bodies);
    const std::string stem = frame_stem(r->env, r->frame);

    json rec;
    rec["env"] = r->env;
    rec["frame"] = r->frame;
    rec["base"] = {{"position", {r->base.position.x(), r->base.position.y(), r->base.position.z()}},
                   {"yaw", r->base.yaw}};
    if (format.pfm) {
      rec["clean"] = file_entry(out_dir, stem + "_clean.pfm", io::encode_pfm(f.clean));
      rec["depth"] = file_entry(out_dir, stem + "_depth.pfm", io::encode_pfm(f.corrupted));
    }
    if (format.png16) {
      rec["clean_png16"] = write_png_entry(out_dir, stem + "_clean.png", f.clean);
      rec["depth_png16"] = write_png_entry(out_dir, stem + "_depth.png", f.corrupted);
    }
    rec["heightmap"] = file_entry(out_dir, stem + "_heightmap.bin", io::encode_heightmap(f.heightmap));

    // Frames of this environment inside the temporal window ending here.
    json stack = json::array();
    for (std::int64_t k = r->frame - config.stack_size + 1; k <= r->frame; ++k) {
      if (k >= 0 && present.count({r->env, k})) stack.push_back(k);
    }
    rec["stack"] = stack;
    records.push_back(std::move(rec));
  }

  json manifest;
  manifest["format_versions"] = {{"manifest", kManifestVersion}, {"pfm", 1}, {"heightmap", io::kHeightmapFormatVersion}};
  manifest["config_hash"] = io::hex64(config_hash(config));
  manifest["seed"] = config.seed;
  manifest["terrain"] = std::string(to_string(config.terrain.kind));
  manifest["stack_size"] = config.stack_size;
  manifest["records"] = std::move(records);
  io::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

std::vector<std::string> verify_manifest(const fs::path& out_dir) {
  json manifest;
  try {
    manifest = json::parse(io::read_file(out_dir / "manifest.json"));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("manifest.json: ") + e.what());
  }
  std::vector<std::string> bad;
  for (const json& rec : manifest.at("records")) {
    for (const auto& [key, entry] : rec.items()) {
      if (!entry.is_object() || !entry.contains("fnv1a64")) continue;
      const std::string rel = entry.at("path").get<std::string>();
      const fs::path path = out_dir / rel;
      if (!fs::exists(path) || io::hex64(io::fnv1a64(io::read_file(path))) != entry.at("fnv1a64").get<std::string>()) {
        bad.push_back(rel);
      }
    }
  }
  return bad;
}

MaeReport eval_mae(const fs::path& pred_dir, const fs::path& gt_dir) {
  if (!fs::is_directory(gt_dir)) fail(ErrorKind::Io, "'" + gt_dir.string() + "' is not a directory");
  if (!fs::is_directory(pred_dir)) fail(ErrorKind::Io, "'" + pred_dir.string() + "' is not a directory");

  // relative heightmap path -> terrain label
  std::map<std::string, std::string> labelled;
  std::vector<fs::path> manifests;
  for (const auto& e : fs::recursive_directory_iterator(gt_dir)) {
    if (e.is_regular_file() && e.path().filename() == "manifest.json") manifests.push_back(e.path());
  }
  std::sort(manifests.begin(), manifests.end());
  for (const fs::path& m : manifests) {
    const json manifest = json::parse(io::read_file(m));
    const std::string label = manifest.value("terrain", std::string("all"));
    const fs::path dir = fs::relative(m.parent_path(), gt_dir);
    for (const json& rec : manifest.at("records")) {
      const fs::path rel = (dir / rec.at("heightmap").at("path").get<std::string>()).lexically_normal();
      labelled[rel.generic_string()] = label;
    }
  }
  if (manifests.empty()) {
    for (const auto& e : fs::recursive_directory_iterator(gt_dir)) {
      if (!e.is_regular_file() || e.path().extension() != ".bin") continue;
      const fs::path rel = fs::relative(e.path(), gt_dir);
      const auto first = rel.begin();
      labelled[rel.generic_string()] = std::next(first) == rel.end() ? "all" : first->string();
    }
  }

  MaeReport report;
  std::map<std::string, std::vector<double>> per_label;
  for (const auto& [rel, label] : labelled) {
    const fs::path pred = pred_dir / rel;
    if (!fs::exists(pred)) {
      report.errors.push_back(rel + ": missing prediction");
      continue;
    }
    try {
      per_label[label].push_back(mae_cm(io::read_heightmap(pred), io::read_heightmap(gt_dir / rel)));
    } catch (const Error& e) {
      report.errors.push_back(rel + ": " + e.what());
    }
  }
  for (const auto& [label, values] : per_label) {
    TerrainMae row;
    row.terrain = label;
    row.frames = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean_cm = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - row.mean_cm) * (v - row.mean_cm);
    row.std_cm = std::sqrt(sq / static_cast<double>(values.size()));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace depthsim
