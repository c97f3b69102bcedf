#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "depthsim/config.hpp"
#include "depthsim/error.hpp"
#include "depthsim/geometry.hpp"
#include "depthsim/heightmap.hpp"
#include "depthsim/io.hpp"
#include "depthsim/noise.hpp"
#include "depthsim/pipeline.hpp"
#include "depthsim/reward_csv.hpp"
#include "depthsim/robot.hpp"
#include "depthsim/terrain.hpp"
#include "depthsim/trajectory.hpp"

namespace fs = std::filesystem;
using namespace depthsim;

namespace {

struct SceneArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> toggles;
};

void add_scene_args(CLI::App* cmd, SceneArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config, "Scene config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "Override the config seed");
  cmd->add_option("--toggle", args.toggles, "Pipeline stage override, e.g. noise_model=false")
      ->take_last()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
}

SceneConfig load_scene(const SceneArgs& args) {
  SceneConfig config = args.config.empty() ? parse_config("{}") : load_config(args.config);
  if (args.seed) config.seed = *args.seed;
  for (const auto& t : args.toggles) apply_toggle(config.toggles, t);
  config.validate();
  return config;
}

int report(const Error& e) {
  std::cerr << "depthsim: error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-camera and terrain simulation toolkit"};
  app.require_subcommand(1);

  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // render
  SceneArgs render_args;
  std::string render_out, render_format = "pfm";
  auto* render = app.add_subcommand("render", "Render clean and corrupted depth per environment");
  add_scene_args(render, render_args);
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_option("--format", render_format, "pfm | png16 | both");
  render->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // dataset
  SceneArgs dataset_args;
  std::string dataset_traj, dataset_out, dataset_format = "pfm";
  auto* dataset = app.add_subcommand("dataset", "Render a trajectory into a dataset with manifest");
  add_scene_args(dataset, dataset_args);
  dataset->add_option("--trajectory", dataset_traj, "Trajectory CSV")->required();
  dataset->add_option("--out", dataset_out, "Output directory")->required();
  dataset->add_option("--format", dataset_format, "pfm | png16 | both");
  dataset->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // verify
  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Check manifest checksums of a dataset");
  verify->add_option("dir", verify_dir, "Dataset directory")->required();

  // eval-mae
  std::string mae_pred, mae_gt;
  auto* eval_mae_cmd = app.add_subcommand("eval-mae", "Per-terrain heightmap MAE table");
  eval_mae_cmd->add_option("--pred", mae_pred, "Directory of predicted heightmaps")->required();
  eval_mae_cmd->add_option("--gt", mae_gt, "Directory of ground-truth heightmaps")->required();

  // heightmap
  SceneArgs hm_args;
  std::vector<double> hm_pose;
  std::string hm_out;
  auto* heightmap = app.add_subcommand("heightmap", "Extract the elevation grid at one base pose");
  add_scene_args(heightmap, hm_args, false);
  heightmap->add_option("--pose", hm_pose, "x y z yaw (defaults to the first configured base)")
      ->expected(4);
  heightmap->add_option("--out", hm_out, "Write a .bin heightmap (else CSV on stdout)");

  // corrupt
  SceneArgs cor_args;
  std::string cor_in, cor_out;
  std::int64_t cor_frame = 0;
  int cor_env = 0;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Apply the noise pipeline to an existing PFM");
  add_scene_args(corrupt_cmd, cor_args, false);
  corrupt_cmd->add_option("--in", cor_in, "Clean depth PFM")->required();
  corrupt_cmd->add_option("--out", cor_out, "Corrupted depth PFM")->required();
  corrupt_cmd->add_option("--frame", cor_frame, "Frame index of the noise stream");
  corrupt_cmd->add_option("--env", cor_env, "Environment index of the noise stream");

  // reward-eval
  SceneArgs rew_args;
  std::string rew_in, rew_out;
  auto* reward = app.add_subcommand("reward-eval", "Evaluate reward terms for rows of a CSV");
  add_scene_args(reward, rew_args, false);
  reward->add_option("--in", rew_in, "Reward input CSV")->required();
  reward->add_option("--out", rew_out, "Output CSV (default stdout)");

  // mesh
  SceneArgs mesh_args;
  std::string mesh_out;
  bool mesh_robot = false;
  auto* mesh = app.add_subcommand("mesh", "Export the terrain (and posed robot) as OBJ");
  add_scene_args(mesh, mesh_args);
  mesh->add_option("--out", mesh_out, "OBJ path")->required();
  mesh->add_flag("--robot", mesh_robot, "Include the robot at the first base pose");

  // show-config
  SceneArgs show_args;
  auto* show = app.add_subcommand("show-config", "Print the resolved canonical config and its hash");
  add_scene_args(show, show_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*render) {
      const SceneConfig config = load_scene(render_args);
      for (const auto& p : run_render(config, render_out, OutputFormat::parse(render_format), threads)) {
        std::cout << p.string() << "\n";
      }
    } else if (*dataset) {
      const SceneConfig config = load_scene(dataset_args);
      const auto rows = parse_trajectory(io::read_file(dataset_traj));
      const auto manifest =
          run_dataset(config, rows, dataset_out, OutputFormat::parse(dataset_format), threads);
      std::cout << "records " << manifest["records"].size() << "\n"
                << "config_hash " << manifest["config_hash"].get<std::string>() << "\n";
    } else if (*verify) {
      const auto bad = verify_manifest(verify_dir);
      for (const auto& b : bad) std::cerr << "depthsim: error[io]: checksum mismatch " << b << "\n";
      if (!bad.empty()) return 1;
      std::cout << "ok\n";
    } else if (*eval_mae_cmd) {
      const MaeReport rep = eval_mae(mae_pred, mae_gt);
      std::cout << "terrain,frames,mae_cm_mean,mae_cm_std\n";
      for (const auto& r : rep.rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%s,%zu,%.2f,%.2f\n", r.terrain.c_str(), r.frames,
                      r.mean_cm, r.std_cm);
        std::cout << line;
      }
      for (const auto& e : rep.errors) std::cerr << "depthsim: error[invalid_input]: " << e << "\n";
      if (!rep.errors.empty()) return 1;
    } else if (*heightmap) {
      const SceneConfig config = load_scene(hm_args);
      const BasePose base = hm_pose.empty()
                                ? config.base_for(0)
                                : BasePose{Vec3(hm_pose[0], hm_pose[1], hm_pose[2]), hm_pose[3]};
      const HeightmapGrid grid = extract_heightmap(config.terrain, base, config.heightmap);
      if (hm_out.empty()) {
        io::write_heightmap_csv(std::cout, grid);
      } else {
        io::write_heightmap(hm_out, grid);
      }
    } else if (*corrupt_cmd) {
      const SceneConfig config = load_scene(cor_args);
      const DepthImage clean = io::read_pfm(cor_in);
      const StreamKey key{config.seed, static_cast<std::uint64_t>(cor_frame),
                          static_cast<std::uint64_t>(cor_env)};
      io::write_pfm(cor_out, corrupt(clean, config.noise, config.toggles, key));
    } else if (*reward) {
      const SceneConfig config = load_scene(rew_args);
      const auto rows = policy::parse_reward_csv(io::read_file(rew_in));
      const std::string out =
          policy::evaluate_reward_csv(rows, config.reward.weights, config.reward.options);
      if (rew_out.empty()) {
        std::cout << out;
      } else {
        io::write_file(rew_out, out);
      }
    } else if (*mesh) {
      const SceneConfig config = load_scene(mesh_args);
      TriangleMesh m = build_terrain(config.terrain);
      if (mesh_robot && config.robot) {
        const auto poses = world_body_poses(config.base_for(0), config.robot->rest_poses);
        m = merge_meshes(m, pose_robot(config.robot->tmpl, poses));
      }
      std::ostringstream ss;
      write_obj(ss, m);
      io::write_file(mesh_out, ss.str());
    } else if (*show) {
      const SceneConfig config = load_scene(show_args);
      std::cout << canonical_config(config) << "\n"
                << "config_hash " << io::hex64(config_hash(config)) << "\n";
    }
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "depthsim: error[io]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
