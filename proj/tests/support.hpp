#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "depthsim/geometry.hpp"
#include "depthsim/heightmap.hpp"
#include "depthsim/reward.hpp"

namespace testing {

using depthsim::Vec3;

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("depthsim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Rotation matrix written out from the quaternion components.
inline std::array<std::array<double, 3>, 3> quat_matrix(double w, double x, double y, double z) {
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

inline depthsim::Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
  const double s = std::sqrt(w * w + x * x + y * y + z * z);
  return {w / s, x / s, y / s, z / s};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

// Triangles scattered in a box; some share vertices, some are tiny or slivers.
inline depthsim::TriangleMesh random_mesh(std::mt19937_64& rng, int triangles, double size = 2.0) {
  std::uniform_real_distribution<double> pos(-size, size), small(-0.4, 0.4);
  depthsim::TriangleMesh m;
  for (int f = 0; f < triangles; ++f) {
    const Vec3 c(pos(rng), pos(rng), pos(rng));
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (int k = 0; k < 3; ++k) m.vertices.push_back(c + Vec3(small(rng), small(rng), small(rng)));
    m.faces.push_back({base, base + 1, base + 2});
    if (f > 0 && f % 7 == 0) {
      // Reuse an edge of the previous triangle to produce shared-edge pairs.
      m.vertices.push_back(c + Vec3(small(rng), small(rng), small(rng)));
      m.faces.push_back({base, base + 2, base + 3});
      ++f;
    }
  }
  return m;
}

// Reward terms evaluated straight from their closed forms.
inline std::array<double, 14> reward_oracle(const depthsim::policy::RewardInputs& r) {
  std::array<double, 14> out{};
  out[0] = std::exp(-3.0 * std::fabs(r.v_cmd_x - r.v_mean_x));
  out[1] = std::exp(-10.0 * std::fabs(r.v_cmd_y - r.v_mean_y));
  out[2] = std::exp(-2.0 * std::fabs(r.v_z));
  out[3] = std::exp(-(std::pow(r.omega_xy[0], 2) + std::pow(r.omega_xy[1], 2)));
  out[4] = std::exp(-100.0 * (std::pow(r.gravity_xy[0], 2) + std::pow(r.gravity_xy[1], 2)));
  double torques = 0, dq = 0, lim = 0, excess = 0;
  for (int j = 0; j < 20; ++j) {
    torques += std::pow(r.tau[j] / r.kp[j], 2);
    dq += std::pow(r.dq[j], 2);
    if (r.q[j] > r.q_max[j]) lim += r.q[j] - r.q_max[j];
    if (r.q[j] < r.q_min[j]) lim += r.q_min[j] - r.q[j];
    if (std::fabs(r.tau[j]) > r.tau_max[j]) excess += std::fabs(r.tau[j]) - r.tau_max[j];
  }
  out[5] = torques;
  out[6] = dq;
  out[7] = lim;
  out[8] = std::exp(-0.005 * excess);
  out[9] = std::exp(-200.0 * std::fabs(r.a22));
  out[10] = std::exp(-200.0 * std::fabs(r.a21));
  out[11] = std::sqrt(std::pow(r.a21 - r.a21_prev, 2) + std::pow(r.a22 - r.a22_prev, 2));
  for (int f = 0; f < 2; ++f) {
    out[12] += std::fabs(r.foot_fx[f]) > 0.5 * r.foot_fz[f] ? 1.0 : 0.0;
    out[13] += (r.swing[f] && std::fabs(r.foot_fx[f]) > 10.0) ? 1.0 : 0.0;
  }
  return out;
}

inline depthsim::policy::RewardInputs random_reward_inputs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 100.0), force(0.0, 40.0);
  std::bernoulli_distribution coin(0.5);
  depthsim::policy::RewardInputs r;
  r.v_cmd_x = u(rng);
  r.v_cmd_y = u(rng);
  r.v_mean_x = u(rng);
  r.v_mean_y = u(rng);
  r.v_z = u(rng);
  r.omega_xy = {u(rng), u(rng)};
  r.gravity_xy = {0.2 * u(rng), 0.2 * u(rng)};
  for (int j = 0; j < 20; ++j) {
    r.tau[j] = 80.0 * u(rng);
    r.kp[j] = pos(rng);
    r.q[j] = 2.0 * u(rng);
    r.q_min[j] = -1.0 + 0.3 * u(rng);
    r.q_max[j] = 1.0 + 0.3 * u(rng);
    r.dq[j] = 5.0 * u(rng);
    r.tau_max[j] = 40.0 + 20.0 * u(rng);
  }
  for (int f = 0; f < 2; ++f) {
    r.foot_fx[f] = 30.0 * u(rng);
    r.foot_fz[f] = force(rng);
    r.swing[f] = coin(rng);
  }
  r.a21 = 0.05 * u(rng);
  r.a22 = 0.05 * u(rng);
  r.a21_prev = 0.05 * u(rng);
  r.a22_prev = 0.05 * u(rng);
  return r;
}

inline depthsim::HeightmapGrid random_grid(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  depthsim::HeightmapGrid g;
  g.values.resize(static_cast<std::size_t>(g.layout.rows) * g.layout.cols);
  for (double& v : g.values) v = u(rng);
  return g;
}

// One-sample Kolmogorov-Smirnov statistic against N(0, sigma^2).
inline double ks_statistic_normal(std::vector<double> samples, double sigma) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-samples[i] / (sigma * std::sqrt(2.0)));
    d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
  }
  return d;
}

// Asymptotic critical value of the KS statistic at significance alpha.
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace testing
