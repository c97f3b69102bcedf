#include "depthsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace depthsim {
namespace {

// Bilinear sample clamped to the window [u_lo, u_hi] x [v_lo, v_hi].
double sample_window(const DepthImage& d, double u, double v, int u_lo, int u_hi, int v_lo,
                     int v_hi) {
  u = std::clamp(u, static_cast<double>(u_lo), static_cast<double>(u_hi));
  v = std::clamp(v, static_cast<double>(v_lo), static_cast<double>(v_hi));
  const int u0 = static_cast<int>(std::floor(u));
  const int v0 = static_cast<int>(std::floor(v));
  const int u1 = std::min(u0 + 1, u_hi);
  const int v1 = std::min(v0 + 1, v_hi);
  const double fu = u - u0;
  const double fv = v - v0;
  const int us[2] = {u0, u1};
  const int vs[2] = {v0, v1};
  const double wu[2] = {1.0 - fu, fu};
  const double wv[2] = {1.0 - fv, fv};
  double acc = 0.0, weight = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const double w = wu[i] * wv[j];
      const float z = d.at(us[i], vs[j]);
      if (w > 0.0 && is_valid_depth(z)) {
        acc += w * z;
        weight += w;
      }
    }
  }
  return weight > 0.0 ? acc / weight : 0.0;
}

void require_valid_maps(const DepthImage& depth, const FieldMap& map, const char* what) {
  require_same_shape(depth, map, what);
}

}  // namespace

void NoiseParams::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Config, "noise: " + what);
  };
  for (double v : {a, b, c, alpha, w, rho, lambda_e, z_min, z_max, edge_percentile}) {
    require(std::isfinite(v), "parameters must be finite");
  }
  require(a >= 0.0 && b >= 0.0 && c >= 0.0, "a, b, c must be >= 0");
  require(alpha >= 0.0, "alpha must be >= 0");
  require(w >= 1.0, "w must be >= 1");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(lambda_e >= 0.0 && lambda_e <= 1.0, "lambda_e must lie in [0, 1]");
  require(z_min >= 0.0 && z_min < z_max, "need 0 <= z_min < z_max");
  require(margin >= 0, "margin must be >= 0");
  require(edge_percentile > 0.0 && edge_percentile < 100.0, "edge_percentile must lie in (0, 100)");
}

double bilinear_sample(const DepthImage& depth, double u, double v) {
  if (depth.size() == 0) fail(ErrorKind::InvalidInput, "bilinear_sample: empty image");
  return sample_window(depth, u, v, 0, depth.width - 1, 0, depth.height - 1);
}

DepthImage crop_resize(const DepthImage& depth, int margin, int out_w, int out_h) {
  if (margin < 0 || 2 * margin >= depth.width || 2 * margin >= depth.height) {
    fail(ErrorKind::InvalidInput, "crop_resize: margin " + std::to_string(margin) +
                                      " too large for " + std::to_string(depth.width) + "x" +
                                      std::to_string(depth.height));
  }
  if (out_w <= 0 || out_h <= 0) fail(ErrorKind::InvalidInput, "crop_resize: empty target");
  const int crop_w = depth.width - 2 * margin;
  const int crop_h = depth.height - 2 * margin;
  const double sx = static_cast<double>(crop_w) / out_w;
  const double sy = static_cast<double>(crop_h) / out_h;
  DepthImage out(out_w, out_h);
  for (int v = 0; v < out_h; ++v) {
    const double src_v = margin + (v + 0.5) * sy - 0.5;
    for (int u = 0; u < out_w; ++u) {
      const double src_u = margin + (u + 0.5) * sx - 0.5;
      out.at(u, v) = static_cast<float>(sample_window(depth, src_u, src_v, margin,
                                                      margin + crop_w - 1, margin,
                                                      margin + crop_h - 1));
    }
  }
  return out;
}

DepthImage clip_range(const DepthImage& depth, double z_min, double z_max) {
  if (!(z_min < z_max)) fail(ErrorKind::InvalidInput, "clip_range: need z_min < z_max");
  DepthImage out = depth;
  const auto lo = static_cast<float>(z_min);
  const auto hi = static_cast<float>(z_max);
  for (float& z : out.data) {
    if (is_valid_depth(z)) z = std::clamp(z, lo, hi);
  }
  return out;
}

FieldMap axial_sigma(const DepthImage& depth, const NoiseParams& p) {
  double sum = 0.0;
  std::size_t count = 0;
  for (float z : depth.data) {
    if (is_valid_depth(z)) {
      sum += z;
      ++count;
    }
  }
  if (count == 0) fail(ErrorKind::DegenerateFrame, "axial_sigma: frame has no valid pixels");
  const double mean = sum / static_cast<double>(count);

  FieldMap sigma(depth.width, depth.height, 0.0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double z = depth.data[i];
    if (z > 0.0) sigma.data[i] = p.a + p.b * (z - mean) * (z - mean) + p.c / std::sqrt(z);
  }
  return sigma;
}

DepthImage add_axial_noise(const DepthImage& depth, const FieldMap& sigma, const RngStream& rng) {
  require_valid_maps(depth, sigma, "add_axial_noise");
  DepthImage out = depth;
  for (std::size_t i = 0; i < out.size(); ++i) {
    float& z = out.data[i];
    if (!is_valid_depth(z) || sigma.data[i] == 0.0) continue;
    const double noisy = z + sigma.data[i] * rng.normal(i);
    z = static_cast<float>(std::max(0.0, noisy));
  }
  return out;
}

FieldMap lateral_sigma(const DepthImage& depth, double alpha, const RngStream& rng) {
  FieldMap sigma(depth.width, depth.height, 0.0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double z = depth.data[i];
    if (z <= 0.0) continue;
    const double xi = 2.0 * rng.uniform(i) - 1.0;
    sigma.data[i] = alpha * z * xi;
  }
  return sigma;
}

FieldMap total_sigma(const FieldMap& sigma_z, const FieldMap& sigma_l, double w) {
  require_same_shape(sigma_z, sigma_l, "total_sigma");
  if (!(w >= 1.0)) fail(ErrorKind::InvalidInput, "total_sigma: w must be >= 1");
  FieldMap out(sigma_z.width, sigma_z.height, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double sz = sigma_z.data[i], sl = sigma_l.data[i];
    out.data[i] = std::sqrt(w * sz * sz + sl * sl);
  }
  return out;
}

FieldMap sigma_dropout_prob(const FieldMap& sigma_tot, const DepthImage& depth, double rho) {
  require_valid_maps(depth, sigma_tot, "sigma_dropout_prob");
  if (!(rho >= 0.0 && rho <= 1.0)) fail(ErrorKind::InvalidInput, "rho must lie in [0, 1]");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!is_valid_depth(depth.data[i])) continue;
    lo = std::min(lo, sigma_tot.data[i]);
    hi = std::max(hi, sigma_tot.data[i]);
  }
  FieldMap p(depth.width, depth.height, 0.0);
  if (!(hi > lo)) return p;  // no valid pixels, or nothing to rank
  const double span = hi - lo;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (is_valid_depth(depth.data[i])) p.data[i] = rho * ((sigma_tot.data[i] - lo) / span);
  }
  return p;
}

FieldMap sobel_gradient(const DepthImage& depth) {
  if (depth.width < 3 || depth.height < 3) {
    fail(ErrorKind::InvalidInput, "sobel_gradient: image smaller than 3x3");
  }
  const int w = depth.width, h = depth.height;
  FieldMap g(w, h, 0.0);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const double centre = depth.at(u, v);
      if (centre <= 0.0) continue;
      auto px = [&](int du, int dv) -> double {
        const int uu = std::clamp(u + du, 0, w - 1);
        const int vv = std::clamp(v + dv, 0, h - 1);
        const double z = depth.at(uu, vv);
        return z > 0.0 ? z : centre;
      };
      const double gx = (px(1, -1) + 2.0 * px(1, 0) + px(1, 1)) -
                        (px(-1, -1) + 2.0 * px(-1, 0) + px(-1, 1));
      const double gy = (px(-1, 1) + 2.0 * px(0, 1) + px(1, 1)) -
                        (px(-1, -1) + 2.0 * px(0, -1) + px(1, -1));
      g.at(u, v) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return g;
}

double edge_threshold(const FieldMap& gradient, double percentile) {
  std::vector<double> positive;
  for (double g : gradient.data) {
    if (g > 0.0) positive.push_back(g);
  }
  if (positive.empty()) return std::numeric_limits<double>::infinity();
  std::sort(positive.begin(), positive.end());
  const double pos = percentile / 100.0 * static_cast<double>(positive.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, positive.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return positive[lo] + frac * (positive[hi] - positive[lo]);
}

FieldMap edge_dropout_prob(const FieldMap& gradient, const NoiseParams& params) {
  FieldMap p(gradient.width, gradient.height, 0.0);
  const double threshold = edge_threshold(gradient, params.edge_percentile);
  if (!std::isfinite(threshold)) return p;
  double g_max = 0.0;
  for (double g : gradient.data) {
    if (g > 0.0 && g >= threshold) g_max = std::max(g_max, g);
  }
  if (g_max <= 0.0) return p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double g = gradient.data[i];
    if (g > 0.0 && g >= threshold) p.data[i] = params.lambda_e * g / g_max;
  }
  return p;
}

Mask dropout_mask(const FieldMap& p_sigma, const FieldMap& p_edge, const RngStream& rng) {
  require_same_shape(p_sigma, p_edge, "dropout_mask");
  Mask mask(p_sigma.width, p_sigma.height, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double p = std::min(p_sigma.data[i] + p_edge.data[i], 1.0);
    mask.data[i] = rng.uniform(i) < p ? 1 : 0;
  }
  return mask;
}

DepthImage apply_dropout(const DepthImage& depth, const FieldMap& p_sigma, const FieldMap& p_edge,
                         const RngStream& rng) {
  require_valid_maps(depth, p_sigma, "apply_dropout");
  const Mask mask = dropout_mask(p_sigma, p_edge, rng);
  DepthImage out = depth;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask.data[i]) out.data[i] = kNoDepth;
  }
  return out;
}

CorruptionTrace corrupt_traced(const DepthImage& depth, const NoiseParams& params,
                               const PipelineToggles& toggles, const StreamKey& key) {
  params.validate();
  CorruptionTrace tr;
  tr.cropped = toggles.crop_resize
                   ? crop_resize(depth, params.margin, depth.width, depth.height)
                   : depth;
  if (!toggles.noise_model) {
    tr.output = tr.cropped;
    return tr;
  }
  tr.clipped = clip_range(tr.cropped, params.z_min, params.z_max);
  tr.sigma_z = axial_sigma(tr.clipped, params);
  tr.noised = add_axial_noise(tr.clipped, tr.sigma_z, key.stream(NoiseStage::AxialNoise));
  tr.sigma_l = lateral_sigma(tr.noised, params.alpha, key.stream(NoiseStage::LateralNoise));
  tr.sigma_tot = total_sigma(tr.sigma_z, tr.sigma_l, params.w);
  tr.p_sigma = sigma_dropout_prob(tr.sigma_tot, tr.noised, params.rho);
  tr.gradient = sobel_gradient(tr.noised);
  tr.p_edge = edge_dropout_prob(tr.gradient, params);
  tr.mask = dropout_mask(tr.p_sigma, tr.p_edge, key.stream(NoiseStage::Dropout));
  tr.output = tr.noised;
  for (std::size_t i = 0; i < tr.output.size(); ++i) {
    if (tr.mask.data[i]) tr.output.data[i] = kNoDepth;
  }
  return tr;
}

DepthImage corrupt(const DepthImage& depth, const NoiseParams& params,
                   const PipelineToggles& toggles, const StreamKey& key) {
  return corrupt_traced(depth, params, toggles, key).output;
}

}  // namespace depthsim
