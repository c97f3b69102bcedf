#pragma once

#include <cstdint>

#include "depthsim/image.hpp"
#include "depthsim/rng.hpp"

namespace depthsim {

/// Depth-corruption hyperparameters. Defaults are tuning choices for a
/// short-range structured-light camera, not calibrated values.
struct NoiseParams {
  double a = 0.001;    ///< constant axial term (m)
  double b = 0.0019;   ///< quadratic-about-mean axial term (1/m)
  double c = 0.0016;   ///< inverse-sqrt-range axial term (m^1.5)
  double alpha = 0.01; ///< lateral scale
  double w = 2.0;      ///< axial weight in the combined sigma, >= 1
  double rho = 0.1;    ///< max sigma-driven dropout probability
  double lambda_e = 0.5;  ///< max edge-driven dropout probability
  double z_min = 0.3;  ///< m
  double z_max = 5.0;  ///< m
  int margin = 10;     ///< crop margin (px)
  double edge_percentile = 95.0;

  /// Throws Config on out-of-range values.
  void validate() const;
};

/// Stage switches of the corruption pipeline. `self_occlusion` is consumed by
/// the renderer; the other two gate stages here.
struct PipelineToggles {
  bool self_occlusion = true;
  bool crop_resize = true;
  bool noise_model = true;  ///< range clipping, noise and dropout
};

/// Identifies one frame's random streams.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t frame = 0;
  std::uint64_t environment = 0;

  RngStream stream(NoiseStage stage) const { return {seed, frame, environment, stage}; }
};

/// Bilinear sample at continuous pixel coordinates (u, v) ignoring invalid
/// taps; returns 0.0 if no valid tap carries weight. Coordinates are clamped
/// to the image.
double bilinear_sample(const DepthImage& depth, double u, double v);

/// Crops `margin` pixels from every side and resamples the centre to
/// out_w x out_h (half-pixel-centre mapping).
DepthImage crop_resize(const DepthImage& depth, int margin, int out_w, int out_h);

DepthImage clip_range(const DepthImage& depth, double z_min, double z_max);

/// sigma_z = a + b (z - mean)^2 + c / sqrt(z) over valid pixels, 0 elsewhere.
/// Throws DegenerateFrame when no pixel is valid.
FieldMap axial_sigma(const DepthImage& depth, const NoiseParams& params);

DepthImage add_axial_noise(const DepthImage& depth, const FieldMap& sigma, const RngStream& rng);

/// sigma_L = alpha * z * xi with xi ~ U[-1, 1] per valid pixel (signed).
FieldMap lateral_sigma(const DepthImage& depth, double alpha, const RngStream& rng);

FieldMap total_sigma(const FieldMap& sigma_z, const FieldMap& sigma_l, double w);

/// Min-max normalized total sigma over valid pixels, scaled by rho.
FieldMap sigma_dropout_prob(const FieldMap& sigma_tot, const DepthImage& depth, double rho);

/// Sobel magnitude with replicate padding. Invalid neighbours are replaced by
/// the centre value and invalid pixels get G = 0, so holes do not read as edges.
FieldMap sobel_gradient(const DepthImage& depth);

/// Gradient threshold at `percentile` of the strictly positive gradients
/// (linear interpolation between order statistics); +inf if none are positive.
double edge_threshold(const FieldMap& gradient, double percentile);

FieldMap edge_dropout_prob(const FieldMap& gradient, const NoiseParams& params);

/// 1 where u < min(p_sigma + p_edge, 1) with one uniform draw per pixel.
Mask dropout_mask(const FieldMap& p_sigma, const FieldMap& p_edge, const RngStream& rng);

DepthImage apply_dropout(const DepthImage& depth, const FieldMap& p_sigma, const FieldMap& p_edge,
                         const RngStream& rng);

/// Every intermediate of one corruption pass. Fields of disabled stages stay empty.
struct CorruptionTrace {
  DepthImage cropped;
  DepthImage clipped;
  FieldMap sigma_z;
  DepthImage noised;
  FieldMap sigma_l;
  FieldMap sigma_tot;
  FieldMap p_sigma;
  FieldMap gradient;
  FieldMap p_edge;
  Mask mask;
  DepthImage output;
};

CorruptionTrace corrupt_traced(const DepthImage& depth, const NoiseParams& params,
                               const PipelineToggles& toggles, const StreamKey& key);

/// Full pipeline: crop/resize, clip, axial noise, lateral sigma, combined
/// sigma, sigma dropout, Sobel on the noised frame, edge dropout, final mask.
/// Output has the input's resolution.
DepthImage corrupt(const DepthImage& depth, const NoiseParams& params,
                   const PipelineToggles& toggles, const StreamKey& key);

}  // namespace depthsim
