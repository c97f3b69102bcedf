#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "depthsim/geometry.hpp"

namespace depthsim {

enum class TerrainKind {
  Flat,
  RoughSlopeUp,
  RoughSlopeDown,
  StairsUp,
  StairsDown,
  Gap,
  HighPlane,
  Discrete,
  Hurdle,
};

std::string_view to_string(TerrainKind kind);
/// Throws Config for an unknown name.
TerrainKind terrain_kind_from_string(std::string_view name);

/// Kind-specific shape parameters. All lengths in meters; `start` is the
/// world x at which the feature (first riser, gap, platform, block field,
/// hurdle, slope origin) begins.
struct TerrainParams {
  double start = 0.0;
  double step_height = 0.1;
  double step_run = 0.3;
  double slope_grade = 0.15;
  double roughness = 0.02;
  double gap_width = 0.4;
  double gap_depth = 0.5;
  double plane_height = 0.2;
  double block_size = 0.2;
  double block_height = 0.08;
  double hurdle_height = 0.15;
  double hurdle_width = 0.1;
};

/// A procedural terrain. The terrain is built on [0, extent]^2 in its own
/// frame, then shifted by (-border, -border, 0), so world coordinates span
/// [-border, extent - border]^2 with features positioned in world x.
struct TerrainSpec {
  TerrainKind kind = TerrainKind::Flat;
  TerrainParams params;
  double extent = 8.0;
  double cell = 0.05;
  double border = 4.0;
  std::uint64_t seed = 0;

  /// Throws Config when the spec cannot be built exactly (non-positive sizes,
  /// non-finite heights, stepped features off the cell grid).
  void validate() const;

  double world_min() const { return -border; }
  double world_max() const { return extent - border; }
  int cells_per_side() const;
};

/// Terrain mesh in world coordinates (terrain offset already applied).
TriangleMesh build_terrain(const TerrainSpec& spec);

/// Same geometry before the border offset.
TriangleMesh build_terrain_local(const TerrainSpec& spec);

/// Exact height of the terrain surface at world (x, y); for rough slopes
/// this is the piecewise-linear surface over the fixed triangulation.
/// Throws Domain outside the terrain extent.
double analytic_height(const TerrainSpec& spec, double x, double y);

}  // namespace depthsim
