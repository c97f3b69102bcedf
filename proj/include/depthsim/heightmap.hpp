#pragma once

#include <vector>

#include "depthsim/bvh.hpp"
#include "depthsim/camera.hpp"
#include "depthsim/terrain.hpp"

namespace depthsim {

/// Placement of the elevation grid in the yaw-aligned base frame. Row r lies
/// at forward distance origin_forward + (r + 0.5) * cell, column c at lateral
/// offset origin_lateral + (c + 0.5) * cell (+y is left).
struct HeightmapLayout {
  int rows = 20;
  int cols = 20;
  double cell = 0.05;
  double origin_forward = 0.0;
  double origin_lateral = -0.5;

  void validate() const;
  bool operator==(const HeightmapLayout&) const = default;
};

/// Base-relative elevations, row-major (row = forward index).
struct HeightmapGrid {
  HeightmapLayout layout;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * layout.cols + c]; }
  std::size_t size() const { return values.size(); }
};

/// World (x, y) of a cell centre for the given base.
Vec3 heightmap_cell_center(const HeightmapLayout& layout, const BasePose& base, int row, int col);

/// Highest terrain hit of a downward vertical ray at every cell centre, minus
/// base z. Throws Config when a cell has no terrain beneath it.
HeightmapGrid extract_heightmap(const Bvh& terrain, const BasePose& base,
                                const HeightmapLayout& layout = {});

HeightmapGrid extract_heightmap(const TerrainSpec& spec, const BasePose& base,
                                const HeightmapLayout& layout = {});

/// Mean absolute error in centimetres.
double mae_cm(const HeightmapGrid& pred, const HeightmapGrid& gt);

struct ReconLoss {
  double mse = 0.0;    ///< rough vs ground truth (m^2)
  double l1 = 0.0;     ///< refined vs ground truth (m)
  double total = 0.0;  ///< mse + l1
};

ReconLoss recon_loss(const HeightmapGrid& rough, const HeightmapGrid& refined,
                     const HeightmapGrid& gt);

}  // namespace depthsim
