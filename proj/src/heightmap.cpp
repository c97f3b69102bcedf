#include "depthsim/heightmap.hpp"

#include <cmath>
#include <string>

#include "depthsim/error.hpp"

namespace depthsim {
namespace {

void require_aligned(const HeightmapGrid& a, const HeightmapGrid& b, const char* what) {
  if (a.layout.rows != b.layout.rows || a.layout.cols != b.layout.cols ||
      a.values.size() != b.values.size() ||
      a.values.size() != static_cast<std::size_t>(a.layout.rows) * a.layout.cols) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": heightmap shapes differ");
  }
}

}  // namespace

void HeightmapLayout::validate() const {
  if (rows <= 0 || cols <= 0 || !(cell > 0.0) || !std::isfinite(origin_forward) ||
      !std::isfinite(origin_lateral)) {
    fail(ErrorKind::Config, "heightmap layout: invalid dimensions");
  }
}

Vec3 heightmap_cell_center(const HeightmapLayout& layout, const BasePose& base, int row, int col) {
  const double forward = layout.origin_forward + (row + 0.5) * layout.cell;
  const double lateral = layout.origin_lateral + (col + 0.5) * layout.cell;
  const double c = std::cos(base.yaw), s = std::sin(base.yaw);
  return {base.position.x() + c * forward - s * lateral,
          base.position.y() + s * forward + c * lateral, base.position.z()};
}

HeightmapGrid extract_heightmap(const Bvh& terrain, const BasePose& base,
                                const HeightmapLayout& layout) {
  layout.validate();
  HeightmapGrid grid{layout, std::vector<double>(static_cast<std::size_t>(layout.rows) * layout.cols)};
  const double top = terrain.bounds().hi.z() + 1.0;
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      const Vec3 p = heightmap_cell_center(layout, base, r, c);
      const Ray ray{{p.x(), p.y(), top}, {0.0, 0.0, -1.0}};
      const auto hit = terrain.intersect(ray);
      if (!hit) {
        fail(ErrorKind::Config, "heightmap cell (" + std::to_string(r) + ", " + std::to_string(c) +
                                    ") has no terrain beneath it");
      }
      grid.values[static_cast<std::size_t>(r) * layout.cols + c] = hit->point.z() - base.position.z();
    }
  }
  return grid;
}

HeightmapGrid extract_heightmap(const TerrainSpec& spec, const BasePose& base,
                                const HeightmapLayout& layout) {
  return extract_heightmap(Bvh::build(build_terrain(spec)), base, layout);
}

double mae_cm(const HeightmapGrid& pred, const HeightmapGrid& gt) {
  require_aligned(pred, gt, "mae");
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) sum += std::abs(pred.values[i] - gt.values[i]);
  return 100.0 * sum / static_cast<double>(gt.size());
}

ReconLoss recon_loss(const HeightmapGrid& rough, const HeightmapGrid& refined,
                     const HeightmapGrid& gt) {
  require_aligned(rough, gt, "recon_loss");
  require_aligned(refined, gt, "recon_loss");
  double sq = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double dr = rough.values[i] - gt.values[i];
    sq += dr * dr;
    abs_sum += std::abs(refined.values[i] - gt.values[i]);
  }
  const auto n = static_cast<double>(gt.size());
  ReconLoss loss;
  loss.mse = sq / n;
  loss.l1 = abs_sum / n;
  loss.total = loss.mse + loss.l1;
  return loss;
}

}  // namespace depthsim
