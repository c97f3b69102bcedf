#include "depthsim/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "depthsim/error.hpp"
#include "depthsim/rng.hpp"

namespace depthsim {
namespace {

constexpr std::array<std::pair<TerrainKind, std::string_view>, 9> kKindNames{{
    {TerrainKind::Flat, "flat"},
    {TerrainKind::RoughSlopeUp, "rough_slope_up"},
    {TerrainKind::RoughSlopeDown, "rough_slope_down"},
    {TerrainKind::StairsUp, "stairs_up"},
    {TerrainKind::StairsDown, "stairs_down"},
    {TerrainKind::Gap, "gap"},
    {TerrainKind::HighPlane, "high_plane"},
    {TerrainKind::Discrete, "discrete"},
    {TerrainKind::Hurdle, "hurdle"},
}};

bool is_stepped(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::StairsUp:
    case TerrainKind::StairsDown:
    case TerrainKind::Gap:
    case TerrainKind::HighPlane:
    case TerrainKind::Discrete:
      return true;
    default:
      return false;
  }
}

bool is_integer_multiple(double value, double unit) {
  const double q = value / unit;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
}

std::uint64_t signed_key(std::int64_t v) { return static_cast<std::uint64_t>(v); }

// Uniform in [-1, 1] keyed by the seed and a 2D lattice index.
double lattice_noise(std::uint64_t seed, std::int64_t i, std::int64_t j) {
  const std::uint64_t h = mix64(hash_combine(hash_combine(mix64(seed), signed_key(i)), signed_key(j)));
  return 2.0 * to_unit_double(h) - 1.0;
}

// Height of the piecewise-constant terrains. Feature boundaries are
// half-open on the right: [start + k*run, start + (k+1)*run).
double stepped_height(const TerrainSpec& spec, double x, double y) {
  const TerrainParams& p = spec.params;
  switch (spec.kind) {
    case TerrainKind::StairsUp:
    case TerrainKind::StairsDown: {
      if (x < p.start) return 0.0;
      const double k = std::floor((x - p.start) / p.step_run);
      return (spec.kind == TerrainKind::StairsUp ? 1.0 : -1.0) * k * p.step_height;
    }
    case TerrainKind::Gap:
      return (x >= p.start && x < p.start + p.gap_width) ? -p.gap_depth : 0.0;
    case TerrainKind::HighPlane:
      return x >= p.start ? p.plane_height : 0.0;
    case TerrainKind::Discrete: {
      if (x < p.start) return 0.0;
      const auto bx = static_cast<std::int64_t>(std::floor((x - p.start) / p.block_size));
      const auto by = static_cast<std::int64_t>(std::floor(y / p.block_size));
      return p.block_height * lattice_noise(spec.seed, bx, by);
    }
    default:
      return 0.0;
  }
}

double slope_sign(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::RoughSlopeUp: return 1.0;
    case TerrainKind::RoughSlopeDown: return -1.0;
    default: return 0.0;
  }
}

// Node height of the continuous (node-sampled) terrains.
double node_height(const TerrainSpec& spec, int i, int j) {
  const double sign = slope_sign(spec.kind);
  if (sign == 0.0) return 0.0;
  const double x = spec.world_min() + i * spec.cell;
  const double slope = sign * spec.params.slope_grade * (x - spec.params.start);
  return slope + spec.params.roughness * lattice_noise(spec.seed, i, j);
}

void push_quad(TriangleMesh& m, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // a-b-c-d counter-clockwise; diagonal a-c.
  const auto base = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.insert(m.vertices.end(), {a, b, c, d});
  m.faces.push_back({base, base + 1, base + 2});
  m.faces.push_back({base, base + 2, base + 3});
}

TriangleMesh build_node_grid(const TerrainSpec& spec) {
  const int n = spec.cells_per_side();
  const auto stride = static_cast<std::uint32_t>(n + 1);
  TriangleMesh m;
  m.vertices.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      m.vertices.emplace_back(i * spec.cell, j * spec.cell, node_height(spec, i, j));
    }
  }
  m.faces.reserve(2 * static_cast<std::size_t>(n) * n);
  for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(n); ++j) {
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i) {
      const std::uint32_t v00 = j * stride + i;
      const std::uint32_t v10 = v00 + 1;
      const std::uint32_t v01 = v00 + stride;
      const std::uint32_t v11 = v01 + 1;
      m.faces.push_back({v00, v10, v11});
      m.faces.push_back({v00, v11, v01});
    }
  }
  return m;
}

// One flat quad per cell at the cell-center height, plus vertical walls
// wherever neighbouring cells differ.
TriangleMesh build_terraced(const TerrainSpec& spec) {
  const int n = spec.cells_per_side();
  const double c = spec.cell;
  std::vector<double> heights(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double& { return heights[static_cast<std::size_t>(j) * n + i]; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      at(i, j) = stepped_height(spec, spec.world_min() + (i + 0.5) * c,
                                spec.world_min() + (j + 0.5) * c);
    }
  }

  TriangleMesh m;
  m.vertices.reserve(4 * heights.size());
  m.faces.reserve(2 * heights.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double h = at(i, j);
      const double x0 = i * c, x1 = (i + 1) * c, y0 = j * c, y1 = (j + 1) * c;
      push_quad(m, {x0, y0, h}, {x1, y0, h}, {x1, y1, h}, {x0, y1, h});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double h = at(i, j);
      const double x1 = (i + 1) * c, y0 = j * c, y1 = (j + 1) * c;
      if (i + 1 < n && at(i + 1, j) != h) {
        const double h2 = at(i + 1, j);
        push_quad(m, {x1, y0, h}, {x1, y1, h}, {x1, y1, h2}, {x1, y0, h2});
      }
      const double x0 = i * c;
      if (j + 1 < n && at(i, j + 1) != h) {
        const double h2 = at(i, j + 1);
        push_quad(m, {x0, y1, h}, {x1, y1, h}, {x1, y1, h2}, {x0, y1, h2});
      }
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(TerrainKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

TerrainKind terrain_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  fail(ErrorKind::Config, "unknown terrain kind '" + std::string(name) + "'");
}

int TerrainSpec::cells_per_side() const {
  return static_cast<int>(std::lround(extent / cell));
}

void TerrainSpec::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Config, "terrain: " + what);
  };
  require(std::isfinite(extent) && extent > 0.0, "extent must be > 0");
  require(std::isfinite(cell) && cell > 0.0, "cell must be > 0");
  require(std::isfinite(border) && border >= 0.0, "border must be >= 0");
  require(is_integer_multiple(extent, cell), "extent must be a multiple of cell");
  require(cells_per_side() >= 1, "extent must hold at least one cell");
  require(is_integer_multiple(border, cell), "border must be a multiple of cell");

  const TerrainParams& p = params;
  for (double v : {p.start, p.step_height, p.step_run, p.slope_grade, p.roughness, p.gap_width,
                   p.gap_depth, p.plane_height, p.block_size, p.block_height, p.hurdle_height,
                   p.hurdle_width}) {
    require(std::isfinite(v), "parameters must be finite");
  }

  auto on_grid = [&](double world_x) { return is_integer_multiple(world_x + border, cell); };
  switch (kind) {
    case TerrainKind::StairsUp:
    case TerrainKind::StairsDown:
      require(p.step_run > 0.0, "step_run must be > 0");
      require(on_grid(p.start) && is_integer_multiple(p.step_run, cell),
              "stair edges must lie on the cell grid");
      break;
    case TerrainKind::Gap:
      require(p.gap_width > 0.0 && p.gap_depth >= 0.0, "gap width/depth invalid");
      require(on_grid(p.start) && on_grid(p.start + p.gap_width),
              "gap edges must lie on the cell grid");
      break;
    case TerrainKind::HighPlane:
      require(on_grid(p.start), "platform edge must lie on the cell grid");
      break;
    case TerrainKind::Discrete:
      require(p.block_size > 0.0, "block_size must be > 0");
      require(on_grid(p.start) && is_integer_multiple(p.block_size, cell),
              "block edges must lie on the cell grid");
      break;
    case TerrainKind::Hurdle:
      require(p.hurdle_width > 0.0 && p.hurdle_height > 0.0, "hurdle width/height must be > 0");
      break;
    case TerrainKind::RoughSlopeUp:
    case TerrainKind::RoughSlopeDown:
      require(p.roughness >= 0.0, "roughness must be >= 0");
      break;
    case TerrainKind::Flat:
      break;
  }
}

TriangleMesh build_terrain_local(const TerrainSpec& spec) {
  spec.validate();
  if (is_stepped(spec.kind)) return build_terraced(spec);
  TriangleMesh m = build_node_grid(spec);
  if (spec.kind == TerrainKind::Hurdle) {
    const TerrainParams& p = spec.params;
    const double x0 = p.start + spec.border;
    m = merge_meshes(m, make_box({x0, 0.0, 0.0}, {x0 + p.hurdle_width, spec.extent, p.hurdle_height}));
  }
  return m;
}

TriangleMesh build_terrain(const TerrainSpec& spec) {
  return apply_terrain_offset(build_terrain_local(spec), spec.border);
}

double analytic_height(const TerrainSpec& spec, double x, double y) {
  const double lo = spec.world_min();
  const double hi = spec.world_max();
  if (!(x >= lo && x <= hi && y >= lo && y <= hi)) {
    fail(ErrorKind::Domain, "query (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") outside terrain extent");
  }
  if (is_stepped(spec.kind)) return stepped_height(spec, x, y);
  if (spec.kind == TerrainKind::Hurdle) {
    const TerrainParams& p = spec.params;
    return (x >= p.start && x <= p.start + p.hurdle_width) ? p.hurdle_height : 0.0;
  }
  if (spec.kind == TerrainKind::Flat) return 0.0;

  const int n = spec.cells_per_side();
  const double gx = (x - lo) / spec.cell;
  const double gy = (y - lo) / spec.cell;
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, n - 1);
  const double s = gx - i;
  const double t = gy - j;
  const double h00 = node_height(spec, i, j);
  const double h10 = node_height(spec, i + 1, j);
  const double h01 = node_height(spec, i, j + 1);
  const double h11 = node_height(spec, i + 1, j + 1);
  // Diagonal runs from (i, j) to (i+1, j+1).
  if (s >= t) return h00 + s * (h10 - h00) + t * (h11 - h10);
  return h00 + t * (h01 - h00) + s * (h11 - h01);
}

}  // namespace depthsim
