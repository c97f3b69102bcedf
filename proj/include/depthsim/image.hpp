#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "depthsim/error.hpp"

namespace depthsim {

/// Row-major 2D grid; (u, v) = (column, row).
template <class T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w < 0 || h < 0) fail(ErrorKind::InvalidInput, "negative grid size");
  }

  std::size_t size() const { return data.size(); }
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u);
  }
  T& at(int u, int v) { return data[index(u, v)]; }
  const T& at(int u, int v) const { return data[index(u, v)]; }

  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return width == other.width && height == other.height;
  }

  bool operator==(const Grid&) const = default;
};

/// Metric depth in meters; 0.0 marks a no-hit or invalid pixel.
using DepthImage = Grid<float>;
/// Per-pixel scalar fields aligned with a DepthImage (sigma, gradient, probability).
using FieldMap = Grid<double>;
using Mask = Grid<std::uint8_t>;

inline constexpr float kNoDepth = 0.0f;

inline bool is_valid_depth(float z) { return z > 0.0f; }

template <class A, class B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) fail(ErrorKind::InvalidInput, std::string(what) + ": shape mismatch");
}

}  // namespace depthsim
