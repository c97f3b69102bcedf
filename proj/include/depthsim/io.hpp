#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depthsim/heightmap.hpp"
#include "depthsim/image.hpp"

namespace depthsim::io {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

/// Splits one CSV line on commas and trims blanks and a trailing CR from each
/// field. No quoting support; the formats here are purely numeric.
std::vector<std::string_view> split_csv_line(std::string_view line);
/// Splits text into lines on '\n'.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories; throws Io on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

// PFM, grayscale: "Pf\n<width> <height>\n-1.0\n" followed by width*height
// little-endian float32 values, bottom image row first.
std::string encode_pfm(const DepthImage& image);
DepthImage decode_pfm(std::string_view bytes);
void write_pfm(const std::filesystem::path& path, const DepthImage& image);
DepthImage read_pfm(const std::filesystem::path& path);

/// 16-bit grayscale PNG in millimetres, rounded; depths above 65.535 m saturate.
void write_png16(const std::filesystem::path& path, const DepthImage& image);
/// Decodes a PNG16 written by write_png16 back to metres.
DepthImage read_png16(const std::filesystem::path& path);

// Heightmap binary: eight little-endian float32 header values
//   [version=1, rows, cols, cell, origin_forward, origin_lateral, 0, 0]
// followed by rows*cols little-endian float32 elevations, row-major.
inline constexpr int kHeightmapFormatVersion = 1;
std::string encode_heightmap(const HeightmapGrid& grid);
HeightmapGrid decode_heightmap(std::string_view bytes);
void write_heightmap(const std::filesystem::path& path, const HeightmapGrid& grid);
HeightmapGrid read_heightmap(const std::filesystem::path& path);
/// One CSV line per grid row, comma separated, 17 significant digits.
void write_heightmap_csv(std::ostream& out, const HeightmapGrid& grid);

}  // namespace depthsim::io
