#include "depthsim/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include <png.h>

#include "depthsim/error.hpp"

namespace depthsim::io {
namespace {

static_assert(sizeof(float) == 4);

void append_le_float(std::string& out, float value) {
  auto bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

float read_float(const char* p, bool little_endian) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) {
    const auto byte = static_cast<std::uint32_t>(static_cast<unsigned char>(p[i]));
    bits |= little_endian ? byte << (8 * i) : byte << (8 * (3 - i));
  }
  return std::bit_cast<float>(bits);
}

// Reads one whitespace-delimited header token.
std::string next_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return std::string(bytes.substr(start, pos - start));
}

[[noreturn]] void bad_file(const std::string& what) { fail(ErrorKind::Io, what); }

}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(std::as_bytes(std::span(text.data(), text.size())));
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_file("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) bad_file("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) bad_file("failed writing '" + path.string() + "'");
}

std::string encode_pfm(const DepthImage& image) {
  std::string out = "Pf\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n-1.0\n";
  out.reserve(out.size() + 4 * image.size());
  for (int v = image.height - 1; v >= 0; --v) {
    for (int u = 0; u < image.width; ++u) append_le_float(out, image.at(u, v));
  }
  return out;
}

DepthImage decode_pfm(std::string_view bytes) {
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  if (magic != "Pf") bad_file("PFM: expected grayscale 'Pf' header, got '" + magic + "'");
  int width = 0, height = 0;
  double scale = 0.0;
  try {
    width = std::stoi(next_token(bytes, pos));
    height = std::stoi(next_token(bytes, pos));
    scale = std::stod(next_token(bytes, pos));
  } catch (const std::exception&) {
    bad_file("PFM: malformed header");
  }
  if (width <= 0 || height <= 0 || scale == 0.0) bad_file("PFM: invalid dimensions or scale");
  ++pos;  // single whitespace byte ends the header
  const std::size_t need = 4ull * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + need) bad_file("PFM: truncated pixel data");
  const bool little = scale < 0.0;
  DepthImage image(width, height);
  const char* p = bytes.data() + pos;
  for (int v = height - 1; v >= 0; --v) {
    for (int u = 0; u < width; ++u, p += 4) image.at(u, v) = read_float(p, little);
  }
  return image;
}

void write_pfm(const std::filesystem::path& path, const DepthImage& image) {
  write_file(path, encode_pfm(image));
}

DepthImage read_pfm(const std::filesystem::path& path) { return decode_pfm(read_file(path)); }

void write_png16(const std::filesystem::path& path, const DepthImage& image) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) bad_file("cannot open '" + path.string() + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    bad_file("libpng initialisation failed");
  }
  std::vector<png_byte> row(2 * static_cast<std::size_t>(image.width));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    bad_file("libpng failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height),
               16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const double mm = std::round(static_cast<double>(image.at(u, v)) * 1000.0);
      const auto value = static_cast<std::uint16_t>(std::clamp(mm, 0.0, 65535.0));
      row[2 * u] = static_cast<png_byte>(value >> 8);  // PNG samples are big-endian
      row[2 * u + 1] = static_cast<png_byte>(value & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

DepthImage read_png16(const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!fp) bad_file("cannot open '" + path.string() + "' for reading");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    bad_file("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    bad_file("libpng failed reading '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 16 || png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    bad_file("'" + path.string() + "' is not a 16-bit grayscale PNG");
  }
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  DepthImage image(width, height);
  std::vector<png_byte> row(2 * static_cast<std::size_t>(width));
  for (int v = 0; v < height; ++v) {
    png_read_row(png, row.data(), nullptr);
    for (int u = 0; u < width; ++u) {
      const unsigned value = (static_cast<unsigned>(row[2 * u]) << 8) | row[2 * u + 1];
      image.at(u, v) = static_cast<float>(value / 1000.0);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

std::string encode_heightmap(const HeightmapGrid& grid) {
  const HeightmapLayout& l = grid.layout;
  if (grid.values.size() != static_cast<std::size_t>(l.rows) * l.cols) {
    fail(ErrorKind::InvalidInput, "heightmap value count does not match layout");
  }
  std::string out;
  out.reserve(4 * (8 + grid.values.size()));
  for (double h : {static_cast<double>(kHeightmapFormatVersion), static_cast<double>(l.rows),
                   static_cast<double>(l.cols), l.cell, l.origin_forward, l.origin_lateral, 0.0, 0.0}) {
    append_le_float(out, static_cast<float>(h));
  }
  for (double v : grid.values) append_le_float(out, static_cast<float>(v));
  return out;
}

HeightmapGrid decode_heightmap(std::string_view bytes) {
  if (bytes.size() < 32) bad_file("heightmap: truncated header");
  float header[8];
  for (int i = 0; i < 8; ++i) header[i] = read_float(bytes.data() + 4 * i, true);
  if (header[0] != static_cast<float>(kHeightmapFormatVersion)) bad_file("heightmap: unsupported version");
  HeightmapGrid grid;
  grid.layout.rows = static_cast<int>(header[1]);
  grid.layout.cols = static_cast<int>(header[2]);
  grid.layout.cell = header[3];
  grid.layout.origin_forward = header[4];
  grid.layout.origin_lateral = header[5];
  if (grid.layout.rows <= 0 || grid.layout.cols <= 0) bad_file("heightmap: invalid dimensions");
  const std::size_t n = static_cast<std::size_t>(grid.layout.rows) * grid.layout.cols;
  if (bytes.size() != 32 + 4 * n) bad_file("heightmap: size does not match header");
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) grid.values[i] = read_float(bytes.data() + 32 + 4 * i, true);
  return grid;
}

void write_heightmap(const std::filesystem::path& path, const HeightmapGrid& grid) {
  write_file(path, encode_heightmap(grid));
}

HeightmapGrid read_heightmap(const std::filesystem::path& path) {
  return decode_heightmap(read_file(path));
}

void write_heightmap_csv(std::ostream& out, const HeightmapGrid& grid) {
  char buf[32];
  for (int r = 0; r < grid.layout.rows; ++r) {
    for (int c = 0; c < grid.layout.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", grid.at(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace depthsim::io
