#include "depthsim/trajectory.hpp"

#include <charconv>
#include <map>
#include <set>
#include <string>

#include "depthsim/error.hpp"
#include "depthsim/io.hpp"

namespace depthsim {
namespace {

double to_double(std::string_view f, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    fail(ErrorKind::Config, "trajectory line " + std::to_string(line) + ": bad number '" + std::string(f) + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view f, int line) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    fail(ErrorKind::Config, "trajectory line " + std::to_string(line) + ": bad integer '" + std::string(f) + "'");
  }
  return v;
}

constexpr const char* kBodySuffixes[7] = {"qw", "qx", "qy", "qz", "tx", "ty", "tz"};

}  // namespace

std::vector<TrajectoryRow> parse_trajectory(std::string_view csv) {
  const std::vector<std::string_view> lines = io::split_lines(csv);
  std::size_t first = 0;
  while (first < lines.size() && io::split_csv_line(lines[first]) == std::vector<std::string_view>{""}) ++first;
  if (first == lines.size()) fail(ErrorKind::Config, "trajectory: empty file");

  const auto header = io::split_csv_line(lines[first]);
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(std::string(header[i]), i).second) {
      fail(ErrorKind::Config, "trajectory: duplicate column '" + std::string(header[i]) + "'");
    }
  }
  for (const char* required : {"frame", "env", "x", "y", "z", "yaw"}) {
    if (!col.count(required)) fail(ErrorKind::Config, std::string("trajectory: missing column '") + required + "'");
  }
  std::size_t body_count = 0;
  while (col.count("b" + std::to_string(body_count) + "_qw")) ++body_count;
  const std::size_t known = 6 + 7 * body_count;
  for (std::size_t b = 0; b < body_count; ++b) {
    for (const char* suffix : kBodySuffixes) {
      if (!col.count("b" + std::to_string(b) + "_" + suffix)) {
        fail(ErrorKind::Config, "trajectory: body " + std::to_string(b) + " is missing column '" + suffix + "'");
      }
    }
  }
  if (col.size() != known) fail(ErrorKind::Config, "trajectory: unrecognised columns in header");

  std::vector<TrajectoryRow> rows;
  std::set<std::pair<int, std::int64_t>> seen;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    const auto fields = io::split_csv_line(lines[li]);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      fail(ErrorKind::Config, "trajectory line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    }
    auto num = [&](const std::string& name) { return to_double(fields[col.find(name)->second], line_no); };
    TrajectoryRow row;
    row.frame = to_int(fields[col.find("frame")->second], line_no);
    row.env = static_cast<int>(to_int(fields[col.find("env")->second], line_no));
    if (row.frame < 0 || row.env < 0) {
      fail(ErrorKind::Config, "trajectory line " + std::to_string(line_no) + ": negative frame or env");
    }
    row.base.position = {num("x"), num("y"), num("z")};
    row.base.yaw = num("yaw");
    if (body_count > 0) {
      BodyPoseSet poses(body_count);
      for (std::size_t b = 0; b < body_count; ++b) {
        const std::string p = "b" + std::to_string(b) + "_";
        poses[b].orientation = {num(p + "qw"), num(p + "qx"), num(p + "qy"), num(p + "qz")};
        poses[b].translation = {num(p + "tx"), num(p + "ty"), num(p + "tz")};
      }
      row.bodies = std::move(poses);
    }
    if (!seen.emplace(row.env, row.frame).second) {
      fail(ErrorKind::Config, "trajectory line " + std::to_string(line_no) + ": duplicate (env, frame)");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace depthsim
