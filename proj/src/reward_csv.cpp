#include "depthsim/reward_csv.hpp"

#include <charconv>
#include <cstdio>
#include <map>

#include "depthsim/error.hpp"
#include "depthsim/io.hpp"

namespace depthsim::policy {
namespace {

// Every scalar slot of RewardInputs keyed by its column name.
std::vector<std::pair<std::string, double*>> slots(RewardInputs& in) {
  std::vector<std::pair<std::string, double*>> s{
      {"v_cmd_x", &in.v_cmd_x}, {"v_cmd_y", &in.v_cmd_y},     {"v_mean_x", &in.v_mean_x},
      {"v_mean_y", &in.v_mean_y}, {"v_z", &in.v_z},           {"omega_x", &in.omega_xy[0]},
      {"omega_y", &in.omega_xy[1]}, {"g_x", &in.gravity_xy[0]}, {"g_y", &in.gravity_xy[1]},
  };
  const std::pair<const char*, JointVector*> joints[] = {
      {"tau_", &in.tau}, {"kp_", &in.kp}, {"q_", &in.q}, {"dq_", &in.dq},
      {"q_min_", &in.q_min}, {"q_max_", &in.q_max}, {"tau_max_", &in.tau_max}};
  for (const auto& [prefix, vec] : joints) {
    for (int j = 0; j < kNumJoints; ++j) s.emplace_back(prefix + std::to_string(j), &(*vec)[j]);
  }
  for (int f = 0; f < kNumFeet; ++f) {
    s.emplace_back("fx_" + std::to_string(f), &in.foot_fx[f]);
    s.emplace_back("fz_" + std::to_string(f), &in.foot_fz[f]);
  }
  s.emplace_back("a21", &in.a21);
  s.emplace_back("a22", &in.a22);
  s.emplace_back("a21_prev", &in.a21_prev);
  s.emplace_back("a22_prev", &in.a22_prev);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> reward_csv_columns() {
  RewardInputs dummy;
  std::vector<std::string> cols;
  for (const auto& [name, _] : slots(dummy)) cols.push_back(name);
  for (int f = 0; f < kNumFeet; ++f) cols.push_back("swing_" + std::to_string(f));
  return cols;
}

std::vector<RewardRow> parse_reward_csv(std::string_view csv) {
  const auto lines = io::split_lines(csv);
  if (lines.empty()) fail(ErrorKind::Config, "reward csv: empty input");
  const auto header = io::split_csv_line(lines[0]);
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(header[i]), i);
  const auto required = reward_csv_columns();
  for (const std::string& name : required) {
    if (!col.count(name)) fail(ErrorKind::Config, "reward csv: missing column '" + name + "'");
  }
  const bool has_disc = col.count("disc") > 0;
  if (col.size() != required.size() + (has_disc ? 1 : 0) || col.size() != header.size()) {
    fail(ErrorKind::Config, "reward csv: unknown or duplicate columns");
  }

  std::vector<RewardRow> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = io::split_csv_line(lines[li]);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      fail(ErrorKind::Config, "reward csv line " + std::to_string(li + 1) + ": wrong field count");
    }
    auto value = [&](std::string_view name) {
      const std::string_view f = fields[col.find(name)->second];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        fail(ErrorKind::Config, "reward csv line " + std::to_string(li + 1) + ": bad number in '" +
                                    std::string(name) + "'");
      }
      return v;
    };
    RewardRow row;
    for (auto& [name, slot] : slots(row.inputs)) *slot = value(name);
    for (int f = 0; f < kNumFeet; ++f) row.inputs.swing[f] = value("swing_" + std::to_string(f)) != 0.0;
    if (has_disc) row.discriminator = value("disc");
    rows.push_back(row);
  }
  return rows;
}

std::string format_reward_csv(const std::vector<RewardRow>& rows) {
  auto cols = reward_csv_columns();
  const bool has_disc = !rows.empty() && rows.front().discriminator.has_value();
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  if (has_disc) out += ",disc";
  out += '\n';
  for (RewardRow row : rows) {
    bool first = true;
    for (const auto& [name, slot] : slots(row.inputs)) {
      out += (first ? "" : ",") + fmt(*slot);
      first = false;
    }
    for (int f = 0; f < kNumFeet; ++f) out += row.inputs.swing[f] ? ",1" : ",0";
    if (has_disc) out += "," + fmt(row.discriminator.value_or(0.0));
    out += '\n';
  }
  return out;
}

std::string evaluate_reward_csv(const std::vector<RewardRow>& rows, const RewardWeights& weights,
                                const RewardOptions& options) {
  std::string out = "row";
  for (auto name : kRewardTermNames) out += "," + std::string(name);
  out += ",amp,total\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RewardTerms terms = reward_terms(rows[i].inputs, options);
    const double amp = rows[i].discriminator ? amp_reward(*rows[i].discriminator) : 0.0;
    out += std::to_string(i);
    for (double t : terms) out += "," + fmt(t);
    out += "," + fmt(amp) + "," + fmt(total_reward(weights, terms, amp)) + "\n";
  }
  return out;
}

}  // namespace depthsim::policy
