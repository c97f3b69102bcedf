#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depthsim/reward.hpp"

namespace depthsim::policy {

/// Column layout of the reward-input CSV:
///   v_cmd_x, v_cmd_y, v_mean_x, v_mean_y, v_z, omega_x, omega_y, g_x, g_y,
///   tau_<j>, kp_<j>, q_<j>, dq_<j>, q_min_<j>, q_max_<j>, tau_max_<j> (j = 0..19),
///   fx_<f>, fz_<f>, swing_<f> (f = 0, 1), a21, a22, a21_prev, a22_prev,
/// plus an optional `disc` column with the discriminator output.
std::vector<std::string> reward_csv_columns();

struct RewardRow {
  RewardInputs inputs;
  std::optional<double> discriminator;
};

/// Columns may appear in any order; throws Config on missing or unknown ones.
std::vector<RewardRow> parse_reward_csv(std::string_view csv);

std::string format_reward_csv(const std::vector<RewardRow>& rows);

/// Header "row,<14 term names>,amp,total" and one line per input row, values
/// printed with 17 significant digits. amp is 0 without a `disc` column.
std::string evaluate_reward_csv(const std::vector<RewardRow>& rows, const RewardWeights& weights,
                                const RewardOptions& options);

}  // namespace depthsim::policy
