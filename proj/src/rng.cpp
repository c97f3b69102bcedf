#include "depthsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace depthsim {

RngStream::RngStream(std::uint64_t seed, std::uint64_t frame,
                     std::uint64_t environment, NoiseStage stage)
    : key_(hash_combine(
          hash_combine(hash_combine(mix64(seed), frame), environment),
          static_cast<std::uint64_t>(stage))) {}

double RngStream::normal(std::uint64_t index) const {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform(index, 0);
  const double u2 = uniform(index, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace depthsim
