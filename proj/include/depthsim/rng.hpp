#pragma once

#include <cstdint>

namespace depthsim {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

/// Maps the top 53 bits onto [0, 1).
constexpr double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

enum class NoiseStage : std::uint32_t {
  AxialNoise = 1,
  LateralNoise = 2,
  Dropout = 3,
};

/// Counter-based random stream. Every sample is a pure function of
/// (seed, frame, environment, stage, pixel index, draw), so pixels can be
/// evaluated in any order and inserting frames never reshuffles others.
///
/// Key derivation:
///   key = H(H(H(H(mix64(seed), frame), env), stage)
///   sample(i, k) = mix64(H(H(key, i), k))
/// where H = hash_combine.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t frame, std::uint64_t environment,
            NoiseStage stage);

  std::uint64_t bits(std::uint64_t index, std::uint64_t draw = 0) const {
    return mix64(hash_combine(hash_combine(key_, index), draw));
  }

  /// Uniform on [0, 1).
  double uniform(std::uint64_t index, std::uint64_t draw = 0) const {
    return to_unit_double(bits(index, draw));
  }

  /// Standard normal via Box-Muller on draws 0 and 1 of `index`.
  double normal(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace depthsim
