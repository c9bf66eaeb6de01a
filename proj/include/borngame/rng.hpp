#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace borngame {

/// SplitMix64 finalizer. Used for seed derivation only.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trajectory `index` in an ensemble:
///   splitmix64(splitmix64(master) XOR index)
/// Any worker layout yields the same per-trajectory streams.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ index);
}

inline constexpr const char* kGeneratorFamily = "mt19937_64";
inline constexpr const char* kSeedDerivation = "splitmix64(splitmix64(master)^index)";
inline constexpr const char* kSamplerVersion = "borngame-sampler-1";

/// MT19937-64 with distribution code written out here so that draws are
/// identical on every standard library (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [lo, hi], unbiased (threshold rejection).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal by the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace borngame
