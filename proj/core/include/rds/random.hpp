#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace rds {

/// Philox4x32-10 block function (Salmon et al., SC'11).
/// Pure: the output block is a function of (counter, key) only.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Tags separating independent substreams drawn from one (seed, replicate).
enum class Substream : std::uint32_t {
  kCoefficients = 0,
  kTail = 1,
  kGaf = 2,
  kPowerSeries = 3,
  kIntegral = 4,
  kAuxiliary = 5,
};

/// Counter-based random stream keyed by (seed, replicate, substream).
/// Draw i is a pure function of the key and i; there is no hidden state, so
/// streams may be copied and queried from any thread in any order.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t replicate, Substream substream) noexcept
      : seed_(seed), replicate_(replicate), substream_(substream) {}

  /// Raw 128-bit block for index i.
  Philox4x32::Counter block(std::uint64_t i) const noexcept;

  /// Two independent uniforms on the open interval (0, 1) from block i.
  std::pair<double, double> uniform_pair(std::uint64_t i) const noexcept;

  /// Two independent standard normals (Box-Muller) from block i.
  std::pair<double, double> normal_pair(std::uint64_t i) const noexcept;

  /// Normal number i of the flattened stream (two per block).
  double normal(std::uint64_t i) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t replicate() const noexcept { return replicate_; }
  Substream substream() const noexcept { return substream_; }

 private:
  std::uint64_t seed_;
  std::uint32_t replicate_;
  Substream substream_;
};

/// SplitMix64 finaliser; used for deterministic hashing of geometry.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace rds
