#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qrgg {

/// Deterministic, splittable pseudorandom stream.
///
/// A stream is identified by a 64-bit seed. Child streams are derived from
/// (parent seed, purpose label, index) by SplitMix64 mixing, so sibling
/// streams never share state and results do not depend on the order in which
/// children are consumed. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all conversions to doubles and bounded
/// integers are done here so the stream is bit-identical across toolchains.
class RandomStream {
 public:
  /// Bumped whenever the derivation or conversion rules change.
  static constexpr std::uint64_t kVersion = 1;

  explicit RandomStream(std::uint64_t seed);

  RandomStream child(std::string_view label, std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qrgg
