#include "qrgg/random_stream.hpp"

#include "qrgg/errors.hpp"

namespace qrgg {

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid_parameter";
    case ErrorCode::kUnsupportedKernel: return "unsupported_kernel";
    case ErrorCode::kUnknownNode: return "unknown_node";
    case ErrorCode::kSizeGuard: return "size_guard";
    case ErrorCode::kRateExceedsCapacity: return "rate_exceeds_capacity";
    case ErrorCode::kMalformedInput: return "malformed_input";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed ^ (kVersion << 56))) {}

RandomStream RandomStream::child(std::string_view label,
                                 std::uint64_t index) const {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ fnv1a(label));
  h = splitmix64(h ^ index);
  return RandomStream(h);
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kInvalidParameter, "uniform_below: bound must be > 0");
  }
  // Rejection keeps the result exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace qrgg
