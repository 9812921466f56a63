#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qrgg {

/// Element of GF(2^8), polynomial basis, reduction polynomial
/// x^8 + x^4 + x^3 + x + 1 (0x11B). Multiplication is table driven via
/// log/antilog tables over the generator 0x03.
class Gf256 {
 public:
  static constexpr std::uint16_t kPolynomial = 0x11B;
  static constexpr std::uint8_t kGenerator = 0x03;

  constexpr Gf256() = default;
  constexpr explicit Gf256(std::uint8_t value) : value_(value) {}

  constexpr std::uint8_t value() const noexcept { return value_; }
  constexpr bool is_zero() const noexcept { return value_ == 0; }

  friend constexpr Gf256 operator+(Gf256 a, Gf256 b) {
    return Gf256(static_cast<std::uint8_t>(a.value_ ^ b.value_));
  }
  friend constexpr Gf256 operator-(Gf256 a, Gf256 b) { return a + b; }
  friend Gf256 operator*(Gf256 a, Gf256 b);
  friend Gf256 operator/(Gf256 a, Gf256 b);
  Gf256& operator+=(Gf256 b) { return *this = *this + b; }
  Gf256& operator*=(Gf256 b) { return *this = *this * b; }

  /// Throws Error(kInvalidParameter) for zero.
  Gf256 inverse() const;

  friend constexpr bool operator==(Gf256, Gf256) = default;

 private:
  std::uint8_t value_ = 0;
};

Gf256 gf_mul(Gf256 a, Gf256 b);

/// Shift-and-add multiply with no tables; kept as an independent check on the
/// table route.
Gf256 gf_mul_slow(Gf256 a, Gf256 b);

using GfMatrix = std::vector<std::vector<Gf256>>;

/// Rank by Gaussian elimination over GF(2^8). Rows may be ragged only if all
/// have the same length.
std::size_t gf_rank(GfMatrix rows);

/// Solves A x = b for square full-rank A; returns false if A is singular.
bool gf_solve(GfMatrix a, std::vector<Gf256> b, std::vector<Gf256>& x);

}  // namespace qrgg
