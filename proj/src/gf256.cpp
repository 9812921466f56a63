#include "qrgg/gf256.hpp"

#include <utility>

#include "qrgg/errors.hpp"

namespace qrgg {

namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    // x *= 0x03, i.e. x ^ (x << 1) reduced by 0x11B
    unsigned doubled = x << 1;
    if (doubled & 0x100) doubled ^= Gf256::kPolynomial;
    x ^= doubled;
  }
  for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

constexpr Tables kTables = make_tables();

// 0x03 must generate the full multiplicative group.
static_assert(kTables.exp[255] == 1 && kTables.log[1] == 0 &&
              kTables.exp[kTables.log[0x53]] == 0x53);

}  // namespace

Gf256 operator*(Gf256 a, Gf256 b) {
  if (a.is_zero() || b.is_zero()) return Gf256{};
  return Gf256(kTables.exp[kTables.log[a.value()] + kTables.log[b.value()]]);
}

Gf256 Gf256::inverse() const {
  if (is_zero()) {
    throw Error(ErrorCode::kInvalidParameter, "zero has no inverse in GF(256)");
  }
  return Gf256(kTables.exp[255 - kTables.log[value_]]);
}

Gf256 operator/(Gf256 a, Gf256 b) { return a * b.inverse(); }

Gf256 gf_mul(Gf256 a, Gf256 b) { return a * b; }

Gf256 gf_mul_slow(Gf256 a, Gf256 b) {
  unsigned x = a.value();
  unsigned y = b.value();
  unsigned product = 0;
  while (y != 0) {
    if (y & 1U) product ^= x;
    x <<= 1;
    if (x & 0x100U) x ^= Gf256::kPolynomial;
    y >>= 1;
  }
  return Gf256(static_cast<std::uint8_t>(product));
}

std::size_t gf_rank(GfMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const Gf256 scale = rows[rank][c].inverse();
    for (auto& v : rows[rank]) v *= scale;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      const Gf256 factor = rows[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        rows[r][j] += factor * rows[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

bool gf_solve(GfMatrix a, std::vector<Gf256> b, std::vector<Gf256>& x) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c].is_zero()) ++pivot;
    if (pivot == n) return false;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    const Gf256 scale = a[c][c].inverse();
    for (auto& v : a[c]) v *= scale;
    b[c] *= scale;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Gf256 factor = a[r][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] += factor * a[c][j];
      b[r] += factor * b[c];
    }
  }
  x = std::move(b);
  return true;
}

}  // namespace qrgg
