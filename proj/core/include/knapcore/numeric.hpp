#ifndef KNAPCORE_NUMERIC_HPP
#define KNAPCORE_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace knap {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Exact rational scalar. Used for epsilons, grains and final solution
// values; never inside hot value/coordinate loops, which stay on i64/i128.
using Rat = boost::rational<i64>;

// Coordinate/value width limit. Inputs whose sums exceed this are rejected
// so that every slope cross-product fits in a signed 128-bit intermediate.
inline constexpr i64 kMaxMagnitude = i64{1} << 62;

class WidthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_width(i64 v, const char* what) {
  if (v > kMaxMagnitude || v < -kMaxMagnitude) {
    throw WidthError(std::string("value width exceeds 2^62: ") + what);
  }
}

inline i64 checked_i64(i128 v, const char* what) {
  if (v > i128(kMaxMagnitude) || v < -i128(kMaxMagnitude)) {
    throw WidthError(std::string("intermediate exceeds 2^62: ") + what);
  }
  return static_cast<i64>(v);
}

inline i64 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<i64>(q);
}

inline i64 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return static_cast<i64>(q);
}

// Largest integer s with s*s <= v.
inline i64 isqrt(i64 v) {
  if (v < 0) throw std::invalid_argument("isqrt of negative");
  if (v < 2) return v;
  i64 s = static_cast<i64>(std::sqrt(static_cast<double>(v)));
  while (s > 0 && i128(s) * s > v) --s;
  while (i128(s + 1) * (s + 1) <= v) ++s;
  return s;
}

// Smallest k with 2^k >= v (v >= 1).
inline int ilog2_ceil(i64 v) {
  if (v <= 0) throw std::invalid_argument("ilog2_ceil of non-positive");
  int k = 0;
  i64 p = 1;
  while (p < v) {
    p <<= 1;
    ++k;
  }
  return k;
}

// Parses "0.05", "1/20" or "3" into an exact rational.
Rat parse_rational(std::string_view text);

inline bool is_unit_fraction(const Rat& r) { return r.numerator() == 1; }

// Largest unit fraction 1/g <= r (r in (0,1]).
inline Rat floor_to_unit_fraction(const Rat& r) {
  if (r <= 0 || r > 1) throw std::invalid_argument("unit fraction domain");
  i64 g = ceil_div(r.denominator(), r.numerator());
  return Rat(1, g);
}

// gcd of two positive rationals: the coarsest grain both are multiples of.
Rat rat_gcd(const Rat& a, const Rat& b);

// a / b when the quotient is a positive integer; throws otherwise.
i64 exact_ratio(const Rat& a, const Rat& b);

// Deterministic 64-bit generator (splitmix64 core). std::mt19937_64 with
// std distributions is implementation-defined across standard libraries;
// all sampling in this project goes through this so suites replay
// bit-for-bit anywhere.
class Rng {
 public:
  explicit Rng(u64 seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  u64 next_u64() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi] (inclusive). Modulo bias is irrelevant for test
  // instance generation and keeps the mapping platform-stable.
  i64 uniform(i64 lo, i64 hi) {
    if (lo > hi) throw std::invalid_argument("uniform: lo > hi");
    u64 span = static_cast<u64>(hi - lo) + 1;
    return lo + static_cast<i64>(next_u64() % span);
  }

  bool coin() { return (next_u64() & 1) != 0; }

 private:
  u64 state_;
};

}  // namespace knap

#endif  // KNAPCORE_NUMERIC_HPP
