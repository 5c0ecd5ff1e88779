#pragma once
// ============================================================================
// Common scalar types for exact integer work.
//
// All hot-path arithmetic on form coefficients lives in signed 128-bit
// integers with overflow checking.  For the configured discriminant bound
// 10^8 every intermediate of every formula in this library fits far inside
// 127 bits (the worst monomials are degree ~6 in coefficients of size
// ~10^4, i.e. under 2^95), so a checked-overflow throw always indicates a
// caller bug rather than a legitimate big number.  Exact rational arithmetic
// (Fourier module, Euler-factor series) uses GMP's mpq_class; those paths
// are cold.
// ============================================================================

#include <cstdint>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

namespace cubic {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Exact rational; GMP-backed, arbitrary precision.
using Rat = mpq_class;

struct overflow_error : std::runtime_error {
  explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

inline i128 checked_add(i128 x, i128 y) {
  i128 r;
  if (__builtin_add_overflow(x, y, &r)) throw overflow_error("int128 add overflow");
  return r;
}

inline i128 checked_sub(i128 x, i128 y) {
  i128 r;
  if (__builtin_sub_overflow(x, y, &r)) throw overflow_error("int128 sub overflow");
  return r;
}

inline i128 checked_mul(i128 x, i128 y) {
  i128 r;
  if (__builtin_mul_overflow(x, y, &r)) throw overflow_error("int128 mul overflow");
  return r;
}

// Narrow back to 64 bits, throwing if the value does not fit.
inline i64 checked_narrow(i128 x) {
  if (x > i128(INT64_MAX) || x < i128(INT64_MIN))
    throw overflow_error("int128 value does not fit in int64");
  return static_cast<i64>(x);
}

inline std::string to_string_i128(i128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  // Peel digits from |x|; negate digit-wise to avoid overflow at INT128_MIN.
  std::string s;
  while (x != 0) {
    int d = static_cast<int>(x % 10);
    if (d < 0) d = -d;
    s.push_back(static_cast<char>('0' + d));
    x /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

inline Rat rat_of_i128(i128 x) {
  bool neg = x < 0;
  // Build via two 64-bit halves: x = hi*2^64 + lo.
  unsigned __int128 ux = neg ? -(unsigned __int128)x : (unsigned __int128)x;
  mpz_class hi(static_cast<unsigned long>(ux >> 64));
  mpz_class lo(static_cast<unsigned long>(ux & 0xFFFFFFFFFFFFFFFFULL));
  mpz_class z = hi * mpz_class("18446744073709551616") + lo;
  if (neg) z = -z;
  return Rat(z);
}

// Floor/ceil of integer division (C++ truncates toward zero).
inline i64 floor_div(i64 n, i64 d) {
  i64 q = n / d, r = n % d;
  return (r != 0 && ((r < 0) != (d < 0))) ? q - 1 : q;
}
inline i64 ceil_div(i64 n, i64 d) { return -floor_div(-n, d); }

inline i64 gcd_i64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i64 t = a % b; a = b; b = t; }
  return a;
}

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline u64 pow_u64(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

// Deterministic Miller-Rabin over the full 64-bit range (the 12-base set
// {2,...,37} is a proven certificate below 3.3 * 10^24).
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  const auto mulmod = [n](u64 a, u64 b) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n);
  };
  const auto powmod = [&](u64 a, u64 e) {
    u64 r = 1;
    while (e > 0) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  };
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline bool is_prime_i64(i64 n) { return n >= 2 && is_prime_u64(static_cast<u64>(n)); }

// SplitMix64: deterministic pseudo-random stream for property tests.
struct SplitMix64 {
  u64 state;
  explicit SplitMix64(u64 seed) : state(seed) {}
  u64 next() {
    u64 z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in [lo, hi] inclusive.
  i64 uniform(i64 lo, i64 hi) {
    u64 span = static_cast<u64>(hi - lo) + 1;
    return lo + static_cast<i64>(next() % span);
  }
};

}  // namespace cubic
