#pragma once

#include <cstdint>
#include <string>

#include "gausskey/error.hpp"
#include "gausskey/rng.hpp"

namespace gausskey {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Smallest prime >= max(n, 2).
inline std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

/// Carter-Wegman family h(x) = ((a x + b) mod p) mod range over a prime
/// p >= domain, a in [1, p), b in [0, p). Two distinct inputs collide for at
/// most a 1/range fraction of the p(p-1) members.
///
/// Members sharing (p, a, b) refine each other: if range' is a multiple of
/// range, h' determines h.
class AffineHash {
 public:
  AffineHash(std::uint64_t domain, std::uint64_t range, std::uint64_t a, std::uint64_t b)
      : prime_(next_prime(domain)), range_(range), a_(a), b_(b) {
    if (range == 0) throw Error(ErrorCode::InvalidArgument, "hash range must be >= 1");
    if (a_ == 0 || a_ >= prime_ || b_ >= prime_) {
      throw Error(ErrorCode::InvalidArgument, "hash coefficients out of range for p=" + std::to_string(prime_));
    }
  }

  /// Member selected by a 64-bit seed (roughly uniform over the family).
  static AffineHash from_seed(std::uint64_t domain, std::uint64_t range, std::uint64_t seed) {
    const std::uint64_t p = next_prime(domain);
    const std::uint64_t a = 1 + rng::mix64(seed) % (p - 1);
    const std::uint64_t b = rng::mix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL) % p;
    return AffineHash(domain, range, a, b);
  }

  /// Seeded member for binning; the identity member when range >= domain, so
  /// an alphabet that covers the domain bins injectively.
  static AffineHash binning(std::uint64_t domain, std::uint64_t range, std::uint64_t seed) {
    if (range >= domain) return AffineHash(domain, range, 1, 0);
    return from_seed(domain, range, seed);
  }

  static std::uint64_t family_size(std::uint64_t domain) {
    const std::uint64_t p = next_prime(domain);
    return p * (p - 1);
  }

  /// Member number `index` in [0, family_size(domain)), enumerating every
  /// (a, b) pair exactly once.
  static AffineHash from_index(std::uint64_t domain, std::uint64_t range, std::uint64_t index) {
    const std::uint64_t p = next_prime(domain);
    return AffineHash(domain, range, 1 + index / p, index % p);
  }

  std::uint64_t operator()(std::uint64_t x) const {
    return (detail::mulmod(a_, x % prime_, prime_) + b_) % prime_ % range_;
  }

  AffineHash with_range(std::uint64_t range) const {
    AffineHash h = *this;
    if (range == 0) throw Error(ErrorCode::InvalidArgument, "hash range must be >= 1");
    h.range_ = range;
    return h;
  }

  std::uint64_t prime() const noexcept { return prime_; }
  std::uint64_t range() const noexcept { return range_; }
  std::uint64_t a() const noexcept { return a_; }
  std::uint64_t b() const noexcept { return b_; }

 private:
  std::uint64_t prime_;
  std::uint64_t range_;
  std::uint64_t a_;
  std::uint64_t b_;
};

}  // namespace gausskey
