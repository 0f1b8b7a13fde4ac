#pragma once

// Integer number theory on top of boost::multiprecision::cpp_int.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "errors.hpp"

namespace adeleforge {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(big_abs(a), big_abs(b));
}

inline BigInt big_pow(BigInt base, unsigned exp) {
  BigInt r = 1;
  while (exp) {
    if (exp & 1u) r *= base;
    base *= base;
    exp >>= 1u;
  }
  return r;
}

/// Mathematical modulus: result in [0, m).
inline BigInt big_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::int64_t to_i64(const BigInt& a) { return a.convert_to<std::int64_t>(); }

inline std::int64_t mod_i64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  a = mod_i64(a, m);
  while (e) {
    if (e & 1u) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1u;
  }
  return r;
}

inline BigInt powmod(BigInt a, BigInt e, const BigInt& m) {
  return boost::multiprecision::powm(big_mod(a, m), e, m);
}

inline std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Inverse of a modulo m; throws InvalidArgument when gcd(a, m) != 1.
inline std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = mod_i64(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw InvalidArgument("inverse does not exist modulo " + std::to_string(m));
  return mod_i64(s0, m);
}

inline BigInt inv_mod(const BigInt& a, const BigInt& m) {
  BigInt r0 = m, r1 = big_mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw InvalidArgument("inverse does not exist");
  return big_mod(s0, m);
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::int64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::int64_t x = powmod(a, static_cast<std::uint64_t>(d), n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(BigInt n, std::int64_t p) {
  if (n == 0) throw ZeroInput();
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// Factorization of |n| by trial division (desk-scale inputs).
inline std::map<BigInt, int> factor(BigInt n) {
  if (n == 0) throw ZeroInput();
  n = big_abs(n);
  std::map<BigInt, int> out;
  for (std::int64_t p : {2, 3, 5}) {
    while (n % p == 0) {
      n /= p;
      ++out[BigInt(p)];
    }
  }
  static constexpr int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  BigInt d = 7;
  int i = 0;
  while (d * d <= n) {
    while (n % d == 0) {
      n /= d;
      ++out[d];
    }
    d += wheel[i];
    i = (i + 1) % 8;
  }
  if (n > 1) ++out[n];
  return out;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  n = n < 0 ? -n : n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Least primitive root modulo an odd prime power (or 2, 4).
inline std::int64_t primitive_root(std::int64_t m) {
  if (m == 2) return 1;
  if (m == 4) return 3;
  auto ps = prime_divisors(m);
  if (ps.size() != 1 || ps[0] == 2) throw InvalidArgument("no primitive root modulo " + std::to_string(m));
  std::int64_t p = ps[0];
  std::int64_t phi = m / p * (p - 1);
  auto qs = prime_divisors(phi);
  for (std::int64_t g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (std::int64_t q : qs) {
      if (powmod(g, static_cast<std::uint64_t>(phi / q), m) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InvalidArgument("primitive root search failed");
}

/// Solution of x = a1 mod m1, x = a2 mod m2 for coprime m1, m2.
inline std::int64_t crt(std::int64_t a1, std::int64_t m1, std::int64_t a2, std::int64_t m2) {
  std::int64_t t = mulmod(mod_i64(a2 - a1, m2), inv_mod(m1 % m2, m2), m2);
  return mod_i64(a1 + m1 * t, m1 * m2);
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (std::int64_t p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

}  // namespace adeleforge
