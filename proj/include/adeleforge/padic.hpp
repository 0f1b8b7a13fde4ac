#pragma once

// Finite-precision p-adic numbers and the real sign datum.

#include <optional>
#include <string>
#include <utility>

#include "rational.hpp"

namespace adeleforge {

struct ValUnit {
  long long valuation;
  BigRational unit;
};

/// x = p^valuation * unit with unit a p-adic unit.
inline ValUnit val_unit(const BigRational& x, std::int64_t p) {
  if (x.is_zero()) throw ZeroInput();
  BigInt n = x.num(), d = x.den();
  long long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return {v, BigRational(n, d)};
}

/// The coset p^a * u * (1 + p^k Z_p).
class PAdicApprox {
 public:
  PAdicApprox(std::int64_t p, long long valuation, BigInt unit, int precision)
      : p_(p), val_(valuation), prec_(precision) {
    if (p < 2) throw InvalidArgument("p-adic prime must be >= 2");
    if (precision < 1) throw InvalidArgument("p-adic precision must be >= 1");
    unit_ = big_mod(unit, modulus());
    if (unit_ % p == 0) throw InvalidArgument("p-adic unit residue divisible by p");
  }

  std::int64_t prime() const { return p_; }
  long long valuation() const { return val_; }
  const BigInt& unit() const { return unit_; }
  int precision() const { return prec_; }
  BigInt modulus() const { return big_pow(BigInt(p_), static_cast<unsigned>(prec_)); }

  /// Unit residue modulo p^e, e <= precision.
  BigInt unit_residue(int e) const {
    if (e > prec_) {
      throw PrecisionExceeded("residue mod " + std::to_string(p_) + "^" + std::to_string(e) +
                              " requested from precision " + std::to_string(prec_));
    }
    return unit_ % big_pow(BigInt(p_), static_cast<unsigned>(e));
  }

  /// Rational representative p^a * u of the coset.
  BigRational center() const {
    if (val_ >= 0) return BigRational(unit_ * big_pow(BigInt(p_), static_cast<unsigned>(val_)));
    return BigRational(unit_, big_pow(BigInt(p_), static_cast<unsigned>(-val_)));
  }

  /// True when the rational x lies in this coset.
  bool contains(const BigRational& x) const {
    if (x.is_zero()) return false;
    auto vu = val_unit(x, p_);
    if (vu.valuation != val_) return false;
    return vu.unit.residue(modulus()) == unit_;
  }

  friend bool operator==(const PAdicApprox&, const PAdicApprox&) = default;

 private:
  std::int64_t p_;
  long long val_;
  BigInt unit_;
  int prec_;
};

inline PAdicApprox embed_padic(const BigRational& x, std::int64_t p, int k) {
  auto vu = val_unit(x, p);
  PAdicApprox probe(p, 0, 1, k);
  return PAdicApprox(p, vu.valuation, vu.unit.residue(probe.modulus()), k);
}

inline PAdicApprox padic_mul(const PAdicApprox& a, const PAdicApprox& b) {
  if (a.prime() != b.prime()) throw PrimeMismatch();
  int k = std::min(a.precision(), b.precision());
  BigInt m = big_pow(BigInt(a.prime()), static_cast<unsigned>(k));
  return PAdicApprox(a.prime(), a.valuation() + b.valuation(), a.unit() * b.unit() % m, k);
}

inline PAdicApprox padic_inv(const PAdicApprox& a) {
  return PAdicApprox(a.prime(), -a.valuation(), inv_mod(a.unit(), a.modulus()), a.precision());
}

inline PAdicApprox padic_div(const PAdicApprox& a, const PAdicApprox& b) { return padic_mul(a, padic_inv(b)); }

inline PAdicApprox padic_residue(const PAdicApprox& a, int e) {
  return PAdicApprox(a.prime(), a.valuation(), a.unit_residue(e), e);
}

/// Product with an exact rational; relative precision is unchanged.
inline PAdicApprox padic_scale(const PAdicApprox& a, const BigRational& c) {
  auto vu = val_unit(c, a.prime());
  return PAdicApprox(a.prime(), a.valuation() + vu.valuation, a.unit() * vu.unit.residue(a.modulus()),
                     a.precision());
}

/// a + c for an exact rational c. The absolute precision of a is
/// valuation + precision; the sum's valuation must be certified below it.
inline PAdicApprox padic_add_exact(const PAdicApprox& a, const BigRational& c, const std::string& where) {
  long long abs_prec = a.valuation() + a.precision();
  BigRational s = a.center() + c;
  if (s.is_zero()) throw InsufficientPrecision(where);
  auto vu = val_unit(s, a.prime());
  if (vu.valuation >= abs_prec) throw InsufficientPrecision(where);
  // c itself must be known to the same absolute precision, which it is (exact).
  int k = static_cast<int>(abs_prec - vu.valuation);
  BigInt m = big_pow(BigInt(a.prime()), static_cast<unsigned>(k));
  return PAdicApprox(a.prime(), vu.valuation, vu.unit.residue(m), k);
}

enum class Sign { Negative = -1, Positive = 1 };

/// Real component: a sign with an optional enclosing interval excluding 0.
struct RealDatum {
  Sign sign = Sign::Positive;
  std::optional<std::pair<BigRational, BigRational>> interval;

  RealDatum() = default;
  explicit RealDatum(Sign s) : sign(s) {}
  RealDatum(Sign s, BigRational lo, BigRational hi) : sign(s), interval(std::make_pair(lo, hi)) {
    if (lo > hi) throw InvalidArgument("empty real interval");
    if (lo.sign() * hi.sign() <= 0) throw InvalidArgument("real interval must exclude 0");
    if ((lo.sign() > 0) != (s == Sign::Positive)) throw InvalidArgument("interval contradicts sign");
  }
  static RealDatum of(const BigRational& x) {
    if (x.is_zero()) throw ZeroInput();
    return RealDatum(x.sign() < 0 ? Sign::Negative : Sign::Positive, x, x);
  }
  bool negative() const { return sign == Sign::Negative; }
  friend bool operator==(const RealDatum&, const RealDatum&) = default;
};

}  // namespace adeleforge
