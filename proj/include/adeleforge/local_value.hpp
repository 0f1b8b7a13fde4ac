#pragma once

// A nonzero local component at a place of Q: an exact rational, a p-adic
// coset, or a real sign datum.

#include <variant>

#include "padic.hpp"
#include "place.hpp"

namespace adeleforge {

class LocalValue {
 public:
  using Storage = std::variant<BigRational, PAdicApprox, RealDatum>;

  LocalValue(BigRational x) : v_(std::move(x)) {  // NOLINT(implicit)
    if (std::get<BigRational>(v_).is_zero()) throw ZeroInput();
  }
  LocalValue(long long x) : LocalValue(BigRational(x)) {}  // NOLINT(implicit)
  LocalValue(PAdicApprox a) : v_(std::move(a)) {}          // NOLINT(implicit)
  LocalValue(RealDatum r) : v_(std::move(r)) {}            // NOLINT(implicit)

  bool is_exact() const { return std::holds_alternative<BigRational>(v_); }
  bool is_padic() const { return std::holds_alternative<PAdicApprox>(v_); }
  bool is_real() const { return std::holds_alternative<RealDatum>(v_); }
  const BigRational& exact() const { return std::get<BigRational>(v_); }
  const PAdicApprox& padic() const { return std::get<PAdicApprox>(v_); }
  const RealDatum& real() const { return std::get<RealDatum>(v_); }
  const Storage& storage() const { return v_; }

  long long valuation(std::int64_t p) const {
    if (is_exact()) return val_unit(exact(), p).valuation;
    if (is_padic()) {
      if (padic().prime() != p) throw PrimeMismatch();
      return padic().valuation();
    }
    throw InvalidArgument("real datum has no p-adic valuation");
  }

  /// Unit part modulo p^e; `where` labels the failure.
  BigInt unit_residue(std::int64_t p, int e, const std::string& where) const {
    BigInt m = big_pow(BigInt(p), static_cast<unsigned>(e));
    if (is_exact()) return val_unit(exact(), p).unit.residue(m);
    if (is_padic()) {
      if (padic().prime() != p) throw PrimeMismatch();
      if (padic().precision() < e) throw InsufficientPrecision(where);
      return padic().unit_residue(e);
    }
    throw InvalidArgument("real datum has no p-adic residue");
  }

  bool negative() const {
    if (is_exact()) return exact().sign() < 0;
    if (is_real()) return real().negative();
    throw UnknownSign();
  }

  /// True when this local value is that of the rational q at a place.
  bool matches(const BigRational& q, const Place& v) const {
    if (q.is_zero()) return false;
    if (is_exact()) return exact() == q;
    if (is_padic()) return v.is_prime() && padic().prime() == v.p() && padic().contains(q);
    if (!v.is_real()) return false;
    const RealDatum& r = real();
    if ((q.sign() < 0) != r.negative()) return false;
    if (r.interval) return r.interval->first <= q && q <= r.interval->second;
    return true;
  }

  std::string str() const {
    if (is_exact()) return exact().str();
    if (is_padic()) {
      const auto& a = padic();
      return std::to_string(a.prime()) + "^" + std::to_string(a.valuation()) + "*" + a.unit().str() + " mod " +
             std::to_string(a.prime()) + "^" + std::to_string(a.precision());
    }
    return real().negative() ? "-" : "+";
  }

  friend bool operator==(const LocalValue& a, const LocalValue& b) { return a.v_ == b.v_; }

 private:
  Storage v_;
};

/// Product of local values at the place v.
inline LocalValue local_mul(const LocalValue& a, const LocalValue& b, const Place& v) {
  if (a.is_exact() && b.is_exact()) return a.exact() * b.exact();
  if (v.is_real()) {
    bool neg = a.negative() != b.negative();
    return RealDatum(neg ? Sign::Negative : Sign::Positive);
  }
  if (a.is_padic() && b.is_padic()) return padic_mul(a.padic(), b.padic());
  if (a.is_padic()) return padic_scale(a.padic(), b.exact());
  if (b.is_padic()) return padic_scale(b.padic(), a.exact());
  throw InvalidArgument("cannot multiply local values at " + v.str());
}

inline LocalValue local_inv(const LocalValue& a) {
  if (a.is_exact()) return a.exact().inverse();
  if (a.is_padic()) return padic_inv(a.padic());
  return RealDatum(a.real().sign);
}

}  // namespace adeleforge
