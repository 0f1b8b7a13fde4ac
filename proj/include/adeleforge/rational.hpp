#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "bigint.hpp"

namespace adeleforge {

/// Exact rational number kept in lowest terms with a positive denominator.
class BigRational {
 public:
  BigRational() : num_(0), den_(1) {}
  BigRational(long long n) : num_(n), den_(1) {}  // NOLINT(implicit)
  BigRational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT(implicit)
  BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  /// Parses "a", "-a" or "a/b".
  static BigRational parse(std::string_view s) {
    auto trim = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '+')) v.remove_prefix(1);
      while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
      return v;
    };
    s = trim(s);
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    auto to_int = [](std::string_view v) {
      if (v.empty()) throw ParseError("bad rational literal");
      std::size_t i = (v[0] == '-') ? 1 : 0;
      if (i == v.size()) throw ParseError("bad rational literal");
      for (std::size_t j = i; j < v.size(); ++j) {
        if (v[j] < '0' || v[j] > '9') throw ParseError("bad rational literal: " + std::string(v));
      }
      return BigInt(std::string(v));
    };
    if (slash == std::string_view::npos) return BigRational(to_int(s));
    BigInt d = to_int(trim(s.substr(slash + 1)));
    if (d == 0) throw ParseError("zero denominator");
    return BigRational(to_int(trim(s.substr(0, slash))), d);
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }
  bool is_integer() const { return den_ == 1; }

  /// Multiplicative height max(|num|, den).
  BigInt height() const {
    BigInt a = big_abs(num_);
    return a > den_ ? a : den_;
  }

  BigRational inverse() const {
    if (num_ == 0) throw ZeroInput();
    return BigRational(den_, num_);
  }

  /// Residue modulo m; requires gcd(den, m) = 1.
  BigInt residue(const BigInt& m) const { return big_mod(num_ * inv_mod(den_, m), m); }

  std::string str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  BigRational operator-() const { return BigRational(BigInt(-num_), den_, Reduced{}); }

  friend BigRational operator+(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator-(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator*(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.num_ == 0) throw ZeroInput();
    return BigRational(a.num_ * b.den_, a.den_ * b.num_);
  }
  BigRational& operator+=(const BigRational& o) { return *this = *this + o; }
  BigRational& operator-=(const BigRational& o) { return *this = *this - o; }
  BigRational& operator*=(const BigRational& o) { return *this = *this * o; }
  BigRational& operator/=(const BigRational& o) { return *this = *this / o; }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    BigInt l = a.num_ * b.den_, r = b.num_ * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigRational& q) { return os << q.str(); }

  BigRational pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    return BigRational(big_pow(num_, static_cast<unsigned>(e)), big_pow(den_, static_cast<unsigned>(e)),
                       Reduced{});
  }

 private:
  struct Reduced {};
  BigRational(BigInt n, BigInt d, Reduced) : num_(std::move(n)), den_(std::move(d)) {}

  void normalize() {
    if (den_ == 0) throw ZeroInput();
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = big_gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  BigInt num_;
  BigInt den_;
};

}  // namespace adeleforge
