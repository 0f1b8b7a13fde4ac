#pragma once

// Places of Q and of F_q(t), and valuations at function-field places.

#include <string>
#include <string_view>

#include "fq.hpp"

namespace adeleforge {

enum class PlaceKind { Real = 0, Prime = 1, FFPrime = 2, FFInfinity = 3 };

class Place {
 public:
  static Place real() { return Place(PlaceKind::Real, 0, {}); }
  static Place prime(std::int64_t p) {
    if (!adeleforge::is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
    return Place(PlaceKind::Prime, p, {});
  }
  static Place ff_prime(const FqPoly& pi) {
    if (!pi.is_monic() || !is_irreducible(pi)) throw InvalidArgument("place polynomial must be monic irreducible: " + pi.str());
    return Place(PlaceKind::FFPrime, 0, pi);
  }
  static Place ff_infinity() { return Place(PlaceKind::FFInfinity, 0, {}); }

  /// "inf" or a rational prime.
  static Place parse(std::string_view s) {
    if (s == "inf" || s == "oo" || s == "infinity") return real();
    for (char c : s)
      if (c < '0' || c > '9') throw ParseError("bad place: " + std::string(s));
    if (s.empty()) throw ParseError("empty place");
    return prime(std::stoll(std::string(s)));
  }
  /// "inf" or a monic irreducible polynomial in t.
  static Place parse_ff(const FqField& f, std::string_view s) {
    if (s == "inf" || s == "oo" || s == "infinity") return ff_infinity();
    return ff_prime(FqPoly::parse(f, s));
  }

  PlaceKind kind() const { return kind_; }
  bool is_real() const { return kind_ == PlaceKind::Real; }
  bool is_prime() const { return kind_ == PlaceKind::Prime; }
  bool is_ff() const { return kind_ == PlaceKind::FFPrime || kind_ == PlaceKind::FFInfinity; }
  bool is_ff_infinity() const { return kind_ == PlaceKind::FFInfinity; }
  std::int64_t p() const { return p_; }
  const FqPoly& pi() const { return pi_; }
  /// Degree of the residue field over F_q (function-field places).
  int degree() const { return kind_ == PlaceKind::FFPrime ? pi_.degree() : 1; }

  std::string str() const {
    switch (kind_) {
      case PlaceKind::Real:
      case PlaceKind::FFInfinity:
        return "inf";
      case PlaceKind::Prime:
        return std::to_string(p_);
      case PlaceKind::FFPrime:
        return pi_.str();
    }
    return "?";
  }

  friend bool operator==(const Place& a, const Place& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.pi_ == b.pi_;
  }
  friend bool operator<(const Place& a, const Place& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    if (a.kind_ == PlaceKind::Prime) return a.p_ < b.p_;
    if (a.kind_ == PlaceKind::FFPrime) return a.pi_ < b.pi_;
    return false;
  }

 private:
  Place(PlaceKind k, std::int64_t p, FqPoly pi) : kind_(k), p_(p), pi_(std::move(pi)) {}
  PlaceKind kind_;
  std::int64_t p_;
  FqPoly pi_;
};

/// Valuation and leading unit residue of a function-field element at a place.
/// The residue lives in F_q[t]/(pi), or in F_q at infinity (uniformizer 1/t).
struct FFValUnit {
  long long valuation;
  FqPoly residue;
};

inline long long ff_valuation(const FqPoly& g, const FqPoly& pi) {
  if (g.is_zero()) throw ZeroInput();
  long long v = 0;
  FqPoly r = g;
  while (true) {
    auto [qq, rr] = divmod(r, pi);
    if (!rr.is_zero()) break;
    r = qq;
    ++v;
  }
  return v;
}

inline FFValUnit ff_val_unit(const RatFunc& x, const Place& P) {
  if (x.is_zero()) throw ZeroInput();
  const FqField& f = x.field();
  if (P.is_ff_infinity()) {
    long long v = x.den().degree() - x.num().degree();
    return {v, FqPoly::constant(f, f.div(x.num().lead(), x.den().lead()))};
  }
  if (P.kind() != PlaceKind::FFPrime) throw InvalidArgument("not a function-field place: " + P.str());
  const FqPoly& pi = P.pi();
  FqPoly n = x.num(), d = x.den();
  long long v = 0;
  while (true) {
    auto [qq, rr] = divmod(n, pi);
    if (!rr.is_zero()) break;
    n = qq;
    ++v;
  }
  while (true) {
    auto [qq, rr] = divmod(d, pi);
    if (!rr.is_zero()) break;
    d = qq;
    --v;
  }
  ResidueField k(pi);
  return {v, k.mul(k.reduce(n), k.inv(d))};
}

}  // namespace adeleforge
