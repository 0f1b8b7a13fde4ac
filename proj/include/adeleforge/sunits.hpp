#pragma once

// S-units of Q and F_q(t): bounded enumeration, the unit equation
// a*u + b*w = 1, and S-units modulo N-th powers.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "place.hpp"
#include "rational.hpp"

namespace adeleforge {

/// Sorted, deduplicated finite primes of S (the real place is implicit).
inline std::vector<std::int64_t> finite_primes(const std::vector<Place>& S) {
  std::set<std::int64_t> ps;
  for (const auto& v : S)
    if (v.is_prime()) ps.insert(v.p());
  return {ps.begin(), ps.end()};
}

/// Exponent vector of q over S, or nullopt when q is not an S-unit.
inline std::optional<std::vector<long long>> sunit_exponents(const BigRational& q, const std::vector<std::int64_t>& S) {
  if (q.is_zero()) return std::nullopt;
  BigInt n = big_abs(q.num()), d = q.den();
  std::vector<long long> e(S.size(), 0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    while (n % S[i] == 0) {
      n /= S[i];
      ++e[i];
    }
    while (d % S[i] == 0) {
      d /= S[i];
      --e[i];
    }
  }
  if (n != 1 || d != 1) return std::nullopt;
  return e;
}

/// All +-prod p^e with |e| <= B, in increasing order.
inline std::vector<BigRational> enumerate_sunits(const std::vector<std::int64_t>& S, int B) {
  if (B < 0) throw InvalidArgument("exponent bound must be >= 0");
  std::vector<BigRational> pos{BigRational(1)};
  for (std::int64_t p : S) {
    std::vector<BigRational> next;
    for (const auto& x : pos)
      for (int e = -B; e <= B; ++e) next.push_back(x * BigRational(p).pow(e));
    pos = std::move(next);
  }
  std::vector<BigRational> out;
  for (const auto& x : pos) {
    out.push_back(x);
    out.push_back(-x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class K>
struct UnitEquationResult {
  std::vector<std::pair<K, K>> solutions;
  int bound;
  bool bound_stable;  // same solution count when rerun at bound + 5
};

namespace detail {

inline std::vector<std::pair<BigRational, BigRational>> unit_equation_q(const std::vector<std::int64_t>& S, int B,
                                                                        const BigRational& a, const BigRational& b) {
  std::vector<std::pair<BigRational, BigRational>> out;
  for (const auto& u : enumerate_sunits(S, B)) {
    BigRational w = (BigRational(1) - a * u) / b;
    auto e = sunit_exponents(w, S);
    if (!e) continue;
    bool in_box = true;
    for (long long x : *e) in_box = in_box && (x <= B && x >= -B);
    if (in_box) out.emplace_back(u, w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// S-unit pairs (u, w), exponents bounded by B, with a*u + b*w = 1.
inline UnitEquationResult<BigRational> solve_unit_equation(const std::vector<std::int64_t>& S, int B, const BigRational& a,
                                                           const BigRational& b, bool check_stability = true) {
  if (a.is_zero() || b.is_zero()) throw ZeroInput();
  UnitEquationResult<BigRational> r{detail::unit_equation_q(S, B, a, b), B, false};
  if (check_stability) r.bound_stable = detail::unit_equation_q(S, B + 5, a, b).size() == r.solutions.size();
  return r;
}

/// Z_S^* / (Z_S^*)^N = (Z/gcd(2,N)) x (Z/N)^{|S|}.
class NthPowerQuotient {
 public:
  NthPowerQuotient(std::vector<std::int64_t> S, std::int64_t N) : S_(std::move(S)), N_(N) {
    if (N < 2) throw InvalidArgument("N must be >= 2");
  }
  std::int64_t N() const { return N_; }
  const std::vector<std::int64_t>& primes() const { return S_; }
  bool has_sign() const { return N_ % 2 == 0; }

  /// Invariant factors d_1 | d_2 | ...
  std::vector<std::int64_t> invariant_factors() const {
    std::vector<std::int64_t> f;
    if (has_sign()) f.push_back(2);
    for (std::size_t i = 0; i < S_.size(); ++i) f.push_back(N_);
    return f;
  }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto d : invariant_factors()) o *= d;
    return o;
  }
  /// Coordinates (sign bit if N even, then exponents mod N).
  std::vector<std::int64_t> project(const BigRational& q) const {
    auto e = sunit_exponents(q, S_);
    if (!e) throw InvalidArgument(q.str() + " is not an S-unit");
    std::vector<std::int64_t> out;
    if (has_sign()) out.push_back(q.sign() < 0 ? 1 : 0);
    for (long long x : *e) out.push_back(mod_i64(x, N_));
    return out;
  }
  bool is_nth_power(const BigRational& q) const {
    for (auto c : project(q))
      if (c) return false;
    return true;
  }

 private:
  std::vector<std::int64_t> S_;
  std::int64_t N_;
};

inline NthPowerQuotient mod_nth_powers(const std::vector<std::int64_t>& S, std::int64_t N) { return {S, N}; }

// ---- function fields ----

/// Finite places of S first (sorted), infinity flagged separately.
struct FFSet {
  std::vector<FqPoly> finite;
  bool has_infinity = false;
};

inline FFSet split_ff_set(const std::vector<Place>& S) {
  FFSet r;
  std::set<Place> uniq(S.begin(), S.end());
  for (const auto& v : uniq) {
    if (v.is_ff_infinity())
      r.has_infinity = true;
    else if (v.kind() == PlaceKind::FFPrime)
      r.finite.push_back(v.pi());
    else
      throw InvalidArgument("expected function-field places, got " + v.str());
  }
  return r;
}

/// Exponents of x over the finite places of S, or nullopt if x is not an S-unit.
inline std::optional<std::vector<long long>> ff_sunit_exponents(const RatFunc& x, const std::vector<Place>& S) {
  if (x.is_zero()) return std::nullopt;
  FFSet s = split_ff_set(S);
  std::vector<long long> e(s.finite.size(), 0);
  FqPoly n = x.num(), d = x.den();
  for (std::size_t i = 0; i < s.finite.size(); ++i) {
    const FqPoly& pi = s.finite[i];
    for (FqPoly* g : {&n, &d}) {
      while (g->degree() >= pi.degree()) {
        auto [qq, rr] = divmod(*g, pi);
        if (!rr.is_zero()) break;
        *g = qq;
        e[i] += g == &n ? 1 : -1;
      }
    }
  }
  if (n.degree() != 0 || d.degree() != 0) return std::nullopt;
  if (!s.has_infinity && x.num().degree() != x.den().degree()) return std::nullopt;
  return e;
}

/// All c * prod pi^e with |e| <= B; total degree 0 unless infinity is in S.
inline std::vector<RatFunc> enumerate_ff_sunits(const FqField& f, const std::vector<Place>& S, int B) {
  if (B < 0) throw InvalidArgument("exponent bound must be >= 0");
  FFSet s = split_ff_set(S);
  std::vector<std::pair<RatFunc, long long>> acc{{RatFunc::constant(f, 1), 0}};
  for (const auto& pi : s.finite) {
    std::vector<std::pair<RatFunc, long long>> next;
    RatFunc base(pi);
    for (const auto& [x, deg] : acc)
      for (int e = -B; e <= B; ++e) next.emplace_back(x * base.pow(e), deg + static_cast<long long>(e) * pi.degree());
    acc = std::move(next);
  }
  std::vector<RatFunc> out;
  for (const auto& [x, deg] : acc) {
    if (!s.has_infinity && deg != 0) continue;
    for (FqElem c = 1; c < static_cast<FqElem>(f.q()); ++c) out.push_back(x * RatFunc::constant(f, c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline std::vector<std::pair<RatFunc, RatFunc>> unit_equation_ff(const FqField& f, const std::vector<Place>& S, int B,
                                                                 const RatFunc& a, const RatFunc& b) {
  std::vector<std::pair<RatFunc, RatFunc>> out;
  RatFunc one = RatFunc::constant(f, 1);
  for (const auto& u : enumerate_ff_sunits(f, S, B)) {
    RatFunc w = (one - a * u) / b;
    auto e = ff_sunit_exponents(w, S);
    if (!e) continue;
    bool in_box = true;
    for (long long x : *e) in_box = in_box && (x <= B && x >= -B);
    if (in_box) out.emplace_back(u, w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Function-field unit equation. In characteristic p the full solution set is
/// usually infinite (Frobenius twists), so bound_stable is typically false.
inline UnitEquationResult<RatFunc> solve_ff_unit_equation(const FqField& f, const std::vector<Place>& S, int B,
                                                          const RatFunc& a, const RatFunc& b,
                                                          bool check_stability = true) {
  if (a.is_zero() || b.is_zero()) throw ZeroInput();
  UnitEquationResult<RatFunc> r{detail::unit_equation_ff(f, S, B, a, b), B, false};
  if (check_stability) r.bound_stable = detail::unit_equation_ff(f, S, B + 5, a, b).size() == r.solutions.size();
  return r;
}

}  // namespace adeleforge
