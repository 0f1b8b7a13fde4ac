#pragma once

// P^1 minus a finite set of rational points, its closed immersion into a
// split torus, and transport of adelic data along it.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fq.hpp"
#include "sieve.hpp"
#include "toruslab.hpp"

namespace adeleforge {

/// Point of P^1 over the base; nullopt is infinity.
template <class K>
using P1Point = std::optional<K>;

template <class K>
struct BaseField;

template <>
struct BaseField<BigRational> {
  static BigRational one(const BigRational&) { return BigRational(1); }
  static BigRational parse(const BigRational&, std::string_view s) { return BigRational::parse(s); }
  static std::string var() { return "t"; }
  /// n distinct elements, in a fixed order
  static std::vector<BigRational> samples(const BigRational&, std::size_t n) {
    std::vector<BigRational> out;
    for (std::size_t i = 0; out.size() < n; ++i) out.emplace_back(static_cast<long long>(i) - 3);
    return out;
  }
};

template <>
struct BaseField<RatFunc> {
  static RatFunc one(const RatFunc& s) { return RatFunc::constant(s.field(), 1); }
  static RatFunc parse(const RatFunc& s, std::string_view str) { return RatFunc::parse(s.field(), str); }
  static std::string var() { return "x"; }  // t is taken by the base
  static std::vector<RatFunc> samples(const RatFunc& s, std::size_t n) {
    std::vector<RatFunc> out;
    RatFunc t = RatFunc::t(s.field());
    for (int k = 0; out.size() < n; ++k)
      for (FqElem c = 0; c < static_cast<FqElem>(s.field().q()) && out.size() < n; ++c)
        out.push_back(t.pow(k) + RatFunc::constant(s.field(), c));
    return out;
  }
};

template <class K>
std::string p1_str(const P1Point<K>& a) {
  return a ? a->str() : "inf";
}

template <class K>
class HyperbolicRationalCurve {
 public:
  HyperbolicRationalCurve(std::vector<P1Point<K>> D, K x0) : D_(std::move(D)), x0_(std::move(x0)) {
    if (D_.size() < 2) throw DegenerateDivisor("D needs at least 2 points");
    for (std::size_t i = 0; i < D_.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if (D_[i] == D_[k]) throw DegenerateDivisor("repeated point " + p1_str(D_[i]) + " in D");
    if (!on_curve(x0_)) throw InvalidArgument("basepoint " + x0_.str() + " lies in D");
  }

  const std::vector<P1Point<K>>& D() const { return D_; }
  const K& basepoint() const { return x0_; }
  bool hyperbolic() const { return D_.size() >= 3; }
  bool has_infinity() const {
    return std::any_of(D_.begin(), D_.end(), [](const auto& a) { return !a; });
  }
  bool on_curve(const K& t) const {
    return std::none_of(D_.begin(), D_.end(), [&](const auto& a) { return a && *a == t; });
  }

 private:
  std::vector<P1Point<K>> D_;
  K x0_;
};

/// alpha * (t - root) / (t - pole), the pole factor absent when pole is infinity.
template <class K>
struct CoordinateFunction {
  K alpha;
  K root;
  std::optional<K> pole;

  K operator()(const K& t) const {
    K v = alpha * (t - root);
    if (pole) v = v / (t - *pole);
    return v;
  }
  /// Order of vanishing at a point of P^1.
  int order_at(const P1Point<K>& a) const {
    if (!a) return pole ? 0 : -1;
    return (*a == root ? 1 : 0) - (pole && *a == *pole ? 1 : 0);
  }
  std::string str() const {
    const std::string t = BaseField<K>::var();
    auto lin = [&](const K& a) {
      if (a.is_zero()) return t;
      return "(" + t + "-(" + a.str() + "))";
    };
    std::string s = alpha == BaseField<K>::one(alpha) ? "" : "(" + alpha.str() + ")*";
    s += lin(root);
    if (pole) s += "/" + lin(*pole);
    return s;
  }
};

/// sum_j coeffs[j] * X_j = rhs
template <class K>
struct AffineRelation {
  std::vector<K> coeffs;
  K rhs;
  std::string str() const {
    std::string s;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + coeffs[j].str() + ")*X" + std::to_string(j + 1);
    }
    return s + " = " + rhs.str();
  }
};

template <class K>
class TorusEmbedding {
 public:
  TorusEmbedding(HyperbolicRationalCurve<K> curve, std::size_t a0, std::vector<std::size_t> order,
                 std::vector<CoordinateFunction<K>> f, std::vector<AffineRelation<K>> rel)
      : curve_(std::move(curve)), a0_(a0), order_(std::move(order)), f_(std::move(f)), rel_(std::move(rel)) {}

  const HyperbolicRationalCurve<K>& curve() const { return curve_; }
  int rank() const { return static_cast<int>(f_.size()); }
  std::size_t distinguished() const { return a0_; }
  /// index into D of the zero of f_i
  const std::vector<std::size_t>& order() const { return order_; }
  const std::vector<CoordinateFunction<K>>& functions() const { return f_; }
  const std::vector<AffineRelation<K>>& relations() const { return rel_; }

  std::vector<K> apply(const K& t) const {
    if (!curve_.on_curve(t)) throw InvalidArgument(t.str() + " lies in D");
    std::vector<K> out;
    for (const auto& fi : f_) out.push_back(fi(t));
    return out;
  }

  /// Rows f_i, columns the points of D in listed order.
  std::vector<std::vector<int>> divisor_matrix() const {
    std::vector<std::vector<int>> m;
    for (const auto& fi : f_) {
      std::vector<int> row;
      for (const auto& a : curve_.D()) row.push_back(fi.order_at(a));
      m.push_back(row);
    }
    return m;
  }

  int divisor_rank() const {
    auto m = divisor_matrix();
    std::vector<std::vector<BigRational>> a;
    for (auto& r : m) {
      std::vector<BigRational> row;
      for (int x : r) row.emplace_back(x);
      a.push_back(row);
    }
    int rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(a.size()); ++c) {
      std::size_t piv = static_cast<std::size_t>(rank);
      while (piv < a.size() && a[piv][c].is_zero()) ++piv;
      if (piv == a.size()) continue;
      std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i == static_cast<std::size_t>(rank) || a[i][c].is_zero()) continue;
        BigRational q = a[i][c] / a[static_cast<std::size_t>(rank)][c];
        for (std::size_t k = 0; k < cols; ++k) a[i][k] -= q * a[static_cast<std::size_t>(rank)][k];
      }
      ++rank;
    }
    return rank;
  }

  /// Each relation, evaluated on (f_1(t), ..., f_d(t)), is
  /// (linear polynomial in t) / (t - a_0); vanishing at three points of the
  /// curve therefore makes it the zero function.
  bool relations_vanish_identically() const {
    std::vector<K> pts;
    for (const auto& s : BaseField<K>::samples(curve_.basepoint(), 3 + curve_.D().size()))
      if (curve_.on_curve(s) && pts.size() < 3) pts.push_back(s);
    for (const auto& r : rel_) {
      for (const auto& t : pts) {
        auto x = apply(t);
        K s = -r.rhs;
        for (std::size_t j = 0; j < x.size(); ++j) s = s + r.coeffs[j] * x[j];
        if (!s.is_zero()) return false;
      }
    }
    return true;
  }

 private:
  HyperbolicRationalCurve<K> curve_;
  std::size_t a0_;
  std::vector<std::size_t> order_;
  std::vector<CoordinateFunction<K>> f_;
  std::vector<AffineRelation<K>> rel_;
};

/// f_i has divisor (a_i) - (a_0) and f_i(x0) = 1; a_0 is infinity when
/// present in D, else the first listed point.
template <class K>
TorusEmbedding<K> embed(const HyperbolicRationalCurve<K>& X) {
  const auto& D = X.D();
  const K& x0 = X.basepoint();
  std::size_t a0 = 0;
  for (std::size_t i = 0; i < D.size(); ++i)
    if (!D[i]) a0 = i;
  std::vector<std::size_t> order;
  std::vector<CoordinateFunction<K>> f;
  for (std::size_t i = 0; i < D.size(); ++i) {
    if (i == a0) continue;
    order.push_back(i);
    const K& ai = *D[i];
    if (!D[a0])
      f.push_back({(x0 - ai).inverse(), ai, std::nullopt});
    else
      f.push_back({(x0 - *D[a0]) / (x0 - ai), ai, *D[a0]});
  }
  // eliminate t between f_1 and each f_i
  std::vector<AffineRelation<K>> rel;
  const std::size_t d = f.size();
  K zero = x0 - x0;
  for (std::size_t i = 1; i < d; ++i) {
    std::vector<K> c(d, zero);
    const K &a1 = f[0].root, &ai = f[i].root;
    if (!D[a0]) {
      c[0] = f[0].alpha.inverse();
      c[i] = -f[i].alpha.inverse();
      rel.push_back({c, ai - a1});
    } else {
      const K& p = *D[a0];
      c[0] = (p - ai) / f[0].alpha;
      c[i] = -((p - a1) / f[i].alpha);
      rel.push_back({c, a1 - ai});
    }
  }
  return TorusEmbedding<K>(X, a0, std::move(order), std::move(f), std::move(rel));
}

// ---- local transport over Q ----

namespace detail {

/// t - a at the place v, with certified valuation (p-adic) or sign (real).
inline LocalValue local_shift(const LocalValue& t, const BigRational& a, const Place& v, const std::string& where) {
  if (t.is_exact()) {
    BigRational s = t.exact() - a;
    if (s.is_zero()) throw InvalidArgument(where + ": point lies in D");
    return s;
  }
  if (t.is_padic()) return padic_add_exact(t.padic(), -a, where);
  const RealDatum& r = t.real();
  if (r.interval) {
    BigRational lo = r.interval->first - a, hi = r.interval->second - a;
    if (lo.sign() > 0) return RealDatum(Sign::Positive, lo, hi);
    if (hi.sign() < 0) return RealDatum(Sign::Negative, lo, hi);
    throw InsufficientPrecision(where);
  }
  if (a.is_zero()) return r;
  (void)v;
  throw InsufficientPrecision(where);
}

inline LocalValue local_scale(const LocalValue& x, const BigRational& c, const Place& v) {
  if (x.is_real() && x.real().interval) {
    BigRational lo = x.real().interval->first * c, hi = x.real().interval->second * c;
    if (lo > hi) std::swap(lo, hi);
    return RealDatum(lo.sign() > 0 ? Sign::Positive : Sign::Negative, lo, hi);
  }
  return local_mul(x, LocalValue(c), v);
}

inline LocalValue local_quot(const LocalValue& a, const LocalValue& b, const Place& v) {
  if (a.is_real() && b.is_real() && a.real().interval && b.real().interval) {
    // both intervals avoid 0; the quotient interval is spanned by the corner ratios
    const auto& [al, ah] = *a.real().interval;
    const auto& [bl, bh] = *b.real().interval;
    std::vector<BigRational> c{al / bl, al / bh, ah / bl, ah / bh};
    auto [mn, mx] = std::minmax_element(c.begin(), c.end());
    return RealDatum(mn->sign() > 0 ? Sign::Positive : Sign::Negative, *mn, *mx);
  }
  return local_mul(a, local_inv(b), v);
}

}  // namespace detail

/// (f_1(t_v), ..., f_d(t_v)).
inline std::vector<LocalValue> map_point(const TorusEmbedding<BigRational>& emb, const Place& v, const LocalValue& tv) {
  std::vector<LocalValue> out;
  for (std::size_t i = 0; i < emb.functions().size(); ++i) {
    const auto& fi = emb.functions()[i];
    std::string where = "place " + v.str() + " coordinate " + std::to_string(i + 1);
    LocalValue num = detail::local_shift(tv, fi.root, v, where);
    LocalValue val = fi.pole ? detail::local_quot(num, detail::local_shift(tv, *fi.pole, v, where), v) : num;
    out.push_back(detail::local_scale(val, fi.alpha, v));
  }
  return out;
}

/// Local data of an adelic point of X: explicit components, plus either
/// units elsewhere or a constant rational t.
struct CurveData {
  std::map<Place, LocalValue> local;
  std::optional<BigRational> constant;
  std::set<Place> excluded;
};

inline AdelicPoint to_torus(const TorusEmbedding<BigRational>& emb, const CurveData& data) {
  AdelicPoint x(emb.rank(), data.excluded);
  if (data.constant) x.set_constant_default(emb.apply(*data.constant));
  for (const auto& [v, tv] : data.local) x.set_component(v, map_point(emb, v, tv));
  return x;
}

struct CurveSurvival {
  SurvivalVerdict verdict;
  std::string pulled_back;  // sum_j chi_j o f_j when obstructed
};

inline std::string pulled_back_class(const TorusEmbedding<BigRational>& emb, const CharacterTuple& xi) {
  std::string s;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (xi[j].is_trivial()) continue;
    if (!s.empty()) s += " + ";
    s += xi[j].str() + " o " + emb.functions()[j].str();
  }
  return s.empty() ? "0" : s;
}

inline CurveSurvival curve_survivors(const TorusEmbedding<BigRational>& emb, const std::vector<Place>& S, std::int64_t M,
                                     const CurveData& data) {
  CurveSurvival r{survives(to_torus(emb, data), S, M), ""};
  if (auto* ob = std::get_if<Obstructed>(&r.verdict)) r.pulled_back = pulled_back_class(emb, ob->tuple);
  return r;
}

// ---- quasi-finite transfer ----

/// c * prod (t - a)^e, a unit on X when every a lies in D (and the
/// exponents sum to 0 if infinity is not removed).
struct UnitFunction {
  BigRational c{1};
  std::vector<std::pair<BigRational, int>> factors;

  static UnitFunction parse(std::string_view s) {
    std::string in;
    for (char ch : s)
      if (ch != ' ') in += ch;
    UnitFunction u;
    std::size_t i = 0;
    auto exponent = [&]() {
      if (i < in.size() && in[i] == '^') {
        ++i;
        std::size_t j = i;
        if (j < in.size() && (in[j] == '-' || in[j] == '+')) ++j;
        while (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j]))) ++j;
        if (j == i) throw ParseError("bad exponent in " + in);
        int e = std::stoi(in.substr(i, j - i));
        i = j;
        return e;
      }
      return 1;
    };
    while (i < in.size()) {
      if (in[i] == 't') {
        ++i;
        u.factors.emplace_back(BigRational(0), exponent());
      } else if (in[i] == '(') {
        auto close = in.find(')', i);
        if (close == std::string::npos || in[i + 1] != 't') throw ParseError("expected (t-a) in " + in);
        std::string body = in.substr(i + 2, close - i - 2);
        i = close + 1;
        if (!body.empty() && body[0] == '+') body.erase(0, 1);
        BigRational a = body.empty() ? BigRational(0) : -BigRational::parse(body);
        u.factors.emplace_back(a, exponent());
      } else {
        std::size_t j = i;
        while (j < in.size() && in[j] != '*') ++j;
        u.c *= BigRational::parse(in.substr(i, j - i));
        i = j;
      }
      if (i < in.size()) {
        if (in[i] != '*') throw ParseError("expected '*' in " + in);
        ++i;
      }
    }
    if (u.c.is_zero()) throw ZeroInput();
    // merge equal roots
    std::map<BigRational, int> m;
    for (auto& [a, e] : u.factors) m[a] += e;
    u.factors.clear();
    for (auto& [a, e] : m)
      if (e) u.factors.emplace_back(a, e);
    return u;
  }

  BigRational operator()(const BigRational& t) const {
    BigRational v = c;
    for (const auto& [a, e] : factors) v *= (t - a).pow(e);
    return v;
  }

  LocalValue at(const Place& v, const LocalValue& t) const {
    LocalValue acc(c);
    for (const auto& [a, e] : factors) {
      LocalValue s = detail::local_shift(t, a, v, "place " + v.str());
      if (e < 0) s = local_inv(s);
      for (int k = 0; k < std::abs(e); ++k) acc = local_mul(acc, s, v);
    }
    return acc;
  }

  bool nonconstant() const { return !factors.empty(); }

  std::string str() const {
    std::string s = c == BigRational(1) ? "" : c.str();
    for (const auto& [a, e] : factors) {
      if (!s.empty()) s += "*";
      s += a.is_zero() ? "t" : "(t-(" + a.str() + "))";
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? "1" : s;
  }
};

/// Dense polynomial over Q, low degree first.
using QPoly = std::vector<BigRational>;

namespace detail {

inline QPoly qpoly_mul_linear(const QPoly& p, const BigRational& a) {  // p * (t - a)
  QPoly r(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + 1] += p[i];
    r[i] -= a * p[i];
  }
  return r;
}

inline void qpoly_trim(QPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline BigRational qpoly_eval(const QPoly& p, const BigRational& t) {
  BigRational v;
  for (std::size_t i = p.size(); i-- > 0;) v = v * t + p[i];
  return v;
}

inline QPoly qpoly_divide_linear(const QPoly& p, const BigRational& a) {
  QPoly q(p.size() - 1);
  BigRational carry;
  for (std::size_t i = p.size(); i-- > 1;) {
    carry = p[i] + carry * a;
    q[i - 1] = carry;
  }
  return q;
}

inline std::vector<BigInt> divisors(const BigInt& n) {
  std::vector<BigInt> ds{1};
  for (auto& [p, e] : factor(big_abs(n))) {
    std::vector<BigInt> next;
    for (const auto& d : ds) {
      BigInt pk = 1;
      for (int k = 0; k <= e; ++k) {
        next.push_back(d * pk);
        pk *= p;
      }
    }
    ds = next;
  }
  return ds;
}

}  // namespace detail

/// Rational roots with multiplicity (sorted), and the degree left over.
inline std::pair<std::vector<std::pair<BigRational, int>>, int> rational_roots(QPoly p) {
  detail::qpoly_trim(p);
  if (p.empty()) throw InvalidArgument("zero polynomial");
  std::vector<std::pair<BigRational, int>> out;
  int zero_mult = 0;
  while (p.size() > 1 && p[0].is_zero()) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult) out.emplace_back(BigRational(0), zero_mult);
  // integer coefficients
  BigInt l = 1;
  for (const auto& c : p) l = l / big_gcd(l, c.den()) * c.den();
  std::vector<BigInt> z;
  for (const auto& c : p) z.push_back(c.num() * (l / c.den()));
  std::vector<BigRational> cands;
  if (p.size() > 1)
    for (const auto& a : detail::divisors(z.front()))
      for (const auto& b : detail::divisors(z.back()))
        for (int s : {1, -1}) cands.emplace_back(BigInt(a * s), b);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& r : cands) {
    int m = 0;
    while (p.size() > 1 && detail::qpoly_eval(p, r).is_zero()) {
      p = detail::qpoly_divide_linear(p, r);
      ++m;
    }
    if (m) out.emplace_back(r, m);
  }
  std::sort(out.begin(), out.end());
  return {out, static_cast<int>(p.size()) - 1};
}

struct QuasiFiniteParams {
  std::int64_t M = 50;   // conductor bound for stage (ii)
  std::int64_t H = 100;  // height bound for the rational candidate
  SieveParams sieve;
};

struct QuasiFiniteVerdict {
  enum class Kind { Member, Excluded, Inconclusive };
  Kind kind = Kind::Inconclusive;
  int stage = 0;  // stage that decided
  std::optional<BigRational> point;  // Member
  std::optional<BigRational> y;
  std::vector<BigRational> fiber;
  int discarded_degree = 0;
  std::optional<Obstructed> obstruction;    // stage (ii)
  std::optional<MembershipVerdict> sieve;   // stage (iv)
  std::vector<TorusPoint> torus_fiber;      // j(fiber)
  std::string reason;
};

inline QuasiFiniteVerdict quasi_finite_transfer(const HyperbolicRationalCurve<BigRational>& X, const UnitFunction& f,
                                                const CurveData& data, const std::vector<Place>& S,
                                                const QuasiFiniteParams& params = {}) {
  if (!f.nonconstant()) throw InvalidArgument("f must be nonconstant");
  int degree_sum = 0;
  for (const auto& [a, e] : f.factors) {
    if (X.on_curve(a)) throw InvalidArgument("f is not a unit on X: zero or pole at " + a.str());
    degree_sum += e;
  }
  if (degree_sum != 0 && !X.has_infinity()) throw InvalidArgument("f is not a unit on X: zero or pole at inf");

  QuasiFiniteVerdict r;
  // (i) push forward to G_m
  AdelicPoint pushed(1, data.excluded);
  if (data.constant) pushed.set_constant_default({f(*data.constant)});
  for (const auto& [v, tv] : data.local) pushed.set_component(v, {f.at(v, tv)});

  // (ii) obstruction, then a rational candidate
  r.stage = 2;
  try {
    auto sv = survives(pushed, S, params.M);
    if (auto* ob = std::get_if<Obstructed>(&sv)) {
      r.kind = QuasiFiniteVerdict::Kind::Excluded;
      r.obstruction = *ob;
      return r;
    }
  } catch (const InsufficientPrecision& e) {
    r.reason = std::string("pairing undetermined: ") + e.what();
    return r;
  }
  auto cands = match_rational(pushed, params.H);
  if (cands.empty()) {
    r.reason = "no rational candidate of height <= " + std::to_string(params.H);
    return r;
  }
  if (cands.size() > 1) {
    r.reason = std::to_string(cands.size()) + " rational candidates of height <= " + std::to_string(params.H);
    return r;
  }
  r.y = cands[0][0];

  // (iii) rational fiber of f over y
  r.stage = 3;
  QPoly num{f.c}, den{BigRational(1)};
  for (const auto& [a, e] : f.factors)
    for (int k = 0; k < std::abs(e); ++k) (e > 0 ? num : den) = detail::qpoly_mul_linear(e > 0 ? num : den, a);
  QPoly g(std::max(num.size(), den.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i < num.size()) g[i] += num[i];
    if (i < den.size()) g[i] -= *r.y * den[i];
  }
  auto [roots, rest] = rational_roots(g);
  r.discarded_degree = rest;
  for (const auto& [a, m] : roots)
    if (X.on_curve(a)) r.fiber.push_back(a);
  if (r.fiber.empty()) {
    r.reason = "fiber over " + r.y->str() + " has no rational point on X";
    return r;
  }

  // (iv) sieve in the torus of X
  r.stage = 4;
  auto emb = embed(X);
  for (const auto& a : r.fiber) r.torus_fiber.push_back(emb.apply(a));
  FiniteSubscheme Z(emb.rank(), r.torus_fiber);
  r.sieve = decide_membership(to_torus(emb, data), Z, S, params.sieve);
  switch (r.sieve->kind) {
    case MembershipVerdict::Kind::Member:
      r.kind = QuasiFiniteVerdict::Kind::Member;
      r.point = r.fiber[r.sieve->z_index];
      break;
    case MembershipVerdict::Kind::Excluded:
      r.kind = QuasiFiniteVerdict::Kind::Excluded;
      break;
    case MembershipVerdict::Kind::Inconclusive:
      r.reason = r.sieve->reason;
      break;
  }
  return r;
}

}  // namespace adeleforge
