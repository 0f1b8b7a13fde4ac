#include <gtest/gtest.h>

#include <random>

#include "adeleforge/curves.hpp"

using namespace adeleforge;

namespace {

using Q = BigRational;
using QCurve = HyperbolicRationalCurve<Q>;

QCurve three_point() { return QCurve({Q(0), Q(1), std::nullopt}, Q(2)); }

const std::vector<Place> kInf{Place::real()};
const std::vector<Place> kInf2{Place::real(), Place::prime(2)};

// least nontrivial cube root of unity w mod p with 2w != 1, lifted to p^k
BigInt cube_root_of_unity(std::int64_t p, int k) {
  std::int64_t w = 2;
  while (powmod(w, 3, p) != 1 || mod_i64(2 * w - 1, p) == 0) ++w;
  BigInt m = big_pow(BigInt(p), static_cast<unsigned>(k));
  BigInt x = w;
  for (int i = 0; i < k; ++i) {  // Newton on X^2 + X + 1
    BigInt fx = x * x + x + 1, dfx = 2 * x + 1;
    x = big_mod(x - fx * inv_mod(big_mod(dfx, m), m), m);
  }
  return x;
}

}  // namespace

TEST(Embed, Examples) {
  auto e = embed(three_point());
  ASSERT_EQ(e.rank(), 2);
  EXPECT_EQ(e.functions()[0](Q(5)), Q(5, 2));
  EXPECT_EQ(e.functions()[1](Q(5)), Q(4));
  ASSERT_EQ(e.relations().size(), 1u);
  EXPECT_EQ(e.relations()[0].coeffs, (std::vector<Q>{2, -1}));
  EXPECT_EQ(e.relations()[0].rhs, Q(1));

  auto e2 = embed(QCurve({Q(-1), Q(1), std::nullopt}, Q(2)));
  EXPECT_EQ(e2.functions()[0](Q(0)), Q(1, 3));
  EXPECT_EQ(e2.relations()[0].coeffs, (std::vector<Q>{3, -1}));
  EXPECT_EQ(e2.relations()[0].rhs, Q(2));

  auto e3 = embed(QCurve({Q(0), std::nullopt}, Q(1)));
  EXPECT_EQ(e3.rank(), 1);
  EXPECT_TRUE(e3.relations().empty());
  EXPECT_EQ(e3.functions()[0](Q(7)), Q(7));
  EXPECT_FALSE(QCurve({Q(0), std::nullopt}, Q(1)).hyperbolic());
}

TEST(Embed, Errors) {
  EXPECT_THROW(QCurve({Q(0)}, Q(1)), DegenerateDivisor);
  EXPECT_THROW(QCurve({Q(0), Q(0), std::nullopt}, Q(1)), DegenerateDivisor);
  EXPECT_THROW(QCurve({Q(0), std::nullopt}, Q(0)), InvalidArgument);
  EXPECT_THROW(embed(three_point()).apply(Q(1)), InvalidArgument);
}

TEST(Embed, FiniteDistinguishedPoint) {
  auto e = embed(QCurve({Q(0), Q(1), Q(2)}, Q(3)));
  EXPECT_EQ(e.distinguished(), 0u);
  for (const auto& f : e.functions()) EXPECT_EQ(f(Q(3)), Q(1));
  EXPECT_TRUE(e.relations_vanish_identically());
  EXPECT_EQ(e.divisor_matrix(), (std::vector<std::vector<int>>{{-1, 1, 0}, {-1, 0, 1}}));
}

TEST(Embed, RandomDivisorsAreSound) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> u(-20, 20), dd(1, 6);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 3 + static_cast<std::size_t>(it % 3);
    std::vector<P1Point<Q>> D;
    if (it % 2) D.push_back(std::nullopt);
    while (D.size() < n) {
      Q a(u(rng), dd(rng));
      if (std::find(D.begin(), D.end(), P1Point<Q>(a)) == D.end()) D.push_back(a);
    }
    std::shuffle(D.begin(), D.end(), rng);
    Q x0;
    do x0 = Q(u(rng), dd(rng));
    while (std::find(D.begin(), D.end(), P1Point<Q>(x0)) != D.end());
    QCurve X(D, x0);
    auto e = embed(X);
    EXPECT_EQ(e.divisor_rank(), static_cast<int>(n) - 1);
    for (const auto& row : e.divisor_matrix()) {
      int s = 0;
      for (int x : row) s += x;
      EXPECT_EQ(s, 0);
    }
    for (const auto& f : e.functions()) EXPECT_EQ(f(x0), Q(1));
    EXPECT_TRUE(e.relations_vanish_identically());
    // independent points beyond the three used internally
    for (int k = 0; k < 10; ++k) {
      Q t(u(rng) * 7 + 3, dd(rng) + 7);
      if (!X.on_curve(t)) continue;
      auto x = e.apply(t);
      for (const auto& r : e.relations()) {
        Q s = -r.rhs;
        for (std::size_t j = 0; j < x.size(); ++j) s += r.coeffs[j] * x[j];
        EXPECT_TRUE(s.is_zero());
      }
    }
  }
}

TEST(Embed, FunctionFieldBase) {
  const FqField& f = FqField::get(3);
  RatFunc t = RatFunc::t(f);
  HyperbolicRationalCurve<RatFunc> X({RatFunc::constant(f, 0), RatFunc::constant(f, 1), std::nullopt}, t);
  auto e = embed(X);
  EXPECT_EQ(e.rank(), 2);
  for (const auto& fi : e.functions()) EXPECT_EQ(fi(t), RatFunc::constant(f, 1));
  EXPECT_TRUE(e.relations_vanish_identically());
  EXPECT_EQ(e.divisor_rank(), 2);
}

TEST(MapPoint, Examples) {
  auto e = embed(three_point());
  auto r = map_point(e, Place::prime(5), LocalValue(embed_padic(3, 5, 2)));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].padic().contains(Q(3, 2)));
  EXPECT_TRUE(r[1].padic().contains(Q(2)));
  EXPECT_EQ(r[0].padic().precision(), 2);
  EXPECT_EQ(r[0].valuation(5), 0);
  EXPECT_EQ(r[1].valuation(5), 0);

  auto s = map_point(e, Place::prime(7), LocalValue(embed_padic(21, 7, 3)));
  EXPECT_EQ(s[0].valuation(7), 1);
  EXPECT_EQ(s[1].valuation(7), 0);

  try {
    map_point(e, Place::prime(5), LocalValue(PAdicApprox(5, 0, 1, 1)));
    FAIL();
  } catch (const InsufficientPrecision& ex) {
    EXPECT_NE(ex.where.find("coordinate 2"), std::string::npos);
  }
}

TEST(MapPoint, BasepointNormalization) {
  auto e = embed(QCurve({Q(-1), Q(3), Q(5, 2), std::nullopt}, Q(7, 3)));
  auto e2 = embed(QCurve({Q(-1), Q(3), Q(5, 2)}, Q(7, 3)));
  const Q x0(7, 3);
  for (auto* emb : {&e, &e2}) {
    for (const auto& c : map_point(*emb, Place::prime(5), LocalValue(x0))) EXPECT_EQ(c.exact(), Q(1));
    for (std::int64_t p : {2, 5, 11, 13}) {
      // x0 - a must have a certified valuation: k > v_p(x0 - a) - v_p(x0)
      long long need = 1;
      for (const auto& a : emb->curve().D())
        if (a) need = std::max(need, val_unit(x0 - *a, p).valuation - val_unit(x0, p).valuation + 1);
      for (int k : {1, 3, 6}) {
        LocalValue t(embed_padic(x0, p, k));
        if (k < need) {
          EXPECT_THROW(map_point(*emb, Place::prime(p), t), InsufficientPrecision);
          continue;
        }
        for (const auto& c : map_point(*emb, Place::prime(p), t)) {
          EXPECT_EQ(c.valuation(p), 0);
          EXPECT_EQ(c.padic().unit(), 1);
        }
      }
    }
  }
  for (const auto& c : map_point(e, Place::real(), LocalValue(RealDatum(Sign::Positive, Q(7, 3), Q(7, 3))))) {
    EXPECT_TRUE(c.matches(Q(1), Place::real()));
  }
}

TEST(MapPoint, RealPlace) {
  auto e = embed(three_point());
  auto r = map_point(e, Place::real(), LocalValue(RealDatum(Sign::Positive, Q(1, 2), Q(3, 4))));
  EXPECT_FALSE(r[0].negative());
  EXPECT_TRUE(r[1].negative());
  EXPECT_THROW(map_point(e, Place::real(), LocalValue(RealDatum(Sign::Positive))), InsufficientPrecision);
}

TEST(MapPoint, Functoriality) {
  // pairing from exact curve data equals the pairing after p-adic transport
  auto e = embed(QCurve({Q(0), Q(1), Q(-1), std::nullopt}, Q(2)));
  auto chars = enumerate_characters(15);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 30; ++it) {
    Q t(static_cast<long long>(rng() % 40) + 2, static_cast<long long>(rng() % 5) + 1);
    if (!e.curve().on_curve(t)) continue;
    CurveData exact{{}, t, {}};
    CurveData approx{{}, t, {}};
    for (std::int64_t p : {3, 5, 7, 11, 13}) {
      exact.local.emplace(Place::prime(p), LocalValue(t));
      approx.local.emplace(Place::prime(p), LocalValue(embed_padic(t, p, 8)));
    }
    if (it % 3 == 0) {  // move the 7-adic component
      Q d = t + Q(7);
      if (!e.curve().on_curve(d)) continue;
      exact.local.insert_or_assign(Place::prime(7), LocalValue(d));
      approx.local.insert_or_assign(Place::prime(7), LocalValue(embed_padic(d, 7, 8)));
    }
    AdelicPoint a = to_torus(e, exact), b = to_torus(e, approx);
    for (std::size_t i = 0; i < chars.size(); i += 2) {
      CharacterTuple xi{chars[i], chars[(i * 5) % chars.size()], chars[(i * 3) % chars.size()]};
      EXPECT_EQ(bm_pair(a, xi), bm_pair(b, xi));
      if (it % 3) EXPECT_TRUE(bm_pair(a, xi).is_zero());
    }
  }
}

TEST(CurveSurvivors, Examples) {
  auto e = embed(three_point());
  CurveData good{{}, Q(2), {}};
  for (std::int64_t p : primes_up_to(50)) good.local.emplace(Place::prime(p), LocalValue(embed_padic(2, p, 3)));
  EXPECT_TRUE(std::holds_alternative<SurvivesUpTo>(curve_survivors(e, kInf2, 50, good).verdict));

  CurveData dev{{{Place::prime(7), LocalValue(3)}}, Q(2), {}};
  auto r = curve_survivors(e, kInf, 7, dev);
  ASSERT_TRUE(std::holds_alternative<Obstructed>(r.verdict));
  EXPECT_EQ(max_conductor(std::get<Obstructed>(r.verdict).tuple), 7);
  EXPECT_NE(r.pulled_back.find(" o "), std::string::npos);
  // under S = {inf, 2} the first obstructing conductor is 63
  EXPECT_TRUE(std::holds_alternative<SurvivesUpTo>(curve_survivors(e, kInf2, 50, dev).verdict));
  auto r63 = curve_survivors(e, kInf2, 63, dev);
  ASSERT_TRUE(std::holds_alternative<Obstructed>(r63.verdict));
  EXPECT_EQ(max_conductor(std::get<Obstructed>(r63.verdict).tuple), 63);
}

TEST(RationalRoots, Basics) {
  // t^3 - 8
  auto [r, rest] = rational_roots({Q(-8), Q(0), Q(0), Q(1)});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].first, Q(2));
  EXPECT_EQ(rest, 2);
  // (t - 1)^2 (t + 1/2) t
  QPoly p{Q(1)};
  for (Q a : {Q(1), Q(1), Q(-1, 2), Q(0)}) p = detail::qpoly_mul_linear(p, a);
  auto [r2, rest2] = rational_roots(p);
  EXPECT_EQ(rest2, 0);
  EXPECT_EQ(r2, (std::vector<std::pair<Q, int>>{{Q(-1, 2), 1}, {Q(0), 1}, {Q(1), 2}}));
  // random products with a t^2 + 1 factor
  std::mt19937_64 rng(4);
  for (int it = 0; it < 20; ++it) {
    QPoly g{Q(1), Q(0), Q(1)};
    std::vector<Q> roots;
    for (int k = 0; k < 3; ++k) {
      Q a(static_cast<long long>(rng() % 13) - 6, static_cast<long long>(rng() % 4) + 1);
      roots.push_back(a);
      g = detail::qpoly_mul_linear(g, a);
    }
    for (auto& c : g) c *= Q(3, 7);
    auto [rr, rest3] = rational_roots(g);
    EXPECT_EQ(rest3, 2);
    int total = 0;
    for (auto& [a, m] : rr) {
      total += m;
      EXPECT_EQ(static_cast<int>(std::count(roots.begin(), roots.end(), a)), m);
    }
    EXPECT_EQ(total, 3);
  }
}

TEST(UnitFunction, Parse) {
  auto f = UnitFunction::parse("2*t^2*(t-1)^-1");
  EXPECT_EQ(f(Q(3)), Q(9));
  EXPECT_EQ(UnitFunction::parse("t^3")(Q(2)), Q(8));
  EXPECT_EQ(UnitFunction::parse("(t+1)")(Q(2)), Q(3));
  EXPECT_EQ(UnitFunction::parse("t*t")(Q(5)), Q(25));
  EXPECT_THROW(UnitFunction::parse("t^"), ParseError);
  EXPECT_FALSE(UnitFunction::parse("3").nonconstant());
}

TEST(QuasiFinite, MemberScenario) {
  CurveData d{{}, Q(2), {}};
  for (std::int64_t p : {3, 5, 7, 11}) d.local.emplace(Place::prime(p), LocalValue(embed_padic(2, p, 3)));
  auto r = quasi_finite_transfer(three_point(), UnitFunction::parse("t"), d, kInf2);
  ASSERT_EQ(r.kind, QuasiFiniteVerdict::Kind::Member);
  EXPECT_EQ(*r.point, Q(2));
  EXPECT_EQ(r.stage, 4);
}

TEST(QuasiFinite, CharacterObstructedScenario) {
  CurveData d{{{Place::prime(7), LocalValue(embed_padic(3, 7, 3))}}, Q(2), {}};
  QuasiFiniteParams p;
  p.M = 63;
  auto r = quasi_finite_transfer(three_point(), UnitFunction::parse("t"), d, kInf2, p);
  ASSERT_EQ(r.kind, QuasiFiniteVerdict::Kind::Excluded);
  EXPECT_EQ(r.stage, 2);
  EXPECT_EQ(max_conductor(r.obstruction->tuple), 63);
  p.M = 7;
  auto r7 = quasi_finite_transfer(three_point(), UnitFunction::parse("t"), d, kInf, p);
  ASSERT_EQ(r7.kind, QuasiFiniteVerdict::Kind::Excluded);
  EXPECT_EQ(max_conductor(r7.obstruction->tuple), 7);
}

TEST(QuasiFinite, SieveExcludedScenario) {
  // t_v = 2w at v = 1 mod 3: f = t^3 cannot see the twist, the torus can
  CurveData d{{}, Q(2), {}};
  for (std::int64_t v : {7, 13, 19, 31, 37, 43}) {
    BigInt w = cube_root_of_unity(v, 3);
    d.local.emplace(Place::prime(v), LocalValue(PAdicApprox(v, 0, 2 * w, 3)));
  }
  auto r = quasi_finite_transfer(three_point(), UnitFunction::parse("t^3"), d, kInf2);
  ASSERT_EQ(r.kind, QuasiFiniteVerdict::Kind::Excluded) << r.reason;
  EXPECT_EQ(r.stage, 4);
  EXPECT_EQ(*r.y, Q(8));
  EXPECT_EQ(r.fiber, std::vector<Q>{Q(2)});
  EXPECT_EQ(r.discarded_degree, 2);
  ASSERT_TRUE(r.sieve->separation);
  EXPECT_TRUE(check_separation(*r.sieve->separation, FiniteSubscheme(2, r.torus_fiber)));
  EXPECT_EQ(r.sieve->separation->v0, 7);
}

TEST(QuasiFinite, InconclusiveAndErrors) {
  CurveData d{{{Place::prime(7), LocalValue(embed_padic(3, 7, 3))}}, Q(2), {}};
  auto r = quasi_finite_transfer(three_point(), UnitFunction::parse("t"), d, kInf2);  // M = 50 misses it
  EXPECT_EQ(r.kind, QuasiFiniteVerdict::Kind::Inconclusive);
  EXPECT_NE(r.reason.find("no rational candidate"), std::string::npos);
  EXPECT_THROW(quasi_finite_transfer(three_point(), UnitFunction::parse("(t-3)"), d, kInf2), InvalidArgument);
  EXPECT_THROW(quasi_finite_transfer(QCurve({Q(0), Q(1)}, Q(2)), UnitFunction::parse("t"), d, kInf2), InvalidArgument);
  EXPECT_NO_THROW(quasi_finite_transfer(QCurve({Q(0), Q(1)}, Q(2)), UnitFunction::parse("t*(t-1)^-1"), d, kInf2));
}
