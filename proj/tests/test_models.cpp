#include <gtest/gtest.h>

#include "adeleforge/models.hpp"
#include "model_scan.hpp"

using namespace adeleforge;

namespace {

BigRational Q(const char* s) { return BigRational::parse(s); }

TorusEmbedding<BigRational> curve(std::vector<const char*> D, const char* x0) {
  std::vector<P1Point<BigRational>> pts;
  for (const char* a : D) pts.push_back(std::string(a) == "inf" ? P1Point<BigRational>() : Q(a));
  return embed(HyperbolicRationalCurve<BigRational>(pts, Q(x0)));
}

const std::vector<Place> Sinf{Place::real()};
const std::vector<Place> S2{Place::real(), Place::prime(2)};

std::vector<std::string> params(const IntegralPointSet& s) {
  std::vector<std::string> out;
  for (const auto& p : s.points) out.push_back(p1_str(p.t));
  return out;
}

}  // namespace

TEST(MPoly, ParsePrintCompose) {
  std::vector<std::string> v{"X", "Y"};
  auto g = MPoly::parse("(1+3*X)*(1+3*Y) - 1", v);
  EXPECT_EQ(g.str(v), "9*X*Y + 3*X + 3*Y");
  EXPECT_EQ(MPoly::parse(g.str(v), v), g);
  EXPECT_EQ(g.content(), 3);
  EXPECT_EQ(MPoly::parse("-X^2 + 2*X*Y - Y^2", v), -(MPoly::parse("X - Y", v).pow(2)));
  auto h = MPoly::parse("X*Y - 1", v).compose({MPoly::parse("1 + 3*X", v), MPoly::parse("1+3*Y", v)});
  EXPECT_EQ(h, g);
  EXPECT_EQ(g.eval(std::vector<BigInt>{1, 2}), 9 * 2 + 3 + 6);
  EXPECT_THROW(MPoly::parse("X + Z", v), ParseError);
  EXPECT_THROW(MPoly::parse("X + (Y", v), ParseError);
}

TEST(ClearDenominators, Examples) {
  auto m = clear_denominators(curve({"0", "1", "inf"}, "2"), S2);
  EXPECT_EQ(m.relation_strings(), (std::vector<std::string>{"2*X1 - X2 - 1", "X1*Y1 - 1", "X2*Y2 - 1"}));
  EXPECT_EQ(m.shape(), ModelShape::CompleteIntersection);
  EXPECT_EQ(m.inverted(), std::vector<std::int64_t>{2});

  auto gm = clear_denominators(curve({"0", "inf"}, "1"), Sinf);
  EXPECT_EQ(gm.relation_strings(), std::vector<std::string>{"X1*Y1 - 1"});
  EXPECT_EQ(gm.shape(), ModelShape::Hypersurface);

  auto m3 = clear_denominators(curve({"-1", "1", "inf"}, "2"), Sinf);
  EXPECT_EQ(m3.relation_strings()[0], "3*X1 - X2 - 2");

  auto monic = clear_denominators(curve({"0", "1", "inf"}, "2"), Sinf, true);
  EXPECT_EQ(monic.relation_strings()[0], "X1 - X2 - 1");

  // content 1 and the source relation agree at sample points
  auto fin = clear_denominators(curve({"0", "1", "3"}, "1/2"), Sinf);
  for (const auto& r : fin.relations()) EXPECT_EQ(r.content(), 1);
  for (const char* t : {"5", "-7/3", "11/4"}) EXPECT_TRUE(fin.satisfies(*fin.source()->coords(Q(t)))) << t;
}

TEST(Dilate, Examples) {
  AffineModel xy({}, {"X", "Y"}, {MPoly::parse("X*Y - 1", {"X", "Y"})}, ModelShape::Hypersurface);
  auto d = dilate(xy, 3, {1, 1});
  EXPECT_EQ(d.relation_strings(), std::vector<std::string>{"3*X*Y + X + Y"});
  EXPECT_EQ(d.history().size(), 1u);
  EXPECT_EQ(d.history()[0].divided, std::vector<int>{1});
  for (long long x : {1, 4, 7, -2, 10}) EXPECT_TRUE(d.passes_history(3, {BigRational(x), BigRational(1) / BigRational(x)}));
  for (long long x : {2, 5, -1}) EXPECT_FALSE(d.passes_history(3, {BigRational(x), BigRational(1) / BigRational(x)}));

  auto m = clear_denominators(curve({"0", "1", "inf"}, "2"), Sinf);
  EXPECT_THROW(dilate(m, 5, {3, 0, 2, 0}), CenterNotOnFiber);
  auto m5 = dilate(m, 5, {1, 1, 1, 1});
  EXPECT_EQ(m5.relation_strings()[0], "2*X1 - X2");

  AffineModel gen({}, {"X", "Y"}, {MPoly::parse("X*Y", {"X", "Y"}), MPoly::parse("X^2", {"X", "Y"})},
                  ModelShape::General);
  EXPECT_THROW(dilate(gen, 2, {0, 0}), SaturationNotCertified);
  EXPECT_THROW(dilate(m5, 4, {1, 1, 1, 1}), InvalidArgument);
  auto m2 = clear_denominators(curve({"0", "1", "inf"}, "2"), S2);
  EXPECT_THROW(dilate(m2, 2, {1, 1, 1, 1}), InvalidArgument);
}

TEST(Dilate, LocalPointScan) {
  std::mt19937 rng(99);
  for (int it = 0; it < 10; ++it) {
    auto hs = scan::random_hypersurface(rng);
    int depth = 1 + it % 3;
    auto r = scan::dilatation_scan(hs, depth, rng);
    EXPECT_EQ(r.mismatches, 0) << hs.model.relation_strings()[0] << " p=" << hs.p;
    EXPECT_EQ(r.samples, 500);
    EXPECT_GE(r.specializing, 250);
  }
}

TEST(ModelForCongruences, Examples) {
  auto gm = clear_denominators(curve({"0", "inf"}, "1"), Sinf);
  auto m9 = model_for_congruences(gm, {{3, 2, {{"X1", 1}}, {}, {}}});
  EXPECT_EQ(m9.history().size(), 2u);
  for (long long x : {1, 10, -8, 19}) EXPECT_TRUE(m9.passes_history(3, {BigRational(x), BigRational(1) / BigRational(x)}));
  for (long long x : {4, 7, 2, -1}) EXPECT_FALSE(m9.passes_history(3, {BigRational(x), BigRational(1) / BigRational(x)}));

  auto C = curve({"0", "1", "inf"}, "2");
  CongruenceCondition c7{7, 1, {}, {}, Q("2")};
  auto m7 = model_for_congruences(C, {c7}, S2);
  ASSERT_EQ(m7.history().size(), 1u);
  EXPECT_EQ(m7.history()[0].p, 7);
  EXPECT_EQ(m7.history()[0].center, (std::vector<BigInt>{1, 1, 1, 1}));

  EXPECT_EQ(model_for_congruences(C, {}, S2).relation_strings(), clear_denominators(C, S2).relation_strings());
  EXPECT_THROW(model_for_congruences(C, {{2, 1, {{"X1", 1}}, {}, {}}}, S2), InvalidArgument);
  EXPECT_THROW(model_for_congruences(gm, {{3, 1, {{"X1", 5}}, {}, {}}}), InvalidArgument);
  EXPECT_THROW(model_for_congruences(gm, {{3, 1, {{"X1", 0}}, {}, {}}}), CenterNotOnFiber);
  EXPECT_THROW(model_for_congruences(C, {{7, 1, {}, {}, Q("1/7")}}, S2), CenterNotOnFiber);
  EXPECT_THROW(model_for_congruences(gm, {{3, 2, {{"X1", 1}}, {{"X1", 1}}, {}}}), InvalidArgument);
}

TEST(ModelForCongruences, TwoStepsEqualDepthTwo) {
  std::mt19937 rng(3);
  for (int it = 0; it < 10; ++it) {
    auto hs = scan::random_hypersurface(rng);
    const auto& g = hs.model.relations()[0];
    std::vector<BigInt> seed(g.nvars());
    for (auto& s : seed) s = BigInt(static_cast<long long>(rng() % 100000));
    auto P = scan::hensel_point(g, hs.p, 4, seed);
    std::vector<BigInt> c1, c2;
    CongruenceCondition cc{hs.p, 2, {}, {}, {}};
    BigInt p2 = hs.p * hs.p;
    for (std::size_t i = 0; i < P.size(); ++i) {
      c1.push_back(big_mod(P[i], BigInt(hs.p)));
      c2.push_back(big_mod((big_mod(P[i], p2) - c1.back()) / hs.p, BigInt(hs.p)));
      cc.residues[hs.model.vars()[i]] = big_mod(P[i], p2);
    }
    auto two = dilate(dilate(hs.model, hs.p, c1), hs.p, c2);
    auto direct = model_for_congruences(hs.model, {cc});
    EXPECT_EQ(two.relations(), direct.relations());
    EXPECT_EQ(two.history().size(), 2u);
  }
}

TEST(IntegralPoints, Examples) {
  auto C = curve({"0", "1", "inf"}, "2");
  auto m = clear_denominators(C, S2);
  auto r20 = integral_points(m, S2, BigInt(1) << 40, 20);
  EXPECT_EQ(params(r20), (std::vector<std::string>{"-1", "1/2", "2"}));
  EXPECT_TRUE(r20.bound_stable);
  auto r30 = integral_points(m, S2, BigInt(1) << 40, 30);
  EXPECT_EQ(params(r30), params(r20));
  for (const auto& pt : r20.points) EXPECT_TRUE(m.satisfies(pt.coords));

  auto m7 = model_for_congruences(C, {{7, 1, {}, {}, Q("2")}}, S2);
  EXPECT_EQ(params(integral_points(m7, S2, 1000)), std::vector<std::string>{"2"});

  auto gm = clear_denominators(curve({"0", "inf"}, "1"), Sinf);
  EXPECT_EQ(params(integral_points(gm, Sinf, 100)), (std::vector<std::string>{"-1", "1"}));

  AffineModel bare({}, {"X", "Y"}, {MPoly::parse("X*Y - 1", {"X", "Y"})}, ModelShape::Hypersurface);
  EXPECT_THROW(integral_points(bare, Sinf, 10), UnsupportedShape);
  EXPECT_THROW(integral_points(m, Sinf, 10), InvalidArgument);
}

// every rational t of height <= H whose coordinates are S-units and pass the
// congruences is returned, and nothing else
TEST(IntegralPoints, ExhaustiveCrossScan) {
  const std::int64_t H = 70;
  struct Case {
    std::vector<const char*> D;
    const char* x0;
    std::vector<Place> S;
    std::vector<CongruenceCondition> cond;
  };
  std::vector<Case> cases{
      {{"0", "1", "inf"}, "2", S2, {}},
      {{"0", "1", "inf"}, "2", S2, {{7, 1, {}, {}, Q("2")}}},
      {{"0", "1", "inf"}, "3", {Place::real(), Place::prime(2), Place::prime(3)}, {}},
      {{"-1", "1", "inf"}, "3", {Place::real(), Place::prime(2), Place::prime(3)}, {{5, 1, {}, {}, Q("2")}}},
      {{"0", "inf"}, "1", {Place::real(), Place::prime(3)}, {{5, 2, {{"X1", 9}}, {}, {}}}},
      {{"0", "1", "3"}, "2", {Place::real(), Place::prime(2), Place::prime(3)}, {}},
  };
  for (const auto& cs : cases) {
    auto m = model_for_congruences(curve(cs.D, cs.x0), cs.cond, cs.S);
    auto got = params(integral_points(m, cs.S, H));
    auto primes = finite_primes(cs.S);
    std::vector<P1Point<BigRational>> want;
    std::vector<P1Point<BigRational>> cands{std::nullopt};
    for (const auto& q : detail::rationals_of_height(H)) cands.emplace_back(q);
    for (const auto& t : cands) {
      auto x = m.source()->coords(t);
      if (!x) continue;
      bool ok = true;
      for (std::size_t j = 0; j < x->size(); ++j) ok = ok && sunit_exponents((*x)[j], primes).has_value();
      for (const auto& c : cs.cond) ok = ok && m.passes_history(c.p, *x);
      if (ok) want.push_back(t);
    }
    std::sort(want.begin(), want.end(), detail::p1_less);
    std::vector<std::string> ws;
    for (const auto& t : want) ws.push_back(p1_str(t));
    EXPECT_EQ(got, ws) << cs.x0;
    EXPECT_FALSE(got.empty() && cs.cond.empty());
  }
}

TEST(VerifySap, Examples) {
  auto C = curve({"0", "1", "inf"}, "2");
  auto monic = clear_denominators(C, Sinf, true);
  auto v = verify_sap(monic, Sinf, 20, 100);
  EXPECT_EQ(v.kind, SapVerdict::Kind::EmptyLocalPoints);
  EXPECT_EQ(v.empty_prime, 2);

  auto v2 = verify_sap(clear_denominators(C, S2, true), S2, 20, 100);
  ASSERT_EQ(v2.kind, SapVerdict::Kind::IntegralPointFound);
  EXPECT_TRUE(std::any_of(v2.points.begin(), v2.points.end(), [](const auto& p) { return p.t && *p.t == 2; }));

  auto gm = clear_denominators(curve({"0", "inf"}, "1"), Sinf);
  std::vector<CongruenceCondition> cc{{3, 2, {{"X1", 1}}, {}, {}}, {5, 1, {{"X1", 2}}, {}, {}}};
  auto v3 = verify_sap(model_for_congruences(gm, cc), Sinf, 20, 1000);
  ASSERT_EQ(v3.kind, SapVerdict::Kind::ObstructionFound);
  ASSERT_EQ(v3.tuple.size(), 1u);
  EXPECT_EQ(v3.tuple[0].conductor(), 5);
  for (const auto& ls : v3.local_sets) EXPECT_FALSE(ls.values.empty());

  auto gm2 = clear_denominators(curve({"0", "inf"}, "1"), S2);
  auto v4 = verify_sap(model_for_congruences(gm2, cc), S2, 20, 1000);
  ASSERT_EQ(v4.kind, SapVerdict::Kind::IntegralPointFound);
  EXPECT_EQ(p1_str(v4.points[0].t), "-8");

  // the congruence model of the deviant curve point: no integral point, and
  // no obstruction at S = {inf, 2} below conductor 20
  auto dev = model_for_congruences(C, {{7, 1, {}, {}, Q("3")}}, S2);
  auto v5 = verify_sap(dev, S2, 20, 1000);
  EXPECT_EQ(v5.kind, SapVerdict::Kind::Inconclusive);
  EXPECT_FALSE(v5.reason.empty());

  AffineModel bare({}, {"X", "Y"}, {MPoly::parse("X*Y - 1", {"X", "Y"})}, ModelShape::Hypersurface);
  EXPECT_EQ(verify_sap(bare, Sinf, 10, 10).kind, SapVerdict::Kind::Inconclusive);
}

TEST(VerifySap, ObstructionSetsAreConsistent) {
  // with S = {inf}, t = 3 mod 7 on the curve model is obstructed by the cubic character mod 7
  auto C = curve({"0", "1", "inf"}, "2");
  auto dev = model_for_congruences(C, {{7, 1, {}, {}, Q("3")}}, Sinf);
  auto v = verify_sap(dev, Sinf, 10, 1000);
  ASSERT_EQ(v.kind, SapVerdict::Kind::ObstructionFound) << v.reason;
  std::vector<QmodZ> total{QmodZ()};
  for (const auto& ls : v.local_sets) total = sum_sets(total, ls.values);
  EXPECT_EQ(std::find(total.begin(), total.end(), QmodZ()), total.end());
  EXPECT_LE(max_conductor(v.tuple), 10);
}
