#include <gtest/gtest.h>

#include "adeleforge/json_io.hpp"
#include "checker.hpp"
#include "suite.hpp"

using namespace adeleforge;
using json = nlohmann::json;

namespace {

const std::vector<Place> kInf{Place::real()};
const std::vector<Place> kInf2{Place::real(), Place::prime(2)};

AdelicPoint deviant7() {
  AdelicPoint x = AdelicPoint::diagonal({BigRational(1)});
  x.set_component(Place::prime(7), {LocalValue(embed_padic(BigRational(3), 7, 3))});
  return x;
}

json wrap(const std::string& kind, json p) { return {{"kind", kind}, {"payload", std::move(p)}}; }

json obstruction_doc() {
  auto x = deviant7();
  auto v = survives(x, kInf, 7);
  return wrap("Obstructed", io::torus_obstruction_cert(x, kInf, std::get<Obstructed>(v)));
}

json separation_doc() {
  FiniteSubscheme Z(1, {{BigRational(1)}, {BigRational(4)}});
  auto x = AdelicPoint::diagonal({BigRational(3)});
  SieveParams p;
  p.schedule = {3};
  return wrap("Excluded", io::sieve_cert(x, Z, kInf, decide_membership(x, Z, kInf, p)));
}

}  // namespace

TEST(Json, PointRoundTrip) {
  AdelicPoint x(2, {Place::prime(11)});
  x.set_component(Place::real(), {LocalValue(RealDatum(Sign::Negative)), LocalValue(BigRational(3, 2))});
  x.set_component(Place::prime(5), {LocalValue(PAdicApprox(5, -2, 7, 4)), LocalValue(BigRational(25))});
  json j = io::point_json(x);
  EXPECT_EQ(io::dump(io::point_json(io::parse_point(j))), io::dump(j));
  auto d = AdelicPoint::diagonal({BigRational(-7, 9)});
  EXPECT_EQ(io::point_json(io::parse_point(io::point_json(d))), io::point_json(d));
}

TEST(Json, CharacterModelCurveRoundTrip) {
  for (const auto& chi : enumerate_characters(20)) {
    auto back = io::parse_character(io::character_json(chi));
    EXPECT_EQ(back, chi) << chi.str();
  }
  HyperbolicRationalCurve<BigRational> X({BigRational(0), BigRational(1), std::nullopt}, BigRational(2));
  auto m = model_for_congruences(embed(X), {{7, 1, {}, {}, BigRational(3)}}, kInf2);
  json j = io::model_json(m);
  auto back = io::parse_model(j);
  EXPECT_EQ(io::dump(io::model_json(back)), io::dump(j));
  EXPECT_EQ(back.relations(), m.relations());
  EXPECT_EQ(io::curve_json(io::parse_curve_q(io::curve_json(X))), io::curve_json(X));
}

TEST(Json, VerdictRoundTripIsBitExact) {
  io::Verdict v{"Obstructed", obstruction_doc()["payload"], {{"tool", "adeleforge"}}};
  std::string s = io::dump(v.to_json());
  auto back = io::Verdict::from_json(json::parse(s));
  EXPECT_EQ(io::dump(back.to_json()), s);
  EXPECT_EQ(back.exit_code(), 0);
  io::Verdict inc{"Inconclusive", {}, {}};
  EXPECT_EQ(inc.exit_code(), 2);
}

TEST(Json, ParseErrors) {
  EXPECT_THROW(io::parse_point(json::object()), ParseError);
  EXPECT_THROW(io::parse_point(json{{"rank", 1}, {"default", "zero"}}), ParseError);
  EXPECT_THROW(io::parse_base("F6t"), Error);
  EXPECT_THROW(io::parse_base("R"), ParseError);
  EXPECT_THROW(io::parse_local(json{{"sign", 1}}, Place::prime(3)), ParseError);
  EXPECT_EQ(io::parse_places("inf, 3,2,3").size(), 3u);
}

TEST(Checker, AcceptsEmittedCertificates) {
  auto a = afcheck::check(obstruction_doc());
  EXPECT_TRUE(a.ok) << a.message;
  auto b = afcheck::check(separation_doc());
  EXPECT_TRUE(b.ok) << b.message;
}

TEST(Checker, RejectsTamperedObstruction) {
  json d = obstruction_doc();
  d["payload"]["value"] = "1/2";
  EXPECT_FALSE(afcheck::check(d).ok);
  d = obstruction_doc();
  d["payload"]["point"]["components"][0]["coords"][0]["unit"][0] = 1;  // now the diagonal of 1
  EXPECT_FALSE(afcheck::check(d).ok);
  d = obstruction_doc();
  d["payload"]["S"] = {"inf", "2"};  // cubic chi mod 7 has chi(2) != 0
  EXPECT_FALSE(afcheck::check(d).ok);
  d = obstruction_doc();
  d["kind"] = "Member";
  EXPECT_FALSE(afcheck::check(d).ok);
}

TEST(Checker, RejectsTamperedSeparation) {
  json d = separation_doc();
  d["payload"]["separation"]["v0"] = 7;
  EXPECT_FALSE(afcheck::check(d).ok);
  d = separation_doc();
  d["payload"]["point"]["default"]["constant"][0] = "4";
  EXPECT_FALSE(afcheck::check(d).ok);
  d = separation_doc();
  d["payload"]["separation"]["witnesses"].erase(1);
  EXPECT_FALSE(afcheck::check(d).ok);
}

TEST(Checker, SurvivalNeedsEverySmallCharacter) {
  auto x = AdelicPoint::diagonal({BigRational(5)});
  EXPECT_TRUE(afcheck::check(wrap("SurvivesUpTo", io::torus_survival_cert(x, kInf, 30))).ok);
  EXPECT_FALSE(afcheck::check(wrap("SurvivesUpTo", io::torus_survival_cert(deviant7(), kInf, 30))).ok);
}

TEST(Checker, ModelCertificates) {
  HyperbolicRationalCurve<BigRational> X({BigRational(0), BigRational(1), std::nullopt}, BigRational(2));
  auto dev = model_for_congruences(embed(X), {{7, 1, {}, {}, BigRational(3)}}, kInf);
  auto v = verify_sap(dev, kInf, 10, 1000);
  ASSERT_EQ(v.kind, SapVerdict::Kind::ObstructionFound);
  json d = wrap("Obstructed", io::sap_cert(dev, kInf, v));
  auto ok = afcheck::check(d);
  EXPECT_TRUE(ok.ok) << ok.message;
  d["payload"]["local_sets"][0]["values"] = {"0"};
  EXPECT_FALSE(afcheck::check(d).ok);

  auto m2 = clear_denominators(embed(X), kInf2);
  auto found = verify_sap(m2, kInf2, 10, 100);
  ASSERT_EQ(found.kind, SapVerdict::Kind::IntegralPointFound);
  json f = wrap("IntegralPointFound", io::sap_cert(m2, kInf2, found));
  EXPECT_TRUE(afcheck::check(f).ok);
  f["payload"]["points"][0]["t"] = "3";
  EXPECT_FALSE(afcheck::check(f).ok);

  auto monic = clear_denominators(embed(X), kInf, true);
  auto empty = verify_sap(monic, kInf, 10, 100);
  ASSERT_EQ(empty.kind, SapVerdict::Kind::EmptyLocalPoints);
  EXPECT_TRUE(afcheck::check(wrap("EmptyLocalPoints", io::sap_cert(monic, kInf, empty))).ok);
  auto plain = clear_denominators(embed(X), kInf);
  auto wrong = io::sap_cert(plain, kInf, empty);  // same claim on a model with local points at 2
  EXPECT_FALSE(afcheck::check(wrap("EmptyLocalPoints", wrong)).ok);
}

TEST(Checker, FunctionFieldCertificates) {
  const FqField& F = FqField::get(3);
  FFAdelicPoint x = FFAdelicPoint::diagonal({RatFunc::constant(F, 1)});
  x.set_component(Place::parse_ff(F, "t"), {RatFunc::parse(F, "t")});
  auto v = ff_survives(x, {});
  ASSERT_TRUE(std::holds_alternative<FFObstructed>(v));
  json d = wrap("Obstructed", io::ff_obstruction_cert(x, {}, std::get<FFObstructed>(v)));
  EXPECT_TRUE(afcheck::check(d).ok);
  d["payload"]["value"] = "0";
  EXPECT_FALSE(afcheck::check(d).ok);
  auto y = FFAdelicPoint::diagonal({RatFunc::parse(F, "t/(t+1)")});
  EXPECT_TRUE(afcheck::check(wrap("SurvivesUpTo", io::ff_survival_cert(y, {}, {}))).ok);
  EXPECT_FALSE(afcheck::check(wrap("SurvivesUpTo", io::ff_survival_cert(x, {}, {}))).ok);
}

TEST(Checker, InconclusiveHasNoCertificate) {
  EXPECT_FALSE(afcheck::check(wrap("Inconclusive", {{"type", "none"}, {"reason", "x"}})).ok);
}

TEST(Suite, ConfigParsing) {
  auto c = suite::Config::parse("# comment\nseed = 9\nweil_pairs=12 # trailing\n\n");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.get("weil_pairs"), 12);
  EXPECT_EQ(c.get("divisors"), 20);
  EXPECT_THROW(suite::Config::parse("nonsense = 1"), ParseError);
  EXPECT_THROW(suite::Config::parse("seed 1"), ParseError);
  EXPECT_THROW(suite::Config::parse("seed = x"), ParseError);
}

TEST(Suite, HvScenariosCertify) {
  auto r = suite::pipeline(suite::Config{});
  EXPECT_TRUE(r["pass"].get<bool>()) << r.dump();
}
