#pragma once

// JSON documents for curves, points, characters, subschemes and models.
// Rationals and polynomials travel as exact strings; small machine integers
// (primes, moduli, exponents) as JSON integers.

#include <json.hpp>
#include <string>
#include <vector>

#include "curves.hpp"
#include "ffield.hpp"
#include "models.hpp"
#include "sieve.hpp"
#include "toruslab.hpp"

namespace adeleforge::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// ---- scalars ----

inline BigRational parse_q(const json& j) {
  if (j.is_string()) return BigRational::parse(j.get<std::string>());
  if (j.is_number_integer()) return BigRational(j.get<long long>());
  throw ParseError("expected a rational string, got " + j.dump());
}
inline BigInt parse_z(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) {
    BigRational q = BigRational::parse(j.get<std::string>());
    if (q.den() != 1) throw ParseError("expected an integer, got " + j.dump());
    return q.num();
  }
  throw ParseError("expected an integer, got " + j.dump());
}
inline std::int64_t parse_i64(const json& j) {
  BigInt z = parse_z(j);
  if (big_abs(z) > BigInt(std::numeric_limits<std::int64_t>::max())) throw ParseError("integer out of range: " + j.dump());
  return to_i64(z);
}
inline json int_or_str(const BigInt& z) {
  if (big_abs(z) <= BigInt(std::numeric_limits<std::int64_t>::max())) return to_i64(z);
  return z.str();
}

inline const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::vector<Place> parse_places(const std::string& csv) {
  std::vector<Place> out;
  std::size_t i = 0;
  while (i <= csv.size()) {
    auto k = csv.find(',', i);
    if (k == std::string::npos) k = csv.size();
    std::string s = csv.substr(i, k - i);
    s.erase(0, s.find_first_not_of(' '));
    s.erase(s.find_last_not_of(' ') + 1);
    if (!s.empty()) out.push_back(Place::parse(s));
    i = k + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}
inline std::vector<Place> parse_ff_places(const FqField& F, const std::string& csv) {
  std::vector<Place> out;
  std::size_t i = 0;
  while (i <= csv.size()) {
    auto k = csv.find(',', i);
    if (k == std::string::npos) k = csv.size();
    std::string s = csv.substr(i, k - i);
    s.erase(0, s.find_first_not_of(' '));
    s.erase(s.find_last_not_of(' ') + 1);
    if (!s.empty()) out.push_back(Place::parse_ff(F, s));
    i = k + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}
inline json places_json(const std::vector<Place>& S) {
  json a = json::array();
  for (const auto& v : S) a.push_back(v.str());
  return a;
}
inline json places_json(const std::set<Place>& S) { return places_json(std::vector<Place>(S.begin(), S.end())); }

// ---- local values and adelic points over Q ----

inline json local_json(const LocalValue& x) {
  if (x.is_exact()) return {{"exact", x.exact().str()}};
  if (x.is_padic()) {
    const auto& a = x.padic();
    return {{"val", a.valuation()}, {"unit", json::array({int_or_str(a.unit()), a.precision()})}};
  }
  json r = {{"sign", x.real().negative() ? -1 : 1}};
  if (x.real().interval) r["interval"] = {x.real().interval->first.str(), x.real().interval->second.str()};
  return r;
}

inline LocalValue parse_local(const json& j, const Place& v) {
  if (j.is_string() || j.is_number_integer()) return parse_q(j);
  if (j.contains("exact")) return parse_q(j.at("exact"));
  if (j.contains("unit")) {
    if (!v.is_prime()) throw ParseError("p-adic datum at " + v.str());
    const json& u = j.at("unit");
    if (!u.is_array() || u.size() != 2) throw ParseError("unit must be [residue, precision]");
    return PAdicApprox(v.p(), j.contains("val") ? j.at("val").get<long long>() : 0, parse_z(u[0]), u[1].get<int>());
  }
  if (j.contains("sign")) {
    if (!v.is_real()) throw ParseError("sign datum at finite place " + v.str());
    int s = j.at("sign").get<int>();
    if (s != 1 && s != -1) throw ParseError("sign must be 1 or -1");
    Sign sg = s < 0 ? Sign::Negative : Sign::Positive;
    if (j.contains("interval")) return RealDatum(sg, parse_q(j["interval"][0]), parse_q(j["interval"][1]));
    return RealDatum(sg);
  }
  throw ParseError("unrecognized local value " + j.dump());
}

inline json point_json(const AdelicPoint& x) {
  json comps = json::array();
  for (const auto& [v, c] : x.components()) {
    json cs = json::array();
    for (const auto& l : c) cs.push_back(local_json(l));
    comps.push_back({{"place", v.str()}, {"coords", cs}});
  }
  json r = {{"rank", x.rank()}, {"excluded", places_json(x.excluded())}, {"components", comps}};
  if (x.default_rule() == AdelicPoint::Default::Constant) {
    json c = json::array();
    for (const auto& q : x.constant()) c.push_back(q.str());
    r["default"] = {{"constant", c}};
  } else {
    r["default"] = "unit";
  }
  return r;
}

inline AdelicPoint parse_point(const json& j) {
  int rank = need(j, "rank").get<int>();
  std::set<Place> excl;
  if (j.contains("excluded"))
    for (const auto& v : j["excluded"]) excl.insert(Place::parse(v.get<std::string>()));
  AdelicPoint x(rank, excl);
  if (j.contains("default")) {
    const json& d = j["default"];
    if (d.is_string()) {
      if (d != "unit") throw ParseError("default must be \"unit\" or {\"constant\": [...]}");
    } else {
      std::vector<BigRational> c;
      for (const auto& q : need(d, "constant")) c.push_back(parse_q(q));
      x.set_constant_default(c);
    }
  }
  if (j.contains("components"))
    for (const auto& comp : j["components"]) {
      Place v = Place::parse(need(comp, "place").get<std::string>());
      std::vector<LocalValue> cs;
      for (const auto& c : need(comp, "coords")) cs.push_back(parse_local(c, v));
      x.set_component(v, cs);
    }
  return x;
}

// ---- characters ----

inline json character_json(const DirichletCharacter& chi) {
  json vals = json::array();
  for (const auto& [g, v] : chi.generator_images()) vals.push_back(json::array({g, v.str()}));
  return {{"modulus", chi.modulus()}, {"values", vals}};
}

inline DirichletCharacter parse_character(const json& j) {
  std::int64_t m = need(j, "modulus").get<std::int64_t>();
  std::vector<std::pair<std::int64_t, QmodZ>> imgs;
  for (const auto& e : need(j, "values")) {
    if (!e.is_array() || e.size() != 2) throw ParseError("character values are [generator, \"k/n\"] pairs");
    imgs.emplace_back(e[0].get<std::int64_t>(), QmodZ::parse(e[1].is_string() ? e[1].get<std::string>()
                                                                                : std::to_string(e[1].get<long long>())));
  }
  return DirichletCharacter::from_generator_images(m, imgs);
}

inline json tuple_json(const CharacterTuple& xi) {
  json a = json::array();
  for (const auto& c : xi) a.push_back(character_json(c));
  return a;
}

/// A single character object, an array, or {"tuple": [...]}.
inline CharacterTuple parse_tuple(const json& j) {
  if (j.is_object() && j.contains("tuple")) return parse_tuple(j["tuple"]);
  CharacterTuple xi;
  if (j.is_array())
    for (const auto& c : j) xi.push_back(parse_character(c));
  else
    xi.push_back(parse_character(j));
  return xi;
}

// ---- curves and embeddings ----

/// "Q" -> 0, "F3t" -> 3.
inline int parse_base(const std::string& s) {
  if (s == "Q") return 0;
  if (s.size() >= 3 && s.front() == 'F' && s.back() == 't') {
    try {
      int q = std::stoi(s.substr(1, s.size() - 2));
      FqField::get(q);
      return q;
    } catch (const std::invalid_argument&) {
    }
  }
  throw ParseError("unknown base field '" + s + "' (expected Q or F<q>t)");
}
inline std::string base_str(int q) { return q == 0 ? "Q" : "F" + std::to_string(q) + "t"; }

inline HyperbolicRationalCurve<BigRational> parse_curve_q(const json& j) {
  if (j.contains("base") && parse_base(j["base"].get<std::string>()) != 0) throw ParseError("expected a curve over Q");
  std::vector<P1Point<BigRational>> D;
  for (const auto& a : need(j, "D")) {
    if (a == "inf") D.push_back(std::nullopt);
    else D.push_back(parse_q(a));
  }
  return {D, parse_q(need(j, "basepoint"))};
}

inline HyperbolicRationalCurve<RatFunc> parse_curve_ff(const json& j) {
  int q = parse_base(need(j, "base").get<std::string>());
  if (q == 0) throw ParseError("expected a curve over F_q(t)");
  const FqField& F = FqField::get(q);
  std::vector<P1Point<RatFunc>> D;
  for (const auto& a : need(j, "D")) {
    if (a == "inf") D.push_back(std::nullopt);
    else D.push_back(RatFunc::parse(F, a.get<std::string>()));
  }
  return {D, RatFunc::parse(F, need(j, "basepoint").get<std::string>())};
}

template <class K>
json curve_json(const HyperbolicRationalCurve<K>& X) {
  json D = json::array();
  for (const auto& a : X.D()) D.push_back(p1_str(a));
  std::string base = "Q";
  if constexpr (std::is_same_v<K, RatFunc>) base = base_str(X.basepoint().field().q());
  return {{"base", base}, {"D", D}, {"basepoint", X.basepoint().str()}};
}

template <class K>
json embedding_json(const TorusEmbedding<K>& e) {
  json fs = json::array(), rels = json::array();
  for (std::size_t i = 0; i < e.functions().size(); ++i) {
    const auto& f = e.functions()[i];
    json fj = {{"alpha", f.alpha.str()}, {"root", f.root.str()}, {"formula", f.str()}};
    fj["pole"] = f.pole ? json(f.pole->str()) : json("inf");
    fs.push_back(fj);
  }
  for (const auto& r : e.relations()) {
    json c = json::array();
    for (const auto& k : r.coeffs) c.push_back(k.str());
    rels.push_back({{"coeffs", c}, {"rhs", r.rhs.str()}, {"formula", r.str()}});
  }
  return {{"curve", curve_json(e.curve())},
          {"rank", e.rank()},
          {"distinguished", p1_str(e.curve().D()[e.distinguished()])},
          {"functions", fs},
          {"relations", rels},
          {"divisor_matrix", e.divisor_matrix()},
          {"divisor_rank", e.divisor_rank()},
          {"relations_vanish", e.relations_vanish_identically()}};
}

// ---- curve data ----

inline CurveData parse_curve_data(const json& j) {
  CurveData d;
  if (j.contains("constant") && !j["constant"].is_null()) d.constant = parse_q(j["constant"]);
  if (j.contains("excluded"))
    for (const auto& v : j["excluded"]) d.excluded.insert(Place::parse(v.get<std::string>()));
  if (j.contains("local"))
    for (const auto& e : j["local"]) {
      Place v = Place::parse(need(e, "place").get<std::string>());
      d.local.insert_or_assign(v, parse_local(need(e, "value"), v));
    }
  return d;
}

inline json curve_data_json(const CurveData& d) {
  json loc = json::array();
  for (const auto& [v, x] : d.local) loc.push_back({{"place", v.str()}, {"value", local_json(x)}});
  json r = {{"local", loc}, {"excluded", places_json(d.excluded)}};
  if (d.constant) r["constant"] = d.constant->str();
  return r;
}

// ---- subschemes ----

inline json subscheme_json(const FiniteSubscheme& Z) {
  json pts = json::array();
  for (const auto& z : Z.points()) {
    json p = json::array();
    for (const auto& c : z) p.push_back(c.str());
    pts.push_back(p);
  }
  return {{"rank", Z.rank()}, {"points", pts}};
}

inline FiniteSubscheme parse_subscheme(const json& j) {
  std::vector<TorusPoint> pts;
  for (const auto& p : need(j, "points")) {
    TorusPoint z;
    for (const auto& c : p) z.push_back(parse_q(c));
    pts.push_back(z);
  }
  int rank = j.contains("rank") ? j["rank"].get<int>() : (pts.empty() ? 1 : static_cast<int>(pts[0].size()));
  return {rank, pts};
}

// ---- models ----

inline json model_json(const AffineModel& m) {
  json hist = json::array();
  for (const auto& h : m.history()) {
    json c = json::array();
    for (const auto& x : h.center) c.push_back(int_or_str(x));
    hist.push_back({{"p", h.p}, {"center", c}, {"divided", h.divided}});
  }
  json r = {{"base", {{"inverted", m.inverted()}}},
            {"vars", m.vars()},
            {"relations", m.relation_strings()},
            {"shape", shape_str(m.shape())},
            {"history", hist}};
  if (m.source()) {
    json sc = json::array();
    for (const auto& s : m.source()->scale) sc.push_back(s.str());
    r["curve"] = curve_json(m.source()->embedding.curve());
    r["scale"] = sc;
  }
  return r;
}

inline AffineModel parse_model(const json& j) {
  std::vector<std::int64_t> inv;
  if (j.contains("base") && j["base"].contains("inverted")) inv = j["base"]["inverted"].get<std::vector<std::int64_t>>();
  auto vars = need(j, "vars").get<std::vector<std::string>>();
  std::vector<MPoly> rel;
  for (const auto& s : need(j, "relations")) rel.push_back(MPoly::parse(s.get<std::string>(), vars));
  ModelShape shape = j.contains("shape") ? parse_shape(j["shape"].get<std::string>()) : infer_shape(vars.size(), rel.size());
  std::vector<DilatationRecord> hist;
  if (j.contains("history"))
    for (const auto& h : j["history"]) {
      DilatationRecord r{need(h, "p").get<std::int64_t>(), {}, {}};
      for (const auto& c : need(h, "center")) r.center.push_back(parse_z(c));
      r.divided = need(h, "divided").get<std::vector<int>>();
      if (r.center.size() != vars.size() || r.divided.size() != rel.size())
        throw ParseError("dilatation record does not match the model");
      hist.push_back(r);
    }
  std::optional<ModelSource> src;
  if (j.contains("curve")) {
    auto emb = embed(parse_curve_q(j["curve"]));
    std::vector<BigRational> scale(static_cast<std::size_t>(emb.rank()), BigRational(1));
    if (j.contains("scale")) {
      scale.clear();
      for (const auto& s : j["scale"]) scale.push_back(parse_q(s));
    }
    if (static_cast<int>(scale.size()) != emb.rank()) throw ParseError("scale needs one entry per torus coordinate");
    if (vars.size() != 2 * scale.size()) throw ParseError("a curve model has variables X1..Xd, Y1..Yd");
    src = ModelSource{emb, scale};
  }
  return AffineModel(inv, vars, rel, shape, hist, src);
}

/// [{"p": 7, "e": 1, "parameter": "2"}, {"p": 5, "residues": {"X1": 3}}]
inline std::vector<CongruenceCondition> parse_congruences(const json& j) {
  std::vector<CongruenceCondition> out;
  const json& a = j.is_object() && j.contains("congruences") ? j["congruences"] : j;
  for (const auto& c : a) {
    CongruenceCondition cc{need(c, "p").get<std::int64_t>(), c.value("e", 1), {}, {}, std::nullopt};
    if (c.contains("parameter")) cc.parameter = parse_q(c["parameter"]);
    if (c.contains("residues"))
      for (const auto& [k, v] : c["residues"].items()) cc.residues[k] = parse_z(v);
    if (c.contains("valuations"))
      for (const auto& [k, v] : c["valuations"].items()) cc.valuations[k] = v.get<int>();
    out.push_back(cc);
  }
  return out;
}

inline json integral_point_json(const IntegralPoint& p) {
  json c = json::array();
  for (const auto& x : p.coords) c.push_back(x.str());
  return {{"t", p1_str(p.t)}, {"coords", c}};
}

// ---- function fields ----

inline std::vector<RatFunc> parse_ff_list(const FqField& F, const json& a) {
  std::vector<RatFunc> out;
  for (const auto& s : a) out.push_back(RatFunc::parse(F, s.get<std::string>()));
  return out;
}

inline json ff_point_json(const FFAdelicPoint& x) {
  json comps = json::array();
  for (const auto& [P, c] : x.components()) {
    json cs = json::array();
    for (const auto& f : c) cs.push_back(f.str());
    comps.push_back({{"place", P.str()}, {"coords", cs}});
  }
  json r = {{"base", base_str(x.field().q())}, {"rank", x.rank()}, {"components", comps}};
  if (x.default_rule() == FFAdelicPoint::Default::Constant) {
    json c = json::array();
    for (const auto& f : x.constant()) c.push_back(f.str());
    r["default"] = {{"constant", c}};
  } else {
    r["default"] = "unit";
  }
  return r;
}

inline FFAdelicPoint parse_ff_point(const json& j) {
  int q = parse_base(need(j, "base").get<std::string>());
  if (q == 0) throw ParseError("function-field point needs base F<q>t");
  const FqField& F = FqField::get(q);
  FFAdelicPoint x(F, need(j, "rank").get<int>());
  if (j.contains("default") && j["default"].is_object()) x.set_constant_default(parse_ff_list(F, need(j["default"], "constant")));
  if (j.contains("components"))
    for (const auto& c : j["components"])
      x.set_component(Place::parse_ff(F, need(c, "place").get<std::string>()), parse_ff_list(F, need(c, "coords")));
  return x;
}

inline FFCurveData parse_ff_curve_data(const FqField& F, const json& j) {
  FFCurveData d;
  if (j.contains("constant") && !j["constant"].is_null()) d.constant = RatFunc::parse(F, j["constant"].get<std::string>());
  if (j.contains("local"))
    for (const auto& e : j["local"])
      d.local.insert_or_assign(Place::parse_ff(F, need(e, "place").get<std::string>()),
                               RatFunc::parse(F, need(e, "value").get<std::string>()));
  return d;
}

inline json ff_bounds_json(const FFBounds& b) {
  json ex = json::array();
  for (const auto& f : b.extra_f) ex.push_back(f.str());
  return {{"n_max", b.n_max}, {"f_degree", b.f_degree}, {"extra_f", ex}};
}

inline FFBounds parse_ff_bounds(const FqField& F, const json& j) {
  FFBounds b;
  b.n_max = j.value("n_max", b.n_max);
  b.f_degree = j.value("f_degree", b.f_degree);
  if (j.contains("extra_f")) b.extra_f = parse_ff_list(F, j["extra_f"]);
  return b;
}

// ---- certificates ----

inline json contributions_json(const AdelicPoint& x, const CharacterTuple& xi, const std::set<Place>& omit) {
  json out = json::array();
  for (int j = 0; j < x.rank(); ++j) {
    const auto& chi = xi[static_cast<std::size_t>(j)];
    if (chi.is_trivial()) continue;
    std::set<Place> places = x.support(j);
    places.insert(Place::real());
    for (auto p : prime_divisors(chi.modulus())) places.insert(Place::prime(p));
    for (const auto& v : places) {
      if (omit.count(v)) continue;
      auto val = x.value(v, j);
      if (!val) continue;
      QmodZ c = local_invariant(chi, v, *val);
      if (!c.is_zero()) out.push_back({{"place", v.str()}, {"coordinate", j + 1}, {"invariant", c.str()}});
    }
  }
  return out;
}

inline json torus_obstruction_cert(const AdelicPoint& x, const std::vector<Place>& S, const Obstructed& ob) {
  auto omit = detail::omit_set(x, S);
  return {{"type", "torus_obstruction"},
          {"point", point_json(x)},
          {"S", places_json(S)},
          {"tuple", tuple_json(ob.tuple)},
          {"conductor", max_conductor(ob.tuple)},
          {"value", ob.value.str()},
          {"contributions", contributions_json(x, ob.tuple, omit)}};
}

inline json torus_survival_cert(const AdelicPoint& x, const std::vector<Place>& S, std::int64_t M) {
  return {{"type", "torus_survival"}, {"point", point_json(x)}, {"S", places_json(S)}, {"conductor_max", M}};
}

inline json separation_json(const Separation& s) {
  json w = json::array();
  for (const auto& x : s.witnesses)
    w.push_back({{"z_index", x.z_index},
                 {"coordinate", x.coordinate + 1},
                 {"x_residue", x.x_residue},
                 {"z_residue", x.z_residue},
                 {"power", x.power}});
  return {{"N", s.N}, {"v0", s.v0}, {"witnesses", w}};
}

inline json sieve_cert(const AdelicPoint& x, const FiniteSubscheme& Z, const std::vector<Place>& S,
                       const MembershipVerdict& v) {
  json r = {{"point", point_json(x)}, {"subscheme", subscheme_json(Z)}, {"S", places_json(S)}};
  if (v.kind == MembershipVerdict::Kind::Member) {
    r["type"] = "sieve_member";
    r["z_index"] = v.z_index;
    json z = json::array();
    for (const auto& c : Z.points()[v.z_index]) z.push_back(c.str());
    r["z"] = z;
    r["checks"] = v.checks;
  } else if (v.kind == MembershipVerdict::Kind::Excluded) {
    r["type"] = "sieve_separation";
    r["separation"] = separation_json(*v.separation);
  }
  json tw = json::array();
  for (const auto& t : v.torsion_twists) {
    json z = json::array();
    for (const auto& c : t) z.push_back(c.str());
    tw.push_back(z);
  }
  r["torsion_twists"] = tw;
  return r;
}

inline json ff_obstruction_cert(const FFAdelicPoint& x, const std::vector<Place>& S, const FFObstructed& ob) {
  return {{"type", "ff_obstruction"},   {"point", ff_point_json(x)},        {"S", places_json(S)},
          {"character", ob.character.str()}, {"coordinate", ob.coordinate + 1}, {"value", ob.value.str()}};
}

inline json ff_survival_cert(const FFAdelicPoint& x, const std::vector<Place>& S, const FFBounds& b) {
  return {{"type", "ff_survival"},
          {"point", ff_point_json(x)},
          {"S", places_json(S)},
          {"bounds", ff_bounds_json(b)},
          {"family", "unramified constant extensions and tame Kummer characters only"}};
}

inline json sap_cert(const AffineModel& m, const std::vector<Place>& S, const SapVerdict& v) {
  json r = {{"model", model_json(m)}, {"S", places_json(S)}, {"conductor_max", v.M}, {"height", int_or_str(v.H)}};
  switch (v.kind) {
    case SapVerdict::Kind::IntegralPointFound: {
      r["type"] = "integral_points";
      json pts = json::array();
      for (const auto& p : v.points) pts.push_back(integral_point_json(p));
      r["points"] = pts;
      break;
    }
    case SapVerdict::Kind::EmptyLocalPoints:
      r["type"] = "empty_local_points";
      r["p"] = v.empty_prime;
      r["depth"] = v.empty_depth;
      break;
    case SapVerdict::Kind::ObstructionFound: {
      r["type"] = "model_obstruction";
      r["tuple"] = tuple_json(v.tuple);
      json ls = json::array();
      for (const auto& s : v.local_sets) {
        json vals = json::array();
        for (const auto& q : s.values) vals.push_back(q.str());
        ls.push_back({{"p", s.p}, {"depth", s.depth}, {"classes", s.classes}, {"values", vals}});
      }
      r["local_sets"] = ls;
      r["tuples_scanned"] = v.tuples_scanned;
      break;
    }
    case SapVerdict::Kind::Inconclusive:
      r["type"] = "none";
      r["reason"] = v.reason;
      r["tuples_scanned"] = v.tuples_scanned;
      break;
  }
  return r;
}

/// Payload of the quasi-finite chain: stage trail plus the certificate of the
/// deciding stage (a torus obstruction of the pushed point, or the sieve).
inline std::pair<std::string, json> hv_chain(const HyperbolicRationalCurve<BigRational>& X, const UnitFunction& u,
                                             const CurveData& d, const std::vector<Place>& S,
                                             const QuasiFiniteParams& qp) {
  auto r = quasi_finite_transfer(X, u, d, S, qp);
  json p = {{"type", "hv_chain"}, {"stage", r.stage}, {"curve", curve_json(X)}, {"f", u.str()},
            {"curve_data", curve_data_json(d)}};
  json stages = json::array();
  stages.push_back("pushed forward along f to G_m");
  if (r.y) {
    stages.push_back("survives conductor <= " + std::to_string(qp.M) + "; rational candidate y = " + r.y->str());
    p["y"] = r.y->str();
  }
  if (r.stage >= 3) {
    json fib = json::array();
    for (const auto& a : r.fiber) fib.push_back(a.str());
    p["fiber"] = fib;
    p["discarded_degree"] = r.discarded_degree;
    if (!r.fiber.empty())
      stages.push_back("rational fiber of size " + std::to_string(r.fiber.size()) +
                       ", irreducible remainder of degree " + std::to_string(r.discarded_degree));
  }
  std::string kind = "Inconclusive";
  if (r.obstruction) {
    AdelicPoint pushed(1, d.excluded);
    if (d.constant) pushed.set_constant_default({u(*d.constant)});
    for (const auto& [v, tv] : d.local) pushed.set_component(v, {u.at(v, tv)});
    p["certificate"] = torus_obstruction_cert(pushed, S, *r.obstruction);
    stages.push_back("pushed point obstructed by " + tuple_str(r.obstruction->tuple));
    kind = "Excluded";
  } else if (r.sieve) {
    auto emb = embed(X);
    FiniteSubscheme Z(emb.rank(), r.torus_fiber);
    p["certificate"] = sieve_cert(to_torus(emb, d), Z, S, *r.sieve);
    if (r.sieve->kind == MembershipVerdict::Kind::Member) {
      kind = "Member";
      p["point"] = r.point->str();
      stages.push_back("member: the point is t = " + r.point->str());
    } else if (r.sieve->kind == MembershipVerdict::Kind::Excluded) {
      kind = "Excluded";
      stages.push_back("excluded by the sieve at N = " + std::to_string(r.sieve->separation->N) +
                       ", v0 = " + std::to_string(r.sieve->separation->v0));
    }
  }
  if (kind == "Inconclusive") {
    p.erase("certificate");
    p["reason"] = r.reason;
  }
  p["stages"] = stages;
  return {kind, p};
}

// ---- verdicts ----

struct Verdict {
  std::string kind;  // Member, Excluded, Obstructed, SurvivesUpTo, IntegralPointFound, Inconclusive, EmptyLocalPoints
  json payload;
  json provenance;

  json to_json() const { return {{"kind", kind}, {"payload", payload}, {"provenance", provenance}}; }
  int exit_code() const { return kind == "Inconclusive" ? 2 : 0; }
  static Verdict from_json(const json& j) {
    return {need(j, "kind").get<std::string>(), need(j, "payload"), j.value("provenance", json::object())};
  }
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace adeleforge::io
