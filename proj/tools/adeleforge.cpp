// adeleforge command-line tool. Every command writes one JSON document to
// stdout. Exit status: 0 definitive, 2 Inconclusive, 1 bad input.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adeleforge/json_io.hpp"
#include "checker.hpp"
#include "suite.hpp"

using namespace adeleforge;
using io::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256(const std::string& s) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// Inputs read so far, hashed into the provenance block.
json g_inputs = json::object();
json g_bounds = json::object();
std::string g_command;

json load(const std::string& role, const std::string& path) {
  std::string text = slurp(path);
  g_inputs[role] = "sha256:" + sha256(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json provenance() {
  return {{"tool", "adeleforge"}, {"version", io::kVersion}, {"command", g_command}, {"inputs", g_inputs},
          {"bounds", g_bounds}};
}

int emit(const io::Verdict& v) {
  std::cout << io::dump(v.to_json());
  return v.exit_code();
}

int emit_doc(const json& j) {
  std::cout << io::dump(j);
  return 0;
}

io::Verdict verdict(std::string kind, json payload) { return {std::move(kind), std::move(payload), provenance()}; }

io::Verdict inconclusive(const std::string& reason, json extra = json::object()) {
  extra["type"] = "none";
  extra["reason"] = reason;
  return verdict("Inconclusive", extra);
}

std::vector<std::int64_t> parse_int_list(const std::string& s, char sep) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    try {
      std::size_t k = 0;
      out.push_back(std::stoll(item, &k));
      if (k != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("expected an integer, got '" + item + "'");
    }
  }
  return out;
}

// "key=value,key=value"
std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in bounds, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::int64_t kv_int(const std::map<std::string, std::string>& kv, const std::string& key, std::int64_t dflt) {
  auto it = kv.find(key);
  if (it == kv.end()) return dflt;
  auto v = parse_int_list(it->second, ',');
  if (v.size() != 1) throw ParseError("bad value for " + key);
  return v[0];
}

json survival_payload(const AdelicPoint& x, const std::vector<Place>& S, std::int64_t M, const SurvivalVerdict& sv,
                      std::string* kind) {
  if (auto* ob = std::get_if<Obstructed>(&sv)) {
    *kind = "Obstructed";
    return io::torus_obstruction_cert(x, S, *ob);
  }
  *kind = "SurvivesUpTo";
  return io::torus_survival_cert(x, S, M);
}

// ---- commands ----

int cmd_embed(const std::string& curve) {
  json c = load("curve", curve);
  if (io::parse_base(c.value("base", "Q")) == 0) return emit_doc(io::embedding_json(embed(io::parse_curve_q(c))));
  return emit_doc(io::embedding_json(embed(io::parse_curve_ff(c))));
}

int cmd_sunits(const std::string& s, int bound, const std::string& equation, const std::string& base) {
  g_bounds["bound"] = bound;
  int q = io::parse_base(base);
  std::vector<std::string> ab;
  if (!equation.empty()) {
    std::stringstream ss(equation);
    std::string item;
    while (std::getline(ss, item, ',')) ab.push_back(item);
    if (ab.size() != 2) throw ParseError("--equation expects a,b");
  }
  json out = {{"base", base}, {"bound", bound}};
  if (q == 0) {
    auto S = io::parse_places(s);
    auto primes = finite_primes(S);
    out["S"] = io::places_json(S);
    if (ab.empty()) {
      json a = json::array();
      for (const auto& u : enumerate_sunits(primes, bound)) a.push_back(u.str());
      out["sunits"] = a;
    } else {
      auto r = solve_unit_equation(primes, bound, BigRational::parse(ab[0]), BigRational::parse(ab[1]));
      json sols = json::array();
      for (const auto& [u, w] : r.solutions) sols.push_back({u.str(), w.str()});
      out["equation"] = {{"a", ab[0]}, {"b", ab[1]}};
      out["solutions"] = sols;
      out["bound_stable"] = r.bound_stable;
    }
  } else {
    const FqField& F = FqField::get(q);
    auto S = io::parse_ff_places(F, s);
    out["S"] = io::places_json(S);
    if (ab.empty()) {
      json a = json::array();
      for (const auto& u : enumerate_ff_sunits(F, S, bound)) a.push_back(u.str());
      out["sunits"] = a;
    } else {
      auto r = solve_ff_unit_equation(F, S, bound, RatFunc::parse(F, ab[0]), RatFunc::parse(F, ab[1]));
      json sols = json::array();
      for (const auto& [u, w] : r.solutions) sols.push_back({u.str(), w.str()});
      out["equation"] = {{"a", ab[0]}, {"b", ab[1]}};
      out["solutions"] = sols;
      out["bound_stable"] = r.bound_stable;
    }
  }
  return emit_doc(out);
}

int cmd_bm_eval(const std::string& point, const std::string& character, const std::optional<std::string>& off) {
  AdelicPoint x = io::parse_point(load("point", point));
  CharacterTuple xi = io::parse_tuple(load("character", character));
  if (static_cast<int>(xi.size()) != x.rank()) throw InvalidArgument("character tuple length differs from torus rank");
  QmodZ v;
  json out = {{"tuple", io::tuple_json(xi)}};
  if (off) {
    auto S = io::parse_places(*off);
    auto omit = detail::omit_set(x, S);
    for (int j = 0; j < x.rank(); ++j) v += pair_coordinate(x, j, xi[static_cast<std::size_t>(j)], omit, true);
    out["omitted"] = io::places_json(omit);
    out["contributions"] = io::contributions_json(x, xi, omit);
  } else {
    v = bm_pair(x, xi);
    out["omitted"] = io::places_json(x.excluded());
    out["contributions"] = io::contributions_json(x, xi, x.excluded());
  }
  out["value"] = v.str();
  return emit_doc(out);
}

int cmd_survivors(const std::string& point, const std::string& s, std::int64_t M) {
  g_bounds["conductor_max"] = M;
  AdelicPoint x = io::parse_point(load("point", point));
  auto S = io::parse_places(s);
  try {
    std::string kind;
    json p = survival_payload(x, S, M, survives(x, S, M), &kind);
    return emit(verdict(kind, p));
  } catch (const InsufficientPrecision& e) {
    return emit(inconclusive(e.what()));
  }
}

int cmd_curve_survivors(const std::string& curve, const std::string& data, const std::string& s, std::int64_t M) {
  g_bounds["conductor_max"] = M;
  auto emb = embed(io::parse_curve_q(load("curve", curve)));
  CurveData d = io::parse_curve_data(load("data", data));
  auto S = io::parse_places(s);
  AdelicPoint x = to_torus(emb, d);
  try {
    auto r = curve_survivors(emb, S, M, d);
    std::string kind;
    json p = survival_payload(x, S, M, r.verdict, &kind);
    p["curve"] = io::curve_json(emb.curve());
    p["curve_data"] = io::curve_data_json(d);
    if (kind == "Obstructed") p["pulled_back"] = r.pulled_back;
    return emit(verdict(kind, p));
  } catch (const InsufficientPrecision& e) {
    return emit(inconclusive(e.what()));
  }
}

int cmd_dilate(const std::string& model, std::int64_t p, const std::string& center) {
  AffineModel m = io::parse_model(load("model", model));
  std::vector<BigInt> c;
  for (auto x : parse_int_list(center, ',')) c.push_back(BigInt(x));
  return emit_doc(io::model_json(dilate(m, p, c)));
}

int cmd_model_for(const std::string& curve, const std::string& congruences, const std::string& s, bool monic) {
  auto emb = embed(io::parse_curve_q(load("curve", curve)));
  auto conds = io::parse_congruences(load("congruences", congruences));
  return emit_doc(io::model_json(model_for_congruences(emb, conds, io::parse_places(s), monic)));
}

std::vector<Place> model_places(const AffineModel& m, const std::optional<std::string>& s) {
  if (s) return io::parse_places(*s);
  std::vector<Place> S{Place::real()};
  for (auto p : m.inverted()) S.push_back(Place::prime(p));
  std::sort(S.begin(), S.end());
  return S;
}

int cmd_integral_points(const std::string& model, const std::string& height, const std::optional<std::string>& s,
                        std::optional<int> exponent_bound) {
  AffineModel m = io::parse_model(load("model", model));
  BigInt H = io::parse_z(json(height));
  auto S = model_places(m, s);
  auto r = integral_points(m, S, H, exponent_bound);
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(io::integral_point_json(p));
  return emit_doc({{"S", io::places_json(S)},
                   {"height", io::int_or_str(H)},
                   {"exponent_bound", r.exponent_bound},
                   {"bound_stable", r.bound_stable},
                   {"points", pts}});
}

int cmd_verify_sap(const std::string& model, std::int64_t M, const std::string& height,
                   const std::optional<std::string>& s, std::size_t max_tuples) {
  AffineModel m = io::parse_model(load("model", model));
  BigInt H = io::parse_z(json(height));
  g_bounds["conductor_max"] = M;
  g_bounds["height"] = io::int_or_str(H);
  g_bounds["max_tuples"] = max_tuples;
  auto S = model_places(m, s);
  auto v = verify_sap(m, S, M, H, max_tuples);
  json p = io::sap_cert(m, S, v);
  switch (v.kind) {
    case SapVerdict::Kind::IntegralPointFound: return emit(verdict("IntegralPointFound", p));
    case SapVerdict::Kind::ObstructionFound: return emit(verdict("Obstructed", p));
    case SapVerdict::Kind::EmptyLocalPoints: return emit(verdict("EmptyLocalPoints", p));
    default: return emit(verdict("Inconclusive", p));
  }
}

std::string membership_kind(MembershipVerdict::Kind k) {
  switch (k) {
    case MembershipVerdict::Kind::Member: return "Member";
    case MembershipVerdict::Kind::Excluded: return "Excluded";
    default: return "Inconclusive";
  }
}

int cmd_sieve(const std::string& point, const std::string& subscheme, const std::string& schedule,
              std::int64_t prime_max, const std::string& s) {
  AdelicPoint x = io::parse_point(load("point", point));
  FiniteSubscheme Z = io::parse_subscheme(load("subscheme", subscheme));
  auto S = io::parse_places(s);
  SieveParams sp;
  sp.schedule = parse_int_list(schedule, ',');
  sp.prime_bound = prime_max;
  g_bounds["n_schedule"] = sp.schedule;
  g_bounds["prime_max"] = prime_max;
  auto v = decide_membership(x, Z, S, sp);
  json p = io::sieve_cert(x, Z, S, v);
  if (v.kind == MembershipVerdict::Kind::Inconclusive) {
    p["type"] = "none";
    p["reason"] = v.reason;
  }
  return emit(verdict(membership_kind(v.kind), p));
}

int cmd_hv(const std::string& curve, const std::string& data, const std::string& s, const std::string& f,
           const std::string& bounds) {
  auto X = io::parse_curve_q(load("curve", curve));
  CurveData d = io::parse_curve_data(load("data", data));
  auto S = io::parse_places(s);
  auto u = UnitFunction::parse(f);
  auto kv = parse_kv(bounds);
  QuasiFiniteParams qp;
  qp.M = kv_int(kv, "conductor_max", qp.M);
  qp.H = kv_int(kv, "height", qp.H);
  qp.sieve.prime_bound = kv_int(kv, "prime_max", qp.sieve.prime_bound);
  if (kv.count("n_schedule")) qp.sieve.schedule = parse_int_list(kv["n_schedule"], ':');
  for (const auto& [k, v] : kv)
    if (k != "conductor_max" && k != "height" && k != "prime_max" && k != "n_schedule")
      throw ParseError("unknown bound '" + k + "'");
  g_bounds = {{"conductor_max", qp.M}, {"height", qp.H}, {"prime_max", qp.sieve.prime_bound},
              {"n_schedule", qp.sieve.schedule}};

  auto [kind, p] = io::hv_chain(X, u, d, S, qp);
  return emit(verdict(kind, p));
}

int cmd_ff_survivors(const std::string& base, const std::string& data, const std::string& bounds,
                     const std::string& s) {
  const FqField& F = FqField::get(io::parse_base(base) == 0 ? throw ParseError("ff-survivors needs base F<q>t")
                                                            : io::parse_base(base));
  json dj = load("data", data);
  FFBounds b;
  auto kv = parse_kv(bounds);
  b.n_max = static_cast<int>(kv_int(kv, "n_max", b.n_max));
  b.f_degree = static_cast<int>(kv_int(kv, "f_degree", b.f_degree));
  if (kv.count("extra_f")) {
    std::stringstream ss(kv["extra_f"]);
    std::string item;
    while (std::getline(ss, item, ':'))
      if (!item.empty()) b.extra_f.push_back(RatFunc::parse(F, item));
  }
  for (const auto& [k, v] : kv)
    if (k != "n_max" && k != "f_degree" && k != "extra_f") throw ParseError("unknown bound '" + k + "'");
  g_bounds = io::ff_bounds_json(b);
  auto S = io::parse_ff_places(F, s);

  std::optional<FFAdelicPoint> x;
  json curve;
  if (dj.contains("curve")) {
    json cj = dj["curve"];
    if (!cj.contains("base")) cj["base"] = base;
    auto emb = embed(io::parse_curve_ff(cj));
    if (emb.curve().basepoint().field().q() != F.q()) throw ParseError("curve base differs from --base");
    x = ff_to_torus(emb, io::parse_ff_curve_data(F, dj));
    curve = io::curve_json(emb.curve());
  } else {
    json pj = dj;
    if (!pj.contains("base")) pj["base"] = base;
    x = io::parse_ff_point(pj);
    if (x->field().q() != F.q()) throw ParseError("point base differs from --base");
  }
  try {
    auto v = ff_survives(*x, S, b);
    json p;
    std::string kind;
    if (auto* ob = std::get_if<FFObstructed>(&v)) {
      p = io::ff_obstruction_cert(*x, S, *ob);
      kind = "Obstructed";
    } else {
      p = io::ff_survival_cert(*x, S, b);
      kind = "SurvivesUpTo";
    }
    if (!curve.is_null()) p["curve"] = curve;
    return emit(verdict(kind, p));
  } catch (const InsufficientPrecision& e) {
    return emit(inconclusive(e.what()));
  }
}

int cmd_verify_certificate(const std::string& cert) {
  json c = json::parse(slurp(cert));
  afcheck::Result r;
  if (c.contains("kind")) {
    r = afcheck::check(c);
  } else {
    try {
      r = {true, afcheck::check_payload(c)};
    } catch (const std::exception& e) {
      r = {false, e.what()};
    }
  }
  std::cout << (r.ok ? "pass: " : "fail: ") << r.message << "\n";
  return r.ok ? 0 : 1;
}

int cmd_selftest(std::optional<std::uint64_t> seed, const std::optional<std::string>& config) {
  suite::Config cfg;
  if (config) cfg = suite::Config::parse(slurp(*config));
  if (seed) cfg.seed = *seed;
  json report = suite::run_all(cfg);
  std::cout << io::dump(report);
  return report.at("pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brauer-Manin tools for split tori and hyperbolic rational curves"};
  app.require_subcommand(1);

  std::string curve, data, point, character, model, congruences, subscheme, cert, bounds, f, center, schedule = "2,3,5,4,6";
  std::string s = "inf", base = "Q", equation, height = "100";
  std::optional<std::string> off, s_opt, config;
  std::int64_t M = 50, prime = 0, prime_max = 10000;
  int bound = 10;
  std::optional<int> exponent_bound;
  std::size_t max_tuples = 200000;
  bool monic = false;
  std::optional<std::uint64_t> seed;

  auto* embed_c = app.add_subcommand("embed", "torus embedding of a hyperbolic rational curve");
  embed_c->add_option("--curve", curve, "curve JSON")->required();

  auto* sunits_c = app.add_subcommand("sunits", "S-units with bounded exponents, or unit-equation solutions");
  sunits_c->add_option("--s", s, "places, e.g. 2,3 or t,t+1,inf")->required();
  sunits_c->add_option("--bound", bound, "exponent bound")->required();
  sunits_c->add_option("--equation", equation, "a,b for a*u + b*w = 1");
  sunits_c->add_option("--base", base, "Q or F<q>t");

  auto* bm_c = app.add_subcommand("bm-eval", "pairing of a point with a character tuple");
  bm_c->add_option("--point", point)->required();
  bm_c->add_option("--character", character)->required();
  bm_c->add_option("--off", off, "omit these places from the sum");

  auto* surv_c = app.add_subcommand("survivors", "B_{1,S} survival of a torus point");
  surv_c->add_option("--point", point)->required();
  surv_c->add_option("--s", s);
  surv_c->add_option("--conductor-max", M);

  auto* csurv_c = app.add_subcommand("curve-survivors", "survival of curve data pushed to the torus");
  csurv_c->add_option("--curve", curve)->required();
  csurv_c->add_option("--data", data)->required();
  csurv_c->add_option("--s", s);
  csurv_c->add_option("--conductor-max", M);

  auto* dil_c = app.add_subcommand("dilate", "dilatation of an integral model at a point mod p");
  dil_c->add_option("--model", model)->required();
  dil_c->add_option("--prime", prime)->required();
  dil_c->add_option("--center", center, "comma-separated residues")->required();

  auto* mf_c = app.add_subcommand("model-for", "integral model cut out by congruence conditions");
  mf_c->add_option("--curve", curve)->required();
  mf_c->add_option("--congruences", congruences)->required();
  mf_c->add_option("--s", s);
  mf_c->add_flag("--monic", monic);

  auto* ip_c = app.add_subcommand("integral-points", "S-integral points of a curve model");
  ip_c->add_option("--model", model)->required();
  ip_c->add_option("--height", height)->required();
  ip_c->add_option("--s", s_opt);
  ip_c->add_option("--exponent-bound", exponent_bound);

  auto* sap_c = app.add_subcommand("verify-sap", "integral point, or an obstruction on the model's adelic points");
  sap_c->add_option("--model", model)->required();
  sap_c->add_option("--conductor-max", M);
  sap_c->add_option("--height", height)->required();
  sap_c->add_option("--s", s_opt);
  sap_c->add_option("--max-tuples", max_tuples);

  auto* sieve_c = app.add_subcommand("sieve", "membership of a torus point in a finite subscheme");
  sieve_c->add_option("--point", point)->required();
  sieve_c->add_option("--subscheme", subscheme)->required();
  sieve_c->add_option("--n-schedule", schedule);
  sieve_c->add_option("--prime-max", prime_max);
  sieve_c->add_option("--s", s);

  auto* hv_c = app.add_subcommand("hv", "quasi-finite transfer along a unit f");
  hv_c->add_option("--curve", curve)->required();
  hv_c->add_option("--data", data)->required();
  hv_c->add_option("--s", s);
  hv_c->add_option("--f", f)->required();
  hv_c->add_option("--bounds", bounds, "conductor_max=..,height=..,prime_max=..,n_schedule=2:3:5");

  auto* ff_c = app.add_subcommand("ff-survivors", "survival over F_q(t)");
  std::string ff_s;
  ff_c->add_option("--base", base)->required();
  ff_c->add_option("--data", data)->required();
  ff_c->add_option("--bounds", bounds, "n_max=..,f_degree=..,extra_f=f1:f2");
  ff_c->add_option("--s", ff_s);

  auto* vc_c = app.add_subcommand("verify-certificate", "re-check a certificate without the library");
  vc_c->add_option("--cert", cert)->required();

  auto* st_c = app.add_subcommand("selftest", "run the property suite");
  st_c->add_option("--seed", seed);
  st_c->add_option("--config", config, "key = value file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    auto* sub = app.get_subcommands().front();
    g_command = sub->get_name();
    if (sub == embed_c) return cmd_embed(curve);
    if (sub == sunits_c) return cmd_sunits(s, bound, equation, base);
    if (sub == bm_c) return cmd_bm_eval(point, character, off);
    if (sub == surv_c) return cmd_survivors(point, s, M);
    if (sub == csurv_c) return cmd_curve_survivors(curve, data, s, M);
    if (sub == dil_c) return cmd_dilate(model, prime, center);
    if (sub == mf_c) return cmd_model_for(curve, congruences, s, monic);
    if (sub == ip_c) return cmd_integral_points(model, height, s_opt, exponent_bound);
    if (sub == sap_c) return cmd_verify_sap(model, M, height, s_opt, max_tuples);
    if (sub == sieve_c) return cmd_sieve(point, subscheme, schedule, prime_max, s);
    if (sub == hv_c) return cmd_hv(curve, data, s, f, bounds);
    if (sub == ff_c) return cmd_ff_survivors(base, data, bounds, ff_s);
    if (sub == vc_c) return cmd_verify_certificate(cert);
    if (sub == st_c) return cmd_selftest(seed, config);
  } catch (const json::exception& e) {
    std::cerr << "adeleforge: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "adeleforge: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
