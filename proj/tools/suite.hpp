#pragma once

// Property suite behind `adeleforge selftest` and the acceptance runner.
// Every check is deterministic given the seed; reports carry counts, never
// timings.

#include <random>
#include <sstream>

#include "adeleforge/json_io.hpp"
#include "checker.hpp"
#include "model_scan.hpp"

namespace suite {

using namespace adeleforge;
using json = nlohmann::json;

struct Config {
  std::uint64_t seed = 1;
  std::map<std::string, std::int64_t> values;

  static const std::map<std::string, std::int64_t>& defaults() {
    static const std::map<std::string, std::int64_t> d = {
        {"product_prime_max", 50}, {"product_exponent", 3}, {"product_conductor", 36}, {"b1s_conductor", 36},
        {"divisors", 20},          {"curve_conductor", 50}, {"scan_models", 10},       {"scan_depth_max", 3},
        {"weil_pairs", 200},       {"ff_degree", 6},        {"hv_conductor", 63},
    };
    return d;
  }

  std::int64_t get(const std::string& k) const {
    auto it = values.find(k);
    return it != values.end() ? it->second : defaults().at(k);
  }

  // "key = value" per line; '#' starts a comment.
  static Config parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      line = line.substr(0, line.find('#'));
      auto eq = line.find('=');
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw ParseError("config line " + std::to_string(n) + ": expected key = value");
      std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
      std::int64_t x;
      try {
        std::size_t used = 0;
        x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::logic_error&) {
        throw ParseError("config line " + std::to_string(n) + ": value of " + k + " is not an integer");
      }
      if (k == "seed") {
        c.seed = static_cast<std::uint64_t>(x);
      } else {
        if (!defaults().count(k)) throw ParseError("config line " + std::to_string(n) + ": unknown key " + k);
        c.values[k] = x;
      }
    }
    return c;
  }

  json to_json() const {
    json j = {{"seed", seed}};
    for (const auto& [k, v] : defaults()) j[k] = get(k);
    return j;
  }
};

inline json item(const std::string& id, const std::string& title, bool pass) {
  return {{"id", id}, {"title", title}, {"pass", pass}};
}

inline const std::vector<Place>& s_inf() {
  static const std::vector<Place> s{Place::real()};
  return s;
}
inline const std::vector<Place>& s_inf2() {
  static const std::vector<Place> s{Place::real(), Place::prime(2)};
  return s;
}

// ---- 1: product formula ----

inline json product_formula(const Config& cfg) {
  auto chars = enumerate_characters(cfg.get("product_conductor"));
  auto primes = primes_up_to(cfg.get("product_prime_max"));
  const int A = static_cast<int>(cfg.get("product_exponent"));
  std::size_t checked = 0, failures = 0, nonzero_terms = 0;
  json first_failure;
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = i; j < primes.size(); ++j)
      for (int a = -A; a <= A; ++a)
        for (int b = -A; b <= A; ++b) {
          if (i == j && b != 0) continue;  // p1 = p2 is the single-prime case
          BigRational q0 = BigRational(primes[i]).pow(a) * BigRational(primes[j]).pow(b);
          for (int s : {1, -1}) {
            BigRational q = s * q0;
            LocalValue x(q);
            for (const auto& chi : chars) {
              std::set<Place> places{Place::real(), Place::prime(primes[i]), Place::prime(primes[j])};
              for (auto p : prime_divisors(chi.modulus())) places.insert(Place::prime(p));
              QmodZ sum;
              for (const auto& v : places) {
                QmodZ c = local_invariant(chi, v, x);
                nonzero_terms += !c.is_zero();
                sum += c;
              }
              ++checked;
              if (!sum.is_zero()) {
                if (!failures) first_failure = {{"character", chi.str()}, {"q", q.str()}, {"sum", sum.str()}};
                ++failures;
              }
            }
          }
        }
  json r = item("1", "product formula over two-prime rationals", failures == 0 && checked > 0);
  r["characters"] = chars.size();
  r["checked"] = checked;
  r["nonzero_local_terms"] = nonzero_terms;
  r["failures"] = failures;
  if (failures) r["first_failure"] = first_failure;
  return r;
}

// ---- 2: B_{1,S} against local sampling ----

inline bool vanishes_by_sampling(const DirichletCharacter& chi, const Place& v) {
  const std::int64_t m = chi.modulus();
  if (v.is_real()) {
    for (int s : {1, -1})
      for (int a = -3; a <= 3; ++a)
        for (std::int64_t u = 1; u <= m; ++u)
          if (!local_invariant(chi, v, BigRational(s * u) * BigRational(3).pow(a)).is_zero()) return false;
    return true;
  }
  const std::int64_t p = v.p();
  std::int64_t pe = p;
  while (m % (pe * p) == 0) pe *= p;
  for (int a = -3; a <= 3; ++a)
    for (std::int64_t u = 1; u < pe * p; ++u)
      if (u % p && !local_invariant(chi, v, BigRational(p).pow(a) * BigRational(u)).is_zero()) return false;
  return true;
}

inline json b1s_criterion(const Config& cfg) {
  auto chars = enumerate_characters(cfg.get("b1s_conductor"));
  std::vector<Place> places{Place::real(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7)};
  std::size_t mismatches = 0, in_b1s_inf = 0, comparisons = 0;
  json first;
  for (const auto& chi : chars) {
    bool inf_ok = is_in_B1S(chi, s_inf());
    in_b1s_inf += inf_ok;
    for (const auto& v : places) {
      bool sampled = vanishes_by_sampling(chi, v);
      bool claimed = is_in_B1S(chi, {v});
      ++comparisons;
      if (v.is_real() && claimed != inf_ok) ++mismatches;
      if (sampled != claimed) {
        if (!mismatches) first = {{"character", chi.str()}, {"place", v.str()}};
        ++mismatches;
      }
    }
  }
  json r = item("2", "B_{1,S} membership agrees with exhaustive local sampling", mismatches == 0);
  r["characters"] = chars.size();
  r["comparisons"] = comparisons;
  r["in_B1S_inf"] = in_b1s_inf;
  r["mismatches"] = mismatches;
  if (mismatches) r["first_mismatch"] = first;
  return r;
}

// ---- 3: embedding soundness ----

inline json embedding_soundness(const Config& cfg) {
  using Q = BigRational;
  std::mt19937_64 rng(cfg.seed * 1000 + 3);
  std::uniform_int_distribution<long long> u(-20, 20), dd(1, 6);
  const int n_div = static_cast<int>(cfg.get("divisors"));
  int bad_rank = 0, bad_base = 0, bad_rel = 0, bad_points = 0;
  json sizes = json::array();
  for (int it = 0; it < n_div; ++it) {
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
    HyperbolicRationalCurve<Q> X(D, x0);
    auto e = embed(X);
    sizes.push_back(n);
    bad_rank += e.divisor_rank() != static_cast<int>(n) - 1;
    for (const auto& f : e.functions()) bad_base += f(x0) != Q(1);
    bad_rel += !e.relations_vanish_identically();
    // each relation is N(t)/(t - a) with deg N <= 1; five zeros prove it vanishes
    int zeros = 0;
    for (long long k = 0; zeros < 5; ++k) {
      Q t(k * 11 + 5, 13 + k);
      if (!X.on_curve(t)) continue;
      ++zeros;
      auto x = e.apply(t);
      for (const auto& r : e.relations()) {
        Q s = -r.rhs;
        for (std::size_t j = 0; j < x.size(); ++j) s += r.coeffs[j] * x[j];
        bad_points += !s.is_zero();
      }
    }
  }
  json r = item("3", "embedding soundness on random divisors",
                bad_rank == 0 && bad_base == 0 && bad_rel == 0 && bad_points == 0);
  r["divisors"] = n_div;
  r["divisor_sizes"] = sizes;
  r["rank_failures"] = bad_rank;
  r["basepoint_failures"] = bad_base;
  r["relation_failures"] = bad_rel + bad_points;
  return r;
}

// ---- 4: three-point curve over Z[1/2] ----

inline HyperbolicRationalCurve<BigRational> three_point() {
  return {{BigRational(0), BigRational(1), std::nullopt}, BigRational(2)};
}

inline CurveData deviant_at_7() {
  CurveData d;
  d.constant = BigRational(2);
  d.local.emplace(Place::prime(7), LocalValue(embed_padic(BigRational(3), 7, 3)));
  return d;
}

inline json wrap(const std::string& kind, json payload) { return {{"kind", kind}, {"payload", std::move(payload)}}; }

inline json curve_survival_doc(const TorusEmbedding<BigRational>& emb, const CurveData& d, const std::vector<Place>& S,
                               std::int64_t M, std::string* kind, std::int64_t* conductor) {
  AdelicPoint x = to_torus(emb, d);
  auto r = curve_survivors(emb, S, M, d);
  if (auto* ob = std::get_if<Obstructed>(&r.verdict)) {
    *kind = "Obstructed";
    *conductor = max_conductor(ob->tuple);
    return wrap(*kind, io::torus_obstruction_cert(x, S, *ob));
  }
  *kind = "SurvivesUpTo";
  *conductor = 0;
  return wrap(*kind, io::torus_survival_cert(x, S, M));
}

inline std::vector<json> curve_desk_instance(const Config& cfg) {
  const std::int64_t M = cfg.get("curve_conductor");
  auto X = three_point();
  auto emb = embed(X);
  auto model = clear_denominators(emb, s_inf2());
  auto params = [](const IntegralPointSet& s) {
    std::vector<std::string> out;
    for (const auto& p : s.points) out.push_back(p1_str(p.t));
    return out;
  };
  auto r20 = integral_points(model, s_inf2(), BigInt(1) << 40, 20);
  auto r30 = integral_points(model, s_inf2(), BigInt(1) << 40, 30);
  const std::vector<std::string> want{"-1", "1/2", "2"};
  json a = item("4a", "integral points of P^1 - {0,1,inf} over Z[1/2]", params(r20) == want && params(r30) == want);
  a["points_B20"] = params(r20);
  a["points_B30"] = params(r30);

  bool all_survive = true;
  json per = json::array();
  for (const auto& p : r20.points) {
    CurveData d;
    d.constant = *p.t;
    std::string kind;
    std::int64_t cond;
    json doc = curve_survival_doc(emb, d, s_inf2(), M, &kind, &cond);
    auto chk = afcheck::check(doc);
    all_survive = all_survive && kind == "SurvivesUpTo" && chk.ok;
    per.push_back({{"t", p1_str(p.t)}, {"verdict", kind}, {"checker", chk.ok}});
  }
  json b = item("4b", "integral points survive every B_{1,S} tuple of bounded conductor", all_survive && !per.empty());
  b["conductor_max"] = M;
  b["points"] = per;

  // the deviant point under S = {inf, 2}, as stated, then the diagnostics
  std::string kind;
  std::int64_t cond;
  json doc = curve_survival_doc(emb, deviant_at_7(), s_inf2(), M, &kind, &cond);
  auto chk = afcheck::check(doc);
  json c = item("4c", "deviant point t_7 = 3 obstructed with a conductor-7 certificate at S = {inf,2}",
                kind == "Obstructed" && cond == 7 && chk.ok);
  c["verdict"] = kind;
  c["conductor"] = cond;
  c["checker"] = chk.ok;
  json diag = json::array();
  for (auto [S, MM] : {std::pair{s_inf(), std::int64_t{7}}, std::pair{s_inf2(), std::int64_t{63}}}) {
    std::string k;
    std::int64_t cc;
    json dd = curve_survival_doc(emb, deviant_at_7(), S, MM, &k, &cc);
    diag.push_back({{"S", io::places_json(S)},
                    {"conductor_max", MM},
                    {"verdict", k},
                    {"conductor", cc},
                    {"checker", afcheck::check(dd).ok}});
  }
  c["diagnostics"] = diag;
  c["known_defect"] =
      "B_{1,S} for S = {inf,2} needs chi(2) = 0; no such character has 7 | conductor <= 50 (first is 63)";
  return {a, b, c};
}

// ---- 5: Selmer presentations ----

inline json selmer_presentations(const Config&) {
  struct Case {
    std::vector<Place> S1;
    std::int64_t N;
  };
  std::vector<Case> cases{{{Place::real(), Place::prime(2), Place::prime(3)}, 5},
                          {{Place::real(), Place::prime(2)}, 2},
                          {{Place::real(), Place::prime(2), Place::prime(3), Place::prime(5)}, 3}};
  bool ok = true;
  json rows = json::array();
  for (const auto& c : cases) {
    auto s = selmer_group(s_inf(), c.S1, c.N);
    // closed form: Z/gcd(2,N) x (Z/N)^{#finite primes}
    std::int64_t expect = std::gcd<std::int64_t>(2, c.N);
    for (std::size_t i = 0; i < finite_primes(c.S1).size(); ++i) expect *= c.N;
    ok = ok && s.agree && s.order() == expect;
    rows.push_back({{"S1", io::places_json(c.S1)},
                    {"N", c.N},
                    {"unit_presentation", s.unit_presentation},
                    {"sampled_presentation", s.sampled_presentation},
                    {"order", s.order()}});
  }
  ok = ok && rows[0]["order"] == 25;
  json r = item("5", "Selmer unit-group and sampled presentations agree", ok);
  r["cases"] = rows;
  return r;
}

// ---- 6: intersection sieve ----

inline json sieve_instance(const Config&) {
  FiniteSubscheme Z(1, {{BigRational(1)}, {BigRational(4)}});
  auto x3 = AdelicPoint::diagonal({BigRational(3)});
  SieveParams cubic;
  cubic.schedule = {3};
  auto e = decide_membership(x3, Z, s_inf(), cubic);
  json ex = wrap(e.kind == MembershipVerdict::Kind::Excluded ? "Excluded" : "Inconclusive",
                 io::sieve_cert(x3, Z, s_inf(), e));
  auto chk = afcheck::check(ex);
  bool excl = e.kind == MembershipVerdict::Kind::Excluded && e.separation->N == 3 && e.separation->v0 == 13 && chk.ok;

  auto d = decide_membership(x3, Z, s_inf());
  auto chk_d = afcheck::check(wrap("Excluded", io::sieve_cert(x3, Z, s_inf(), d)));

  auto x4 = AdelicPoint::diagonal({BigRational(4)});
  auto m = decide_membership(x4, Z, s_inf());
  auto chk_m = afcheck::check(wrap("Member", io::sieve_cert(x4, Z, s_inf(), m)));
  bool member = m.kind == MembershipVerdict::Kind::Member && Z.points()[m.z_index][0] == BigRational(4) && chk_m.ok;

  std::vector<Place> S1{Place::real(), Place::prime(2), Place::prime(3)};
  auto neg = verify_constants(S1, {2, 3, 4, 5, 6, 8}, 1, 2, 2000);
  bool neg_ok = !neg.ok() && !neg.checks.back().ok && neg.checks.back().N == 8 && neg.checks.back().witness;
  for (std::size_t i = 0; i + 1 < neg.checks.size(); ++i) neg_ok = neg_ok && neg.checks[i].ok;
  auto shipped = verify_constants(S1, {1, 2, 3, 4, 5, 6}, 8, 2, 2000);

  json r = item("6", "sieve on Z = {1,4}: exclusion, membership, constants", excl && member && neg_ok && shipped.ok());
  r["excluded"] = {{"N", e.separation ? e.separation->N : 0},
                   {"v0", e.separation ? e.separation->v0 : 0},
                   {"checker", chk.ok}};
  r["default_schedule"] = {{"N", d.separation ? d.separation->N : 0},
                           {"v0", d.separation ? d.separation->v0 : 0},
                           {"checker", chk_d.ok}};
  r["member"] = {{"z", Z.points()[m.z_index][0].str()}, {"checker", chk_m.ok}};
  r["h1_negative_control"] = {
      {"fails_at", neg.checks.back().N},
      {"witness", neg.checks.back().witness ? neg.checks.back().witness->str() : ""},
      {"mechanism", neg.checks.back().mechanism}};
  r["shipped_constants_pass"] = shipped.ok();
  return r;
}

// ---- 7: dilatations ----

inline json dilatation_semantics(const Config& cfg) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed * 1000 + 7));
  const int n = static_cast<int>(cfg.get("scan_models"));
  const int dmax = static_cast<int>(cfg.get("scan_depth_max"));
  int mismatches = 0, samples = 0, specializing = 0, compose_fail = 0;
  json models = json::array();
  for (int it = 0; it < n; ++it) {
    auto hs = scan::random_hypersurface(rng);
    int depth = 1 + it % dmax;
    auto r = scan::dilatation_scan(hs, depth, rng);
    mismatches += r.mismatches;
    samples += r.samples;
    specializing += r.specializing;
    models.push_back({{"relation", hs.model.relation_strings()[0]}, {"p", hs.p}, {"depth", depth},
                      {"mismatches", r.mismatches}});

    // two dilatations against the direct depth-2 congruence model
    const auto& g = hs.model.relations()[0];
    std::vector<BigInt> seed(g.nvars());
    for (auto& s : seed) s = BigInt(static_cast<long long>(rng() % 100000));
    auto P = scan::hensel_point(g, hs.p, 4, seed);
    std::vector<BigInt> c1, c2;
    CongruenceCondition cc{hs.p, 2, {}, {}, {}};
    BigInt p2 = BigInt(hs.p) * hs.p;
    for (std::size_t i = 0; i < P.size(); ++i) {
      c1.push_back(big_mod(P[i], BigInt(hs.p)));
      c2.push_back(big_mod((big_mod(P[i], p2) - c1.back()) / hs.p, BigInt(hs.p)));
      cc.residues[hs.model.vars()[i]] = big_mod(P[i], p2);
    }
    auto two = dilate(dilate(hs.model, hs.p, c1), hs.p, c2);
    auto direct = model_for_congruences(hs.model, {cc});
    compose_fail += two.relations() != direct.relations();
  }
  json r = item("7", "dilatation points are the points specializing to the center",
                mismatches == 0 && compose_fail == 0 && samples == 500 * n);
  r["models"] = models;
  r["samples"] = samples;
  r["specializing"] = specializing;
  r["mismatches"] = mismatches;
  r["composition_failures"] = compose_fail;
  return r;
}

// ---- 8: function fields ----

inline RatFunc random_ratfunc(const FqField& F, std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 3), ex(-2, 2), nz(1, F.q() - 1), nfac(1, 3), anyc(0, F.q() - 1);
  RatFunc x = RatFunc::constant(F, static_cast<FqElem>(nz(rng)));
  for (int k = nfac(rng); k > 0; --k) {
    int d = deg(rng);
    std::vector<FqElem> c(static_cast<std::size_t>(d) + 1);
    for (auto& e : c) e = static_cast<FqElem>(anyc(rng));
    c.back() = 1;
    FqPoly g(F, c);
    int e = ex(rng);
    if (g.degree() == 0 || e == 0) continue;
    x = x * RatFunc(g).pow(e);
  }
  return x;
}

// exact data at every place of degree <= 2, at infinity and on the support
inline FFAdelicPoint explicit_point(const std::vector<RatFunc>& q) {
  const FqField& F = q[0].field();
  FFAdelicPoint x(F, static_cast<int>(q.size()));
  std::set<Place> places;
  for (const auto& P : ff_places_up_to(F, 2)) places.insert(P);
  for (const auto& c : q)
    for (const auto& P : ff_support(c)) places.insert(P);
  for (const auto& P : places) x.set_component(P, q);
  return x;
}

inline json function_field_suite(const Config& cfg) {
  const int maxdeg = static_cast<int>(cfg.get("ff_degree"));
  json bases = json::array();
  bool ok = true;
  for (int q : {2, 3}) {
    const FqField& F = FqField::get(q);
    RatFunc t = RatFunc::t(F), one = RatFunc::constant(F, 1);
    std::vector<Place> Su{Place::ff_prime(FqPoly::t(F)), Place::ff_prime(FqPoly::linear(F, 1)), Place::ff_infinity()};
    auto sols = solve_ff_unit_equation(F, Su, 3, one, one, false).solutions;
    auto emb = embed(HyperbolicRationalCurve<RatFunc>({RatFunc::constant(F, 0), one, std::nullopt}, t));
    int survived = 0, failed = 0, deviants = 0, caught = 0, checked_certs = 0, cert_fail = 0;
    for (const auto& [u, w] : sols) {
      if (u.num().degree() > maxdeg || u.den().degree() > maxdeg || u.is_constant()) continue;
      auto x = explicit_point(emb.apply(u));
      auto v = ff_survives(x, {});
      if (std::holds_alternative<FFSurvivesUpTo>(v)) {
        ++survived;
      } else {
        ++failed;
      }
      for (const auto& P : ff_places_up_to(F, q == 2 ? 2 : 1)) {
        if (P.is_ff_infinity() || ff_val_unit(u, P).valuation != 0 || ff_val_unit(u - one, P).valuation != 0) continue;
        // q = 3: flip the residue by -1; q = 2: multiply by a uniformizer
        RatFunc moved = q == 3 ? -u : u * RatFunc(P.pi());
        if (moved == one) continue;
        FFCurveData data;
        data.constant = u;
        data.local[P] = moved;
        ++deviants;
        FFAdelicPoint y = ff_to_torus(emb, data);
        auto dv = ff_survives(y, {});
        if (auto* ob = std::get_if<FFObstructed>(&dv)) {
          ++caught;
          if (checked_certs < 8) {
            ++checked_certs;
            cert_fail += !afcheck::check(wrap("Obstructed", io::ff_obstruction_cert(y, {}, *ob))).ok;
          }
        }
      }
    }
    bool base_ok = survived > 0 && failed == 0 && caught > 0 && cert_fail == 0;
    ok = ok && base_ok;
    bases.push_back({{"base", io::base_str(q)},
                     {"solutions_tested", survived + failed},
                     {"survived", survived},
                     {"deviants", deviants},
                     {"deviants_obstructed", caught},
                     {"certificates_checked", checked_certs},
                     {"certificate_failures", cert_fail}});
  }

  // Weil reciprocity: exact on random pairs
  std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed * 1000 + 8));
  const int pairs = static_cast<int>(cfg.get("weil_pairs"));
  const int qs[] = {2, 3, 4, 5, 7};
  int weil_fail = 0, sums = 0, nontrivial = 0;
  for (int i = 0; i < pairs; ++i) {
    const FqField& F = FqField::get(qs[i % 5]);
    RatFunc x = random_ratfunc(F, rng), f = random_ratfunc(F, rng);
    weil_fail += ff_norm_product(x, f) != 1u;
    for (int N = 2; N <= F.q() - 1; ++N) {
      if ((F.q() - 1) % N) continue;
      auto chi = FFCharacter::kummer(N, f);
      std::set<Place> seen{Place::ff_infinity()};
      for (const auto& P : ff_support(x)) seen.insert(P);
      for (const auto& P : ff_support(f)) seen.insert(P);
      QmodZ s;
      bool any = false;
      for (const auto& P : seen) {
        QmodZ v = ff_local_invariant(chi, P, x);
        any = any || !v.is_zero();
        s += v;
      }
      ++sums;
      nontrivial += any;
      weil_fail += !s.is_zero();
    }
  }
  ok = ok && weil_fail == 0;
  json r = item("8", "function-field survivors, Weil reciprocity, deviant families", ok);
  r["bases"] = bases;
  r["weil_pairs"] = pairs;
  r["kummer_sums"] = sums;
  r["nontrivial_sums"] = nontrivial;
  r["weil_failures"] = weil_fail;
  return r;
}

// ---- 9: quasi-finite pipeline ----

inline BigInt cube_root_of_unity(std::int64_t p, int k) {
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

struct HvScenario {
  std::string name, f, expect;
  CurveData data;
  std::int64_t M;
};

inline std::vector<HvScenario> hv_scenarios(const Config& cfg) {
  CurveData member;
  member.constant = BigRational(2);
  for (std::int64_t p : {3, 5, 7, 11}) member.local.emplace(Place::prime(p), LocalValue(embed_padic(BigRational(2), p, 3)));
  CurveData sieve;
  sieve.constant = BigRational(2);
  for (std::int64_t v : {7, 13, 19, 31, 37, 43})
    sieve.local.emplace(Place::prime(v), LocalValue(PAdicApprox(v, 0, 2 * cube_root_of_unity(v, 3), 3)));
  return {{"member", "t", "Member", member, 50},
          {"character-obstructed", "t", "Excluded", deviant_at_7(), cfg.get("hv_conductor")},
          {"sieve-excluded", "t^3", "Excluded", sieve, 50}};
}

inline json pipeline(const Config& cfg) {
  bool ok = true;
  json rows = json::array();
  for (const auto& sc : hv_scenarios(cfg)) {
    QuasiFiniteParams qp;
    qp.M = sc.M;
    auto [kind, payload] = io::hv_chain(three_point(), UnitFunction::parse(sc.f), sc.data, s_inf2(), qp);
    auto chk = afcheck::check(wrap(kind, payload));
    bool pass = kind == sc.expect && chk.ok;
    ok = ok && pass;
    rows.push_back(
        {{"scenario", sc.name}, {"verdict", kind}, {"stage", payload["stage"]}, {"checker", chk.ok}, {"expected", sc.expect}});
  }
  json r = item("9", "quasi-finite pipeline scenarios", ok);
  r["scenarios"] = rows;
  return r;
}

// ---- all ----

inline std::vector<std::string> known_defects() { return {"4c"}; }

inline json run_all(const Config& cfg) {
  json items = json::array();
  items.push_back(product_formula(cfg));
  items.push_back(b1s_criterion(cfg));
  items.push_back(embedding_soundness(cfg));
  for (auto& j : curve_desk_instance(cfg)) items.push_back(j);
  items.push_back(selmer_presentations(cfg));
  items.push_back(sieve_instance(cfg));
  items.push_back(dilatation_semantics(cfg));
  items.push_back(function_field_suite(cfg));
  items.push_back(pipeline(cfg));
  bool pass = true;
  auto kd = known_defects();
  for (const auto& it : items)
    if (!it["pass"].get<bool>() && std::find(kd.begin(), kd.end(), it["id"].get<std::string>()) == kd.end()) pass = false;
  return {{"config", cfg.to_json()}, {"version", io::kVersion}, {"criteria", items}, {"known_defects", kd}, {"pass", pass}};
}

}  // namespace suite
