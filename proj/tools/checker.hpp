#pragma once

// Standalone certificate checker. Deliberately shares no code with the
// library: it re-derives characters, local invariants, tame symbols and model
// points from first principles using only Boost integers and the JSON reader.

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace afcheck {

using json = nlohmann::json;
using Int = boost::multiprecision::cpp_int;
using i64 = std::int64_t;

struct Fail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool c, const std::string& msg) {
  if (!c) throw Fail(msg);
}

// ---- integers and rationals ----

inline i64 md(i64 a, i64 m) {
  a %= m;
  return a < 0 ? a + m : a;
}
inline i64 mul(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<__int128>(a) * b % m); }
inline i64 pw(i64 a, std::uint64_t e, i64 m) {
  i64 r = 1 % m;
  a = md(a, m);
  while (e) {
    if (e & 1) r = mul(r, a, m);
    a = mul(a, a, m);
    e >>= 1;
  }
  return r;
}
inline i64 gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
inline i64 inv(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = md(a, m);
  i64 r0 = g;
  while (r) {
    i64 q = r0 / r;
    std::tie(r0, r) = std::make_pair(r, r0 - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  require(r0 == 1, "non-invertible residue");
  return md(x, m);
}
inline bool prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}
inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  n = n < 0 ? -n : n;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}
inline std::vector<i64> prime_factors(Int n) {
  std::vector<i64> out;
  if (n < 0) n = -n;
  for (i64 d = 2; Int(d) * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
    require(d < 100000000, "integer too large to factor by trial division");
  }
  if (n > 1) {
    require(n <= Int(std::numeric_limits<i64>::max()), "prime factor out of range");
    out.push_back(static_cast<i64>(n));
  }
  return out;
}

struct Rat {
  Int n = 0, d = 1;
  Rat() = default;
  Rat(Int a, Int b = 1) : n(std::move(a)), d(std::move(b)) { norm(); }
  void norm() {
    require(d != 0, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Int g = boost::multiprecision::gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
  }
  bool zero() const { return n == 0; }
  friend Rat operator+(const Rat& a, const Rat& b) { return {a.n * b.d + b.n * a.d, a.d * b.d}; }
  friend Rat operator-(const Rat& a, const Rat& b) { return {a.n * b.d - b.n * a.d, a.d * b.d}; }
  friend Rat operator*(const Rat& a, const Rat& b) { return {a.n * b.n, a.d * b.d}; }
  friend Rat operator/(const Rat& a, const Rat& b) {
    require(b.n != 0, "division by zero");
    return {a.n * b.d, a.d * b.n};
  }
  friend bool operator==(const Rat& a, const Rat& b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.n * b.d < b.n * a.d; }
  std::string str() const { return d == 1 ? n.str() : n.str() + "/" + d.str(); }
};

inline Int parse_int(const std::string& s) {
  require(!s.empty(), "empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  require(i < s.size(), "bad integer '" + s + "'");
  for (std::size_t k = i; k < s.size(); ++k) require(std::isdigit(static_cast<unsigned char>(s[k])), "bad integer '" + s + "'");
  Int v(s.substr(i));
  return s[0] == '-' ? Int(-v) : v;
}
inline Rat rat(const json& j) {
  if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
  require(j.is_string(), "expected a rational, got " + j.dump());
  std::string s = j.get<std::string>();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  auto k = s.find('/');
  if (k == std::string::npos) return Rat(parse_int(s));
  return Rat(parse_int(s.substr(0, k)), parse_int(s.substr(k + 1)));
}
inline i64 small(const Int& x) {
  require(x <= Int(std::numeric_limits<i64>::max()) && x >= Int(std::numeric_limits<i64>::min()), "integer out of range");
  return static_cast<i64>(x);
}
inline i64 ival(const json& j) {
  if (j.is_number_integer()) return j.get<i64>();
  Rat r = rat(j);
  require(r.d == 1, "expected an integer");
  return small(r.n);
}
inline int vp(Int n, i64 p) {
  require(n != 0, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}
// p-adic valuation and unit part residue mod p^e of a nonzero rational.
inline std::pair<int, i64> val_unit(const Rat& x, i64 p, int e) {
  int a = vp(x.n, p), b = vp(x.d, p);
  Int pa = 1, pb = 1;
  for (int i = 0; i < a; ++i) pa *= p;
  for (int i = 0; i < b; ++i) pb *= p;
  i64 pe = 1;
  for (int i = 0; i < e; ++i) pe *= p;
  Int un = x.n / pa, ud = x.d / pb;
  i64 r = mul(md(small(un % pe), pe), inv(md(small(ud % pe), pe), pe), pe);
  return {a - b, r};
}
inline i64 residue(const Rat& x, i64 m) {
  require(x.d % m != 0, "denominator divisible by modulus");
  return mul(md(small(x.n % m), m), inv(md(small(x.d % m), m), m), m);
}

// Q/Z elements as reduced fractions in [0, 1).
struct QZ {
  i64 n = 0, d = 1;
  QZ() = default;
  QZ(i64 a, i64 b) : n(md(a, b)), d(b) {
    i64 g = gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
  }
  static QZ parse(const json& j) {
    Rat r = rat(j);
    return QZ(small(r.n % r.d), small(r.d));
  }
  friend QZ operator+(QZ a, QZ b) {
    i64 l = a.d / gcd(a.d, b.d) * b.d;
    return QZ(a.n * (l / a.d) + b.n * (l / b.d), l);
  }
  friend QZ operator*(i64 k, QZ a) { return QZ(mul(md(k, a.d), a.n, a.d), a.d); }
  bool zero() const { return n == 0; }
  friend bool operator==(QZ a, QZ b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(QZ a, QZ b) { return static_cast<__int128>(a.n) * b.d < static_cast<__int128>(b.n) * a.d; }
  std::string str() const { return n == 0 ? "0" : std::to_string(n) + "/" + std::to_string(d); }
};

// ---- Dirichlet characters as full tables ----

struct Char {
  i64 m = 1;
  std::vector<QZ> t{QZ()};  // indexed by residue; non-units unused
  QZ operator()(i64 a) const {
    a = md(a, m);
    require(gcd(a, m) == 1, "character evaluated at a non-unit");
    return t[static_cast<std::size_t>(a)];
  }
  bool trivial() const { return m == 1; }
  bool odd() const { return m > 1 && !(*this)(-1).zero(); }
};

inline i64 crt(i64 a, i64 m, i64 b, i64 n) {  // coprime m, n
  i64 k = mul(md(b - a, n), inv(md(m, n), n), n);
  return md(a + m * k, m * n);
}

// Smallest f | m such that chi is trivial on units = 1 mod f.
inline i64 conductor(const Char& c) {
  for (i64 f = 1; f <= c.m; ++f) {
    if (c.m % f) continue;
    bool ok = true;
    for (i64 a = 1 % f; a < c.m && ok; a += f)
      if (gcd(a, c.m) == 1 && !c.t[static_cast<std::size_t>(a)].zero()) ok = false;
    if (ok) return f;
  }
  return c.m;
}

inline Char parse_char(const json& j) {
  require(j.is_object() && j.contains("modulus") && j.contains("values"), "character needs modulus and values");
  Char c;
  c.m = j["modulus"].get<i64>();
  require(c.m >= 1, "modulus must be positive");
  c.t.assign(static_cast<std::size_t>(c.m), QZ());
  std::vector<std::pair<i64, QZ>> g;
  for (const auto& e : j["values"]) {
    require(e.is_array() && e.size() == 2, "character values are [generator, value] pairs");
    i64 a = md(e[0].get<i64>(), c.m);
    require(gcd(a, c.m) == 1, "generator is not a unit");
    g.emplace_back(a, QZ::parse(e[1]));
  }
  std::vector<char> seen(static_cast<std::size_t>(c.m), 0);
  std::vector<i64> todo{1 % c.m};
  seen[static_cast<std::size_t>(1 % c.m)] = 1;
  while (!todo.empty()) {
    i64 a = todo.back();
    todo.pop_back();
    for (auto& [x, v] : g) {
      i64 b = mul(a, x, c.m);
      QZ vb = c.t[static_cast<std::size_t>(a)] + v;
      if (seen[static_cast<std::size_t>(b)]) {
        require(c.t[static_cast<std::size_t>(b)] == vb, "generator images are not a homomorphism");
      } else {
        seen[static_cast<std::size_t>(b)] = 1;
        c.t[static_cast<std::size_t>(b)] = vb;
        todo.push_back(b);
      }
    }
  }
  for (i64 a = 0; a < c.m; ++a)
    require(gcd(a, c.m) != 1 || seen[static_cast<std::size_t>(a)], "generators do not generate the unit group");
  if (c.m == 1) c.t = {QZ()};
  require(conductor(c) == c.m, "character mod " + std::to_string(c.m) + " is not primitive");
  return c;
}

// Every primitive character of conductor exactly m.
inline std::vector<Char> primitive_chars(i64 m) {
  if (m == 1) return {Char{}};
  // generators of (Z/m)^*: per prime power, a generator (or -1 and 5), lifted by CRT
  std::vector<std::pair<i64, i64>> gens;  // (generator, order)
  for (i64 p : prime_factors(m)) {
    i64 pe = 1;
    while (m % (pe * p) == 0) pe *= p;
    i64 rest = m / pe;
    auto lift = [&](i64 x) { return rest == 1 ? md(x, pe) : crt(md(x, pe), pe, 1 % rest, rest); };
    if (p == 2) {
      if (pe >= 4) gens.emplace_back(lift(-1), 2);
      if (pe >= 8) gens.emplace_back(lift(5), pe / 4);
    } else {
      i64 phi = pe / p * (p - 1);
      i64 g = 2;
      for (;; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (i64 q : prime_factors(phi))
          if (pw(g, static_cast<std::uint64_t>(phi / q), pe) == 1) ok = false;
        if (ok) break;
      }
      gens.emplace_back(lift(g), phi);
    }
  }
  std::vector<Char> out;
  std::vector<i64> k(gens.size(), 0);
  while (true) {
    Char c;
    c.m = m;
    c.t.assign(static_cast<std::size_t>(m), QZ());
    // table by exponent vectors
    std::vector<i64> e(gens.size(), 0);
    while (true) {
      i64 a = 1 % m;
      QZ v;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        a = mul(a, pw(gens[i].first, static_cast<std::uint64_t>(e[i]), m), m);
        v = v + QZ(k[i] * e[i], gens[i].second);
      }
      c.t[static_cast<std::size_t>(a)] = v;
      std::size_t i = 0;
      while (i < gens.size() && ++e[i] == gens[i].second) e[i++] = 0;
      if (i == gens.size()) break;
    }
    if (conductor(c) == m) out.push_back(c);
    std::size_t i = 0;
    while (i < k.size() && ++k[i] == gens[i].second) k[i++] = 0;
    if (i == k.size()) break;
  }
  return out;
}

// ---- places and local data over Q ----

struct QPlace {
  i64 p = 0;  // 0 is the real place
  bool real() const { return p == 0; }
  friend bool operator<(QPlace a, QPlace b) { return a.p < b.p; }
  friend bool operator==(QPlace a, QPlace b) { return a.p == b.p; }
  std::string str() const { return p ? std::to_string(p) : "inf"; }
};
inline QPlace qplace(const json& j) {
  std::string s = j.get<std::string>();
  if (s == "inf") return {0};
  i64 p = small(parse_int(s));
  require(prime(p), s + " is not a prime");
  return {p};
}

struct Local {
  enum Kind { Exact, Padic, Sign } kind = Exact;
  Rat x;
  int val = 0;
  i64 unit = 0;
  int prec = 0;
  int sign = 1;
  std::optional<std::pair<Rat, Rat>> interval;
};
inline Local parse_local(const json& j, QPlace v) {
  Local l;
  if (j.is_string() || j.is_number_integer()) {
    l.x = rat(j);
  } else if (j.contains("exact")) {
    l.x = rat(j["exact"]);
  } else if (j.contains("unit")) {
    require(!v.real(), "p-adic datum at the real place");
    l.kind = Local::Padic;
    l.val = j.value("val", 0);
    l.unit = ival(j["unit"][0]);
    l.prec = j["unit"][1].get<int>();
    require(l.prec >= 1 && l.unit % v.p != 0, "bad p-adic datum");
  } else {
    require(j.contains("sign") && v.real(), "unrecognized local datum " + j.dump());
    l.kind = Local::Sign;
    l.sign = j["sign"].get<int>();
    if (j.contains("interval")) l.interval = std::make_pair(rat(j["interval"][0]), rat(j["interval"][1]));
  }
  if (l.kind == Local::Exact) require(!l.x.zero(), "zero coordinate");
  return l;
}

// valuation and unit residue mod p^e
inline std::pair<int, i64> local_val_unit(const Local& l, i64 p, int e) {
  if (l.kind == Local::Exact) return val_unit(l.x, p, e);
  require(l.kind == Local::Padic, "sign datum at a finite place");
  require(l.prec >= e, "precision " + std::to_string(l.prec) + " below the conductor exponent " + std::to_string(e));
  i64 pe = 1;
  for (int i = 0; i < e; ++i) pe *= p;
  return {l.val, md(l.unit, pe)};
}
inline int local_sign(const Local& l) {
  if (l.kind == Local::Exact) return l.x.n < 0 ? -1 : 1;
  require(l.kind == Local::Sign, "p-adic datum at the real place");
  return l.sign;
}

// Local Artin invariant of chi at v on x.
inline QZ inv_at(const Char& c, QPlace v, const Local& x) {
  if (c.trivial()) return {};
  if (v.real()) return c.odd() && local_sign(x) < 0 ? c(-1) : QZ();
  i64 p = v.p;
  if (c.m % p) return static_cast<i64>(local_val_unit(x, p, 0).first) * c(p);
  i64 pe = 1;
  int e = 0;
  while (c.m % (pe * p) == 0) {
    pe *= p;
    ++e;
  }
  i64 rest = c.m / pe;
  auto [a, u] = local_val_unit(x, p, e);
  QZ away = rest == 1 ? QZ() : c(crt(1, pe, md(p, rest), rest));
  i64 ui = inv(u, pe);
  QZ comp = c(rest == 1 ? ui : crt(ui, pe, 1 % rest, rest));
  return static_cast<i64>(a) * away + comp;
}

struct Point {
  int rank = 1;
  std::set<QPlace> excluded;
  std::map<QPlace, std::vector<Local>> comps;
  std::optional<std::vector<Rat>> constant;

  std::optional<Local> value(QPlace v, int j) const {
    auto it = comps.find(v);
    if (it != comps.end()) return it->second[static_cast<std::size_t>(j)];
    if (constant) {
      Local l;
      l.x = (*constant)[static_cast<std::size_t>(j)];
      return l;
    }
    return std::nullopt;
  }
  std::set<QPlace> support(int j) const {
    std::set<QPlace> s;
    for (auto& [v, c] : comps) s.insert(v);
    if (constant) {
      const Rat& c = (*constant)[static_cast<std::size_t>(j)];
      for (i64 p : prime_factors(c.n)) s.insert({p});
      for (i64 p : prime_factors(c.d)) s.insert({p});
    }
    return s;
  }
};

inline Point parse_point(const json& j) {
  Point x;
  x.rank = j.at("rank").get<int>();
  require(x.rank >= 1, "rank must be positive");
  for (const auto& v : j.value("excluded", json::array())) x.excluded.insert(qplace(v));
  if (j.contains("default") && j["default"].is_object()) {
    std::vector<Rat> c;
    for (const auto& q : j["default"].at("constant")) c.push_back(rat(q));
    require(static_cast<int>(c.size()) == x.rank, "constant default of wrong length");
    for (auto& q : c) require(!q.zero(), "zero coordinate");
    x.constant = c;
  }
  for (const auto& comp : j.value("components", json::array())) {
    QPlace v = qplace(comp.at("place"));
    std::vector<Local> cs;
    for (const auto& c : comp.at("coords")) cs.push_back(parse_local(c, v));
    require(static_cast<int>(cs.size()) == x.rank, "component of wrong length");
    x.comps[v] = cs;
  }
  return x;
}

inline std::vector<QPlace> parse_S(const json& j) {
  std::vector<QPlace> S;
  for (const auto& v : j) S.push_back(qplace(v));
  return S;
}

inline bool in_B1S(const Char& c, const std::vector<QPlace>& S) {
  for (auto v : S) {
    if (v.real()) {
      if (c.odd()) return false;
    } else if (c.m % v.p == 0 || !c(v.p).zero()) {
      return false;
    }
  }
  return true;
}

// Sum over all places outside omit of inv_v(chi, x_j).
inline QZ pair_coordinate(const Point& x, int j, const Char& c, const std::set<QPlace>& omit) {
  if (c.trivial()) return {};
  std::set<QPlace> places = x.support(j);
  places.insert({0});
  for (i64 p : prime_factors(c.m)) places.insert({p});
  QZ s;
  for (auto v : places) {
    bool ramified = v.real() ? c.odd() : c.m % v.p == 0;
    if (omit.count(v)) {
      require(!ramified, "place " + v.str() + " is ramified for the character but omitted");
      continue;
    }
    auto l = x.value(v, j);
    if (!l) {
      require(!ramified, "no local datum at the ramified place " + v.str());
      continue;  // a unit at an unramified place
    }
    s = s + inv_at(c, v, *l);
  }
  return s;
}

inline std::set<QPlace> omit_of(const Point& x, const std::vector<QPlace>& S) {
  std::set<QPlace> o(S.begin(), S.end());
  o.insert(x.excluded.begin(), x.excluded.end());
  return o;
}

inline std::string check_torus_obstruction(const json& c) {
  Point x = parse_point(c.at("point"));
  auto S = parse_S(c.at("S"));
  std::vector<Char> xi;
  for (const auto& cj : c.at("tuple")) xi.push_back(parse_char(cj));
  require(static_cast<int>(xi.size()) == x.rank, "tuple length differs from the rank");
  i64 cond = 1;
  for (const auto& ch : xi) {
    require(in_B1S(ch, S), "character mod " + std::to_string(ch.m) + " is not locally trivial on S");
    cond = std::max(cond, ch.m);
  }
  if (c.contains("conductor")) require(c["conductor"].get<i64>() == cond, "stated conductor is wrong");
  auto omit = omit_of(x, S);
  QZ total;
  for (int j = 0; j < x.rank; ++j) total = total + pair_coordinate(x, j, xi[static_cast<std::size_t>(j)], omit);
  require(!total.zero(), "pairing vanishes");
  require(total == QZ::parse(c.at("value")), "pairing is " + total.str() + ", certificate says " + c["value"].dump());
  return "pairing " + total.str() + " at conductor " + std::to_string(cond);
}

inline std::string check_torus_survival(const json& c) {
  Point x = parse_point(c.at("point"));
  auto S = parse_S(c.at("S"));
  i64 M = c.at("conductor_max").get<i64>();
  auto omit = omit_of(x, S);
  std::size_t n = 0;
  for (i64 m = 2; m <= M; ++m)
    for (const auto& ch : primitive_chars(m)) {
      if (!in_B1S(ch, S)) continue;
      ++n;
      for (int j = 0; j < x.rank; ++j) {
        QZ v = pair_coordinate(x, j, ch, omit);
        require(v.zero(), "character mod " + std::to_string(m) + " pairs to " + v.str() + " on coordinate " +
                              std::to_string(j + 1));
      }
    }
  return std::to_string(n) + " nontrivial characters of conductor <= " + std::to_string(M) + " pair to 0";
}

inline std::vector<std::vector<Rat>> parse_subscheme(const json& z) {
  std::vector<std::vector<Rat>> out;
  for (const auto& p : z.at("points")) {
    std::vector<Rat> q;
    for (const auto& c : p) q.push_back(rat(c));
    out.push_back(q);
  }
  return out;
}

inline std::string check_sieve_separation(const json& c) {
  Point x = parse_point(c.at("point"));
  auto S = parse_S(c.at("S"));
  auto Z = parse_subscheme(c.at("subscheme"));
  const json& s = c.at("separation");
  i64 N = s.at("N").get<i64>(), v0 = s.at("v0").get<i64>();
  require(N >= 2 && prime(v0) && (v0 - 1) % N == 0, "v0 must be a prime = 1 mod N");
  require(!omit_of(x, S).count({v0}), "v0 lies in S or is excluded");
  std::vector<char> covered(Z.size(), 0);
  for (const auto& w : s.at("witnesses")) {
    std::size_t k = w.at("z_index").get<std::size_t>();
    int j = w.at("coordinate").get<int>() - 1;
    require(k < Z.size() && j >= 0 && j < x.rank, "witness index out of range");
    auto l = x.value({v0}, j);
    require(l.has_value(), "point has no datum at v0");
    auto [a, xr] = local_val_unit(*l, v0, 1);
    require(a == 0, "coordinate is not a unit at v0");
    require(xr == w.at("x_residue").get<i64>(), "x residue mismatch");
    const Rat& z = Z[k][static_cast<std::size_t>(j)];
    require(z.n % v0 != 0 && z.d % v0 != 0, "z is not a unit at v0");
    i64 zr = residue(z, v0);
    require(zr == w.at("z_residue").get<i64>(), "z residue mismatch");
    i64 p = pw(mul(xr, inv(zr, v0), v0), static_cast<std::uint64_t>((v0 - 1) / N), v0);
    require(p != 1 && p == w.at("power").get<i64>(), "ratio is an N-th power residue at v0");
    covered[k] = 1;
  }
  for (std::size_t k = 0; k < Z.size(); ++k) require(covered[k], "no witness for subscheme point " + std::to_string(k));
  return "separated at v0 = " + std::to_string(v0) + " modulo " + std::to_string(N) + "-th powers";
}

inline bool matches(const Local& l, const Rat& q, QPlace v) {
  if (l.kind == Local::Exact) return l.x == q;
  if (l.kind == Local::Padic) {
    i64 pe = 1;
    for (int i = 0; i < l.prec; ++i) pe *= v.p;
    auto [a, u] = val_unit(q, v.p, l.prec);
    return a == l.val && u == md(l.unit, pe);
  }
  if ((q.n < 0 ? -1 : 1) != l.sign) return false;
  if (l.interval) return !(q < l.interval->first) && !(l.interval->second < q);
  return true;
}

inline std::string check_sieve_member(const json& c) {
  Point x = parse_point(c.at("point"));
  auto S = parse_S(c.at("S"));
  auto Z = parse_subscheme(c.at("subscheme"));
  std::size_t k = c.at("z_index").get<std::size_t>();
  require(k < Z.size(), "z_index out of range");
  const auto& z = Z[k];
  require(static_cast<int>(z.size()) == x.rank, "rank mismatch");
  for (const auto& [v, cs] : x.comps)
    for (int j = 0; j < x.rank; ++j)
      require(matches(cs[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(j)], v),
              "datum at " + v.str() + " does not match z");
  auto omit = omit_of(x, S);
  if (x.constant) {
    require(*x.constant == z, "constant default differs from z");
  } else {
    for (const auto& q : z)
      for (const Int* n : {&q.n, &q.d})
        for (i64 p : prime_factors(*n)) require(x.comps.count({p}) || omit.count({p}), "support of z not covered");
  }
  return "consistent with subscheme point " + std::to_string(k);
}

// ---- affine models over Z[1/S] ----

// Value of an infix polynomial expression at rational variable values.
struct Expr {
  const std::string& s;
  const std::map<std::string, Rat>& vars;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && s[i] == ' ') ++i;
  }
  bool eat(char ch) {
    skip();
    if (i < s.size() && s[i] == ch) {
      ++i;
      return true;
    }
    return false;
  }
  Rat expr() {
    bool neg = eat('-');
    if (!neg) eat('+');
    Rat r = term();
    if (neg) r = Rat(0) - r;
    while (true) {
      if (eat('+')) r = r + term();
      else if (eat('-')) r = r - term();
      else return r;
    }
  }
  Rat term() {
    Rat r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }
  Rat factor() {
    Rat b = base();
    if (eat('^')) {
      skip();
      std::size_t j = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      require(j < i, "exponent expected");
      int e = std::stoi(s.substr(j, i - j));
      Rat r(1);
      for (int k = 0; k < e; ++k) r = r * b;
      return r;
    }
    return b;
  }
  Rat base() {
    skip();
    require(i < s.size(), "unexpected end of expression");
    if (eat('(')) {
      Rat r = expr();
      require(eat(')'), "missing ')'");
      return r;
    }
    std::size_t j = i;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      return Rat(Int(s.substr(j, i - j)));
    }
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
    auto it = vars.find(s.substr(j, i - j));
    require(it != vars.end(), "unknown variable '" + s.substr(j, i - j) + "'");
    return it->second;
  }
};
inline Rat eval(const std::string& src, const std::map<std::string, Rat>& vars) {
  Expr e{src, vars};
  Rat r = e.expr();
  e.skip();
  require(e.i == src.size(), "trailing characters in " + src);
  return r;
}

struct Model {
  std::vector<i64> inverted;
  std::vector<std::string> vars, relations;
  struct Rec {
    i64 p;
    std::vector<Int> center;
  };
  std::vector<Rec> history;
  // curve source: X_j = scale_j * f_j(t)
  bool has_curve = false;
  std::vector<std::optional<Rat>> D;
  Rat x0;
  std::vector<Rat> scale;
};

inline Model parse_model(const json& j) {
  Model m;
  if (j.contains("base")) m.inverted = j["base"].value("inverted", std::vector<i64>{});
  m.vars = j.at("vars").get<std::vector<std::string>>();
  m.relations = j.at("relations").get<std::vector<std::string>>();
  for (const auto& h : j.value("history", json::array())) {
    Model::Rec r{h.at("p").get<i64>(), {}};
    require(prime(r.p), "dilatation at a non-prime");
    for (const auto& c : h.at("center")) r.center.push_back(Int(ival(c)));
    require(r.center.size() == m.vars.size(), "center of wrong length");
    m.history.push_back(r);
  }
  if (j.contains("curve")) {
    m.has_curve = true;
    for (const auto& a : j["curve"].at("D")) m.D.push_back(a == "inf" ? std::nullopt : std::optional<Rat>(rat(a)));
    m.x0 = rat(j["curve"].at("basepoint"));
    for (const auto& s : j.at("scale")) m.scale.push_back(rat(s));
    require(m.vars.size() == 2 * m.scale.size() && m.scale.size() + 1 == m.D.size(), "curve model shape mismatch");
  }
  return m;
}

// (X_1..X_d, Y_1..Y_d) at t, with f_i of divisor (a_i) - (a_0) and f_i(x0) = 1;
// nullopt when t lands in D. t = nullopt is infinity.
inline std::optional<std::vector<Rat>> curve_coords(const Model& m, const std::optional<Rat>& t) {
  std::size_t a0 = 0;
  for (std::size_t i = 0; i < m.D.size(); ++i)
    if (!m.D[i]) a0 = i;
  std::vector<Rat> X;
  for (std::size_t i = 0; i < m.D.size(); ++i) {
    if (i == a0) continue;
    const Rat& ai = *m.D[i];
    Rat s = m.scale[X.size()];
    if (!m.D[a0]) {
      if (!t || *t == ai) return std::nullopt;
      X.push_back(s * (*t - ai) / (m.x0 - ai));
    } else {
      const Rat& p = *m.D[a0];
      Rat alpha = (m.x0 - p) / (m.x0 - ai);
      if (!t) {
        X.push_back(s * alpha);
        continue;
      }
      if (*t == ai || *t == p) return std::nullopt;
      X.push_back(s * alpha * (*t - ai) / (*t - p));
    }
  }
  std::vector<Rat> out = X;
  for (const auto& x : X) out.push_back(Rat(1) / x);
  return out;
}

inline std::vector<Rat> through_history(const Model& m, std::vector<Rat> x) {
  for (const auto& h : m.history)
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] - Rat(h.center[i])) / Rat(Int(h.p));
  return x;
}

inline bool relations_vanish(const Model& m, const std::vector<Rat>& y) {
  std::map<std::string, Rat> env;
  for (std::size_t i = 0; i < m.vars.size(); ++i) env[m.vars[i]] = y[i];
  for (const auto& r : m.relations)
    if (!eval(r, env).zero()) return false;
  return true;
}

inline std::string check_integral_points(const json& c) {
  Model m = parse_model(c.at("model"));
  auto S = parse_S(c.at("S"));
  std::vector<i64> Sp;
  for (auto v : S)
    if (!v.real()) Sp.push_back(v.p);
  std::sort(Sp.begin(), Sp.end());
  auto inv_sorted = m.inverted;
  std::sort(inv_sorted.begin(), inv_sorted.end());
  require(Sp == inv_sorted, "S differs from the primes inverted in the model");
  const json& pts = c.at("points");
  require(!pts.empty(), "no points listed");
  for (const auto& p : pts) {
    std::vector<Rat> x;
    for (const auto& v : p.at("coords")) x.push_back(rat(v));
    require(x.size() == m.vars.size(), "point of wrong length");
    if (m.has_curve) {
      std::optional<Rat> t;
      if (p.at("t") != "inf") t = rat(p["t"]);
      auto cx = curve_coords(m, t);
      require(cx && *cx == x, "coordinates differ from the curve at t = " + p["t"].dump());
    }
    auto y = through_history(m, x);
    for (const auto& v : y)
      for (i64 q : prime_factors(v.d))
        require(std::binary_search(inv_sorted.begin(), inv_sorted.end(), q),
                "coordinate not integral at " + std::to_string(q));
    require(relations_vanish(m, y), "relations do not vanish at t = " + p["t"].dump());
  }
  return std::to_string(pts.size()) + " integral point(s) verified";
}

// Classes of t in P^1(Z_p) (mod p^K, and t = 1/(p r) near infinity) whose
// coordinates are p-adic units passing every dilatation at p.
inline std::vector<std::vector<Rat>> local_classes(const Model& m, i64 p, int K) {
  require(m.has_curve, "local classes need the model's curve");
  i64 pK = 1;
  for (int i = 0; i < K; ++i) {
    require(pK < 10000000 / p, "local class enumeration too large");
    pK *= p;
  }
  std::vector<std::vector<Rat>> out;
  auto consider = [&](const std::optional<Rat>& t) {
    auto x = curve_coords(m, t);
    if (!x) return false;
    for (const auto& c : *x)
      if (c.n % p == 0 || c.d % p == 0) return true;
    std::vector<Rat> y = *x;
    for (const auto& h : m.history)
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i].d % p == 0) return true;
        if (h.p == p && residue(y[i], p) != md(small(h.center[i] % p), p)) return true;
        y[i] = (y[i] - Rat(h.center[i])) / Rat(Int(h.p));
      }
    for (const auto& c : y)
      if (c.d % p == 0) return true;
    out.push_back(*x);
    return true;
  };
  for (i64 r = 0; r < pK; ++r)
    if (!consider(Rat(Int(r)))) consider(Rat(Int(r + pK)));
  for (i64 r = 0; r < pK / p; ++r) {
    if (r == 0) {
      if (!consider(std::nullopt)) consider(Rat(Int(1), Int(pK)));
      continue;
    }
    if (!consider(Rat(Int(1), Int(p * r)))) consider(Rat(Int(1), Int(p * (r + pK / p))));
  }
  return out;
}

inline std::string check_empty_local_points(const json& c) {
  Model m = parse_model(c.at("model"));
  i64 p = c.at("p").get<i64>();
  int K = c.at("depth").get<int>();
  require(prime(p), "p must be prime");
  for (auto v : parse_S(c.at("S"))) require(v.p != p, "p lies in S");
  require(!std::binary_search(m.inverted.begin(), m.inverted.end(), p), "p is inverted in the model");
  require(local_classes(m, p, K).empty(), "local points exist at " + std::to_string(p));
  return "no Z_" + std::to_string(p) + "-points at depth " + std::to_string(K);
}

inline std::string check_model_obstruction(const json& c) {
  Model m = parse_model(c.at("model"));
  auto S = parse_S(c.at("S"));
  require(std::find(S.begin(), S.end(), QPlace{0}) != S.end(), "the real place must lie in S");
  std::vector<Char> xi;
  for (const auto& cj : c.at("tuple")) xi.push_back(parse_char(cj));
  require(xi.size() * 2 == m.vars.size(), "tuple length differs from the torus rank");
  std::set<i64> ram;
  for (const auto& ch : xi) {
    require(in_B1S(ch, S), "character is not locally trivial on S");
    for (i64 p : prime_factors(ch.m)) ram.insert(p);
  }
  std::map<i64, json> claimed;
  for (const auto& s : c.at("local_sets")) claimed[s.at("p").get<i64>()] = s;
  std::vector<QZ> total{QZ()};
  for (i64 p : ram) {
    require(claimed.count(p), "no local set at ramified prime " + std::to_string(p));
    const json& s = claimed[p];
    auto cls = local_classes(m, p, s.at("depth").get<int>());
    std::set<QZ> vals;
    for (const auto& x : cls) {
      QZ v;
      for (std::size_t j = 0; j < xi.size(); ++j) {
        Local l;
        l.x = x[j];
        v = v + inv_at(xi[j], {p}, l);
      }
      vals.insert(v);
    }
    std::set<QZ> cl;
    for (const auto& v : s.at("values")) cl.insert(QZ::parse(v));
    require(vals == cl, "local value set at " + std::to_string(p) + " differs");
    std::set<QZ> next;
    for (auto a : total)
      for (auto b : vals) next.insert(a + b);
    total.assign(next.begin(), next.end());
  }
  require(std::find(total.begin(), total.end(), QZ()) == total.end(), "0 is an achievable pairing value");
  return "0 is not among " + std::to_string(total.size()) + " achievable pairing values";
}

// ---- F_p(t), p prime ----

struct Fp {
  i64 p;
  using Poly = std::vector<i64>;  // low degree first, trimmed
  void trim(Poly& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  int deg(const Poly& a) const { return static_cast<int>(a.size()) - 1; }
  Poly add(Poly a, const Poly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = md(a[i] + b[i], p);
    trim(a);
    return a;
  }
  Poly scale(Poly a, i64 c) const {
    for (auto& x : a) x = md(x * c, p);
    trim(a);
    return a;
  }
  Poly mulp(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
    trim(r);
    return r;
  }
  std::pair<Poly, Poly> divmod(Poly a, const Poly& b) const {
    require(!b.empty(), "polynomial division by zero");
    Poly q;
    i64 il = inv(b.back(), p);
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    while (!a.empty() && a.size() >= b.size()) {
      std::size_t s = a.size() - b.size();
      i64 c = mul(a.back(), il, p);
      q[s] = c;
      for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = md(a[s + i] - c * b[i], p);
      trim(a);
    }
    trim(q);
    return {q, a};
  }
  Poly mod(const Poly& a, const Poly& b) const { return divmod(a, b).second; }
  Poly powmod(Poly a, std::uint64_t e, const Poly& m) const {
    Poly r = mod(Poly{1}, m);
    a = mod(a, m);
    while (e) {
      if (e & 1) r = mod(mulp(r, a), m);
      a = mod(mulp(a, a), m);
      e >>= 1;
    }
    return r;
  }
  i64 dlog(i64 x) const {
    x = md(x, p);
    require(x != 0, "dlog of zero");
    i64 g = 1;
    for (g = 1; g < p; ++g) {
      i64 o = 1, y = g;
      while (y != 1) {
        y = mul(y, g, p);
        ++o;
      }
      if (o == p - 1) break;
    }
    i64 y = 1;
    for (i64 k = 0; k < p - 1; ++k) {
      if (y == x) return k;
      y = mul(y, g, p);
    }
    throw Fail("dlog failed");
  }

  // "c*t^k + ..." with integer codes
  Poly parse_poly(std::string s) const {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    require(!s.empty(), "empty polynomial");
    Poly acc;
    std::size_t i = 0;
    while (i < s.size()) {
      i64 sign = 1;
      if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
      std::size_t j = i;
      while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
      std::string term = s.substr(i, j - i);
      require(!term.empty(), "bad polynomial " + s);
      auto tp = term.find('t');
      std::string cp = tp == std::string::npos ? term : term.substr(0, tp);
      if (!cp.empty() && cp.back() == '*') cp.pop_back();
      i64 c = cp.empty() ? 1 : small(parse_int(cp));
      require(c < p, "coefficient out of range in " + s);
      std::size_t d = 0;
      if (tp != std::string::npos) {
        d = 1;
        std::string rest = term.substr(tp + 1);
        if (!rest.empty()) {
          require(rest[0] == '^', "bad exponent in " + s);
          d = static_cast<std::size_t>(small(parse_int(rest.substr(1))));
        }
      }
      Poly t(d + 1, 0);
      t[d] = md(sign * c, p);
      acc = add(acc, t);
      i = j;
    }
    return acc;
  }
  // num/den, den monic, reduced
  struct RF {
    Poly n, d;
  };
  Poly gcdp(Poly a, Poly b) const {
    while (!b.empty()) {
      Poly r = mod(a, b);
      a = b;
      b = r;
    }
    return a.empty() ? a : scale(a, inv(a.back(), p));
  }
  RF parse_rf(const std::string& s0) const {
    std::string s = s0;
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    auto k = s.find('/');
    RF r{parse_poly(k == std::string::npos ? s : s.substr(0, k)), k == std::string::npos ? Poly{1} : parse_poly(s.substr(k + 1))};
    require(!r.n.empty() && !r.d.empty(), "zero rational function");
    Poly g = gcdp(r.n, r.d);
    if (deg(g) > 0) {
      r.n = divmod(r.n, g).first;
      r.d = divmod(r.d, g).first;
    }
    i64 il = inv(r.d.back(), p);
    r.n = scale(r.n, il);
    r.d = scale(r.d, il);
    return r;
  }
  // monic irreducible factors, by repeated removal of the least monic divisor
  std::set<Poly> factors(Poly h) const {
    std::set<Poly> out;
    h = scale(h, inv(h.back(), p));
    for (int d = 1; 2 * d <= deg(h); ++d) {
      i64 count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (i64 code = 0; code < count && 2 * d <= deg(h); ++code) {
        Poly g(static_cast<std::size_t>(d) + 1, 0);
        g[static_cast<std::size_t>(d)] = 1;
        i64 x = code;
        for (int i = 0; i < d; ++i) {
          g[static_cast<std::size_t>(i)] = x % p;
          x /= p;
        }
        while (deg(h) >= d && mod(h, g).empty()) {
          out.insert(g);
          h = divmod(h, g).first;
        }
      }
    }
    if (deg(h) > 0) out.insert(h);
    return out;
  }
  bool irreducible(const Poly& g) const {
    if (g.empty() || g.back() != 1 || deg(g) < 1) return false;
    auto f = factors(g);
    return f.size() == 1 && *f.begin() == g;
  }
};

// A place of F_p(t): a monic irreducible, or empty for infinity.
using FPlace = std::vector<i64>;

struct FFCheck {
  Fp F;

  int pdeg(const FPlace& P) const { return P.empty() ? 1 : F.deg(P); }
  FPlace place(const json& j) const {
    std::string s = j.get<std::string>();
    if (s == "inf") return {};
    auto g = F.parse_poly(s);
    require(F.irreducible(g), s + " is not monic irreducible");
    return g;
  }
  int vpoly(Fp::Poly g, const FPlace& P) const {
    int v = 0;
    while (true) {
      auto [q, r] = F.divmod(g, P);
      if (!r.empty()) return v;
      g = q;
      ++v;
    }
  }
  // valuation and unit residue (mod P, or the leading ratio at infinity)
  std::pair<int, Fp::Poly> val_unit(const Fp::RF& x, const FPlace& P) const {
    if (P.empty()) return {F.deg(x.d) - F.deg(x.n), {mul(x.n.back(), inv(x.d.back(), F.p), F.p)}};
    int a = vpoly(x.n, P), b = vpoly(x.d, P);
    Fp::Poly n = x.n, d = x.d;
    for (int i = 0; i < a; ++i) n = F.divmod(n, P).first;
    for (int i = 0; i < b; ++i) d = F.divmod(d, P).first;
    std::uint64_t qd = 1;
    for (int i = 0; i < F.deg(P); ++i) qd *= static_cast<std::uint64_t>(F.p);
    Fp::Poly dinv = F.powmod(d, qd - 2, P);
    return {a - b, F.mod(F.mulp(n, dinv), P)};
  }
  Fp::Poly res_pow(const Fp::Poly& u, long long e, const FPlace& P) const {
    std::uint64_t qd = 1;
    for (int i = 0; i < pdeg(P); ++i) qd *= static_cast<std::uint64_t>(F.p);
    Fp::Poly m = P.empty() ? Fp::Poly{0, 1} : P;  // at infinity residues are constants; t is a harmless modulus
    long long k = e % static_cast<long long>(qd - 1);
    if (k < 0) k += static_cast<long long>(qd - 1);
    return F.powmod(u, static_cast<std::uint64_t>(k), m);
  }
  // norm to F_p of the tame symbol (-1)^(ab) x^b f^(-a)
  i64 tame_norm(const Fp::RF& x, const Fp::RF& f, const FPlace& P) const {
    auto [a, ux] = val_unit(x, P);
    auto [b, uf] = val_unit(f, P);
    Fp::Poly m = P.empty() ? Fp::Poly{0, 1} : P;
    Fp::Poly r = F.mod(F.mulp(res_pow(ux, b, P), res_pow(uf, -a, P)), m);
    if ((static_cast<long long>(a) * b) % 2 != 0) r = F.scale(r, F.p - 1);
    std::uint64_t qd = 1;
    for (int i = 0; i < pdeg(P); ++i) qd *= static_cast<std::uint64_t>(F.p);
    Fp::Poly nm = F.powmod(r, (qd - 1) / static_cast<std::uint64_t>(F.p - 1), m);
    require(F.deg(nm) == 0, "norm is not a constant");
    return nm[0];
  }
  struct Chi {
    bool kummer = false;
    int n = 2;
    Fp::RF f;
  };
  Chi parse_chi(const std::string& s0) const {
    std::string s = s0;
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    auto o = s.find('(');
    require(o != std::string::npos && s.back() == ')', "bad character " + s0);
    std::string head = s.substr(0, o), body = s.substr(o + 1, s.size() - o - 2);
    Chi c;
    if (head == "const_ext") {
      c.n = static_cast<int>(small(parse_int(body)));
      require(c.n >= 2, "bad extension degree");
      return c;
    }
    require(head == "kummer", "unknown character family " + head);
    auto k = body.find(',');
    require(k != std::string::npos, "kummer needs N and f");
    c.kummer = true;
    c.n = static_cast<int>(small(parse_int(body.substr(0, k))));
    c.f = F.parse_rf(body.substr(k + 1));
    require(c.n >= 2 && (F.p - 1) % c.n == 0, "Kummer exponent must divide q-1");
    return c;
  }
  QZ inv_at(const Chi& c, const FPlace& P, const Fp::RF& x) const {
    if (!c.kummer) return QZ(static_cast<i64>(val_unit(x, P).first) * pdeg(P), c.n);
    return QZ(F.dlog(tame_norm(x, c.f, P)) % c.n, c.n);
  }
  std::set<FPlace> support(const Fp::RF& x) const {
    std::set<FPlace> s;
    for (const auto* g : {&x.n, &x.d})
      if (F.deg(*g) > 0)
        for (const auto& f : F.factors(*g)) s.insert(f);
    if (F.deg(x.n) != F.deg(x.d)) s.insert(FPlace{});
    return s;
  }
  std::set<FPlace> ramification(const Chi& c) const {
    if (!c.kummer) return {};
    auto s = support(c.f);
    s.insert(FPlace{});
    return s;
  }
  bool locally_trivial(const Chi& c, const FPlace& P) const {
    if (!c.kummer) return pdeg(P) % c.n == 0;
    if (val_unit(c.f, P).first % c.n != 0) return false;
    Fp::RF pi = P.empty() ? Fp::RF{{1}, {0, 1}} : Fp::RF{P, {1}};
    return inv_at(c, P, pi).zero();
  }

  struct Pt {
    int rank = 1;
    std::map<FPlace, std::vector<Fp::RF>> comps;
    std::optional<std::vector<Fp::RF>> constant;
  };
  Pt point(const json& j) const {
    Pt x;
    x.rank = j.at("rank").get<int>();
    auto list = [&](const json& a) {
      std::vector<Fp::RF> v;
      for (const auto& s : a) v.push_back(F.parse_rf(s.get<std::string>()));
      require(static_cast<int>(v.size()) == x.rank, "coordinate list of wrong length");
      return v;
    };
    if (j.contains("default") && j["default"].is_object()) x.constant = list(j["default"].at("constant"));
    for (const auto& c : j.value("components", json::array())) x.comps[place(c.at("place"))] = list(c.at("coords"));
    return x;
  }
  QZ pair(const Pt& x, int j, const Chi& c, const std::set<FPlace>& S) const {
    std::set<FPlace> places;
    for (auto& [P, v] : x.comps) places.insert(P);
    auto ram = ramification(c);
    if (x.constant) {
      for (const auto& P : support((*x.constant)[static_cast<std::size_t>(j)])) places.insert(P);
      places.insert(ram.begin(), ram.end());
    } else {
      for (const auto& P : ram) require(S.count(P) || x.comps.count(P), "no datum at a ramified place");
    }
    QZ s;
    for (const auto& P : places) {
      if (S.count(P)) continue;
      auto it = x.comps.find(P);
      const Fp::RF& v = it != x.comps.end() ? it->second[static_cast<std::size_t>(j)] : (*x.constant)[static_cast<std::size_t>(j)];
      s = s + inv_at(c, P, v);
    }
    return s;
  }
  std::vector<FPlace> places(const json& a) const {
    std::vector<FPlace> S;
    for (const auto& v : a) S.push_back(place(v));
    return S;
  }
};

inline FFCheck ff_context(const json& point) {
  std::string b = point.at("base").get<std::string>();
  require(b.size() >= 3 && b.front() == 'F' && b.back() == 't', "bad function-field base " + b);
  i64 q = small(parse_int(b.substr(1, b.size() - 2)));
  require(prime(q), "the checker handles prime fields F_p(t) only");
  return FFCheck{Fp{q}};
}

inline std::string check_ff_obstruction(const json& c) {
  FFCheck K = ff_context(c.at("point"));
  auto x = K.point(c.at("point"));
  auto S = K.places(c.at("S"));
  auto chi = K.parse_chi(c.at("character").get<std::string>());
  for (const auto& P : S) require(K.locally_trivial(chi, P), "character is not locally trivial on S");
  int j = c.at("coordinate").get<int>() - 1;
  require(j >= 0 && j < x.rank, "coordinate out of range");
  QZ v = K.pair(x, j, chi, std::set<FPlace>(S.begin(), S.end()));
  require(!v.zero(), "pairing vanishes");
  require(v == QZ::parse(c.at("value")), "pairing is " + v.str());
  return "pairing " + v.str() + " against " + c["character"].get<std::string>();
}

inline std::string check_ff_survival(const json& c) {
  FFCheck K = ff_context(c.at("point"));
  auto x = K.point(c.at("point"));
  auto S = K.places(c.at("S"));
  std::set<FPlace> Sset(S.begin(), S.end());
  const json& b = c.at("bounds");
  std::vector<FFCheck::Chi> fam;
  for (int n = 2; n <= b.at("n_max").get<int>(); ++n) fam.push_back({false, n, {}});
  std::vector<Fp::RF> gens;
  for (i64 a = 0; a < K.F.p; ++a) gens.push_back({{md(-a, K.F.p), 1}, {1}});
  for (int d = 2; d <= b.at("f_degree").get<int>(); ++d) {
    i64 count = 1;
    for (int i = 0; i < d; ++i) count *= K.F.p;
    for (i64 code = 0; code < count; ++code) {
      Fp::Poly g(static_cast<std::size_t>(d) + 1, 0);
      g[static_cast<std::size_t>(d)] = 1;
      i64 y = code;
      for (int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] = y % K.F.p;
        y /= K.F.p;
      }
      if (K.F.irreducible(g)) gens.push_back({g, {1}});
    }
  }
  for (const auto& e : b.value("extra_f", json::array())) gens.push_back(K.F.parse_rf(e.get<std::string>()));
  for (int N = 2; N <= K.F.p - 1; ++N)
    if ((K.F.p - 1) % N == 0)
      for (const auto& g : gens) fam.push_back({true, N, g});
  std::size_t n = 0;
  for (const auto& chi : fam) {
    bool ok = true;
    for (const auto& P : S) ok = ok && K.locally_trivial(chi, P);
    if (!ok) continue;
    ++n;
    for (int j = 0; j < x.rank; ++j) require(K.pair(x, j, chi, Sset).zero(), "a character of the family pairs nontrivially");
  }
  return std::to_string(n) + " admissible characters pair to 0";
}

// ---- dispatch ----

struct Result {
  bool ok;
  std::string message;
};

inline std::string check_payload(const json& c) {
  std::string t = c.at("type").get<std::string>();
  if (t == "torus_obstruction") return check_torus_obstruction(c);
  if (t == "torus_survival") return check_torus_survival(c);
  if (t == "sieve_separation") return check_sieve_separation(c);
  if (t == "sieve_member") return check_sieve_member(c);
  if (t == "integral_points") return check_integral_points(c);
  if (t == "empty_local_points") return check_empty_local_points(c);
  if (t == "model_obstruction") return check_model_obstruction(c);
  if (t == "ff_obstruction") return check_ff_obstruction(c);
  if (t == "ff_survival") return check_ff_survival(c);
  if (t == "hv_chain") {
    const json& inner = c.at("certificate");
    std::string it = inner.at("type").get<std::string>();
    std::string msg = check_payload(inner);
    if (it == "sieve_member" && c.contains("curve") && c.contains("point")) {
      // z must be the torus image of the claimed rational point
      Model m;
      m.has_curve = true;
      for (const auto& a : c["curve"].at("D")) m.D.push_back(a == "inf" ? std::nullopt : std::optional<Rat>(rat(a)));
      m.x0 = rat(c["curve"].at("basepoint"));
      m.scale.assign(m.D.size() - 1, Rat(1));
      auto x = curve_coords(m, rat(c["point"]));
      require(x.has_value(), "point lies in D");
      std::vector<Rat> z;
      for (const auto& v : inner.at("z")) z.push_back(rat(v));
      require(std::equal(z.begin(), z.end(), x->begin()), "z is not the image of the claimed point");
    }
    return "stage " + std::to_string(c.value("stage", 0)) + ": " + msg;
  }
  throw Fail("unknown certificate type " + t);
}

inline const std::map<std::string, std::set<std::string>>& allowed_types() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"Obstructed", {"torus_obstruction", "model_obstruction", "ff_obstruction"}},
      {"Excluded", {"sieve_separation", "torus_obstruction", "hv_chain"}},
      {"Member", {"sieve_member", "hv_chain"}},
      {"SurvivesUpTo", {"torus_survival", "ff_survival"}},
      {"IntegralPointFound", {"integral_points"}},
      {"EmptyLocalPoints", {"empty_local_points"}},
  };
  return m;
}

/// Checks a verdict document {"kind", "payload", "provenance"}.
inline Result check(const json& verdict) {
  try {
    std::string kind = verdict.at("kind").get<std::string>();
    if (kind == "Inconclusive") return {false, "Inconclusive verdicts carry no certificate"};
    auto it = allowed_types().find(kind);
    require(it != allowed_types().end(), "unknown verdict kind " + kind);
    const json& p = verdict.at("payload");
    require(it->second.count(p.at("type").get<std::string>()), "payload type does not fit kind " + kind);
    return {true, check_payload(p)};
  } catch (const Fail& e) {
    return {false, e.what()};
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

}  // namespace afcheck
