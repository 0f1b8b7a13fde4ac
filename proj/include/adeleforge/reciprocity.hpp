#pragma once

// Dirichlet characters of Q with values in Q/Z, their local invariants and
// the vanishing criteria for membership in B_{1,S}.
//
// Local invariant of chi at a place v on x (chi = prod_l chi_l by CRT):
//   p not dividing m:       v_p(x) * chi(p)
//   p^e || m, x = p^a u:    a * chi_{m/p^e}(p) + chi_{p^e}(u^-1)
//   real place:             chi(-1) if x < 0, else 0
// These sum to 0 over all places for every x in Q^*.

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "local_value.hpp"

namespace adeleforge {

/// r in [0, 1) in lowest terms.
class QmodZ {
 public:
  QmodZ() = default;
  QmodZ(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw InvalidArgument("QmodZ denominator must be positive");
    n = mod_i64(n, d);
    std::int64_t g = gcd_i64(n, d);
    if (g == 0) g = d;
    n_ = n / g;
    d_ = d / g;
  }
  static QmodZ parse(std::string_view s) {
    BigRational r = BigRational::parse(s);
    return QmodZ(mod_i64(to_i64(r.num()) % to_i64(r.den()), to_i64(r.den())), to_i64(r.den()));
  }

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }
  bool is_zero() const { return n_ == 0; }

  friend QmodZ operator+(QmodZ a, QmodZ b) {
    std::int64_t l = a.d_ / gcd_i64(a.d_, b.d_) * b.d_;
    return QmodZ(mod_i64(a.n_ * (l / a.d_) + b.n_ * (l / b.d_), l), l);
  }
  QmodZ operator-() const { return QmodZ(-n_, d_); }
  friend QmodZ operator-(QmodZ a, QmodZ b) { return a + (-b); }
  friend QmodZ operator*(std::int64_t k, QmodZ a) { return QmodZ(mulmod(mod_i64(k, a.d_), a.n_, a.d_), a.d_); }
  QmodZ& operator+=(QmodZ o) { return *this = *this + o; }

  friend bool operator==(QmodZ a, QmodZ b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  /// Order by the representative in [0, 1).
  friend bool operator<(QmodZ a, QmodZ b) {
    return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  }

  std::string str() const { return n_ == 0 ? "0" : std::to_string(n_) + "/" + std::to_string(d_); }

 private:
  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
};

/// Generators of (Z/m)^*: CRT lifts of a primitive root for each odd p^e || m,
/// and of -1 (and 5 when 8 | m) for the 2-part. Paired with their orders.
inline std::vector<std::pair<std::int64_t, std::int64_t>> unit_generators(std::int64_t m) {
  std::vector<std::pair<std::int64_t, std::int64_t>> gens;
  if (m <= 2) return gens;
  for (std::int64_t p : prime_divisors(m)) {
    std::int64_t pe = 1;
    int e = 0;
    while (m % (pe * p) == 0) {
      pe *= p;
      ++e;
    }
    std::int64_t rest = m / pe;
    auto lift = [&](std::int64_t g) { return rest == 1 ? mod_i64(g, pe) : crt(mod_i64(g, pe), pe, 1 % rest, rest); };
    if (p == 2) {
      if (e >= 2) gens.emplace_back(lift(-1), 2);
      if (e >= 3) gens.emplace_back(lift(5), pe / 4);
    } else {
      gens.emplace_back(lift(primitive_root(pe)), pe / p * (p - 1));
    }
  }
  return gens;
}

class DirichletCharacter {
 public:
  /// Trivial character (conductor 1).
  DirichletCharacter() : m_(1), table_(1) {}

  /// Character mod m given on generators of (Z/m)^*; reduced to its conductor.
  static DirichletCharacter from_generator_images(std::int64_t m, const std::vector<std::pair<std::int64_t, QmodZ>>& images) {
    if (m < 1) throw InvalidArgument("modulus must be >= 1");
    std::vector<QmodZ> table(static_cast<std::size_t>(m));
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> frontier{1 % m};
    seen[static_cast<std::size_t>(1 % m)] = 1;
    while (!frontier.empty()) {
      std::vector<std::int64_t> next;
      for (std::int64_t a : frontier) {
        for (const auto& [g, val] : images) {
          if (gcd_i64(g, m) != 1) throw InvalidArgument("generator " + std::to_string(g) + " is not a unit mod " + std::to_string(m));
          std::int64_t b = mulmod(a, mod_i64(g, m), m);
          QmodZ vb = table[static_cast<std::size_t>(a)] + val;
          if (seen[static_cast<std::size_t>(b)]) {
            if (!(table[static_cast<std::size_t>(b)] == vb)) throw InvalidArgument("generator images do not define a homomorphism");
            continue;
          }
          seen[static_cast<std::size_t>(b)] = 1;
          table[static_cast<std::size_t>(b)] = vb;
          next.push_back(b);
        }
      }
      frontier = std::move(next);
    }
    for (std::int64_t a = 0; a < m; ++a) {
      if (gcd_i64(a, m) == 1 && !seen[static_cast<std::size_t>(a)])
        throw InvalidArgument("listed generators do not generate (Z/" + std::to_string(m) + ")^*");
    }
    return primitive_of(m, table);
  }

  std::int64_t modulus() const { return m_; }
  std::int64_t conductor() const { return m_; }
  bool is_trivial() const { return m_ == 1; }

  /// chi(a) for a coprime to the modulus.
  QmodZ operator()(std::int64_t a) const {
    std::int64_t r = mod_i64(a, m_);
    if (gcd_i64(r, m_) != 1) throw InvalidArgument(std::to_string(a) + " is not a unit mod " + std::to_string(m_));
    return table_[static_cast<std::size_t>(r)];
  }
  QmodZ operator()(const BigInt& a) const { return (*this)(to_i64(big_mod(a, BigInt(m_)))); }

  bool is_even() const { return (*this)(-1).is_zero(); }

  /// chi_{p^e}(u), the p-primary component, for p^e || m.
  QmodZ component_at(std::int64_t p, std::int64_t u) const {
    auto [pe, rest] = split(p);
    std::int64_t a = rest == 1 ? mod_i64(u, pe) : crt(mod_i64(u, pe), pe, 1 % rest, rest);
    return (*this)(a);
  }
  /// chi_{m/p^e}(p), the prime-to-p component at p.
  QmodZ away_from(std::int64_t p) const {
    auto [pe, rest] = split(p);
    if (rest == 1) return {};
    return (*this)(crt(1, pe, mod_i64(p, rest), rest));
  }

  DirichletCharacter negated() const {
    DirichletCharacter c = *this;
    for (auto& v : c.table_) v = -v;
    return c;
  }

  /// Images of unit_generators(modulus()).
  std::vector<std::pair<std::int64_t, QmodZ>> generator_images() const {
    std::vector<std::pair<std::int64_t, QmodZ>> out;
    for (auto [g, ord] : unit_generators(m_)) out.emplace_back(g, (*this)(g));
    return out;
  }

  std::string str() const {
    std::string s = "chi_" + std::to_string(m_) + "[";
    bool first = true;
    for (auto& [g, v] : generator_images()) {
      if (!first) s += ",";
      s += std::to_string(g) + "->" + v.str();
      first = false;
    }
    return s + "]";
  }

  /// Value table over 1..m-1 (non-units skipped); used for canonical ordering.
  std::vector<QmodZ> unit_values() const {
    std::vector<QmodZ> out;
    for (std::int64_t a = 1; a < m_; ++a)
      if (gcd_i64(a, m_) == 1) out.push_back(table_[static_cast<std::size_t>(a)]);
    return out;
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.m_ == b.m_ && a.table_ == b.table_;
  }
  /// Conductor first, then the value table lexicographically.
  friend bool operator<(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.m_ != b.m_) return a.m_ < b.m_;
    auto va = a.unit_values(), vb = b.unit_values();
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  }

  /// From a full table mod m (indexed by residue). Does not reduce.
  static DirichletCharacter from_table(std::int64_t m, std::vector<QmodZ> table) {
    DirichletCharacter c;
    c.m_ = m;
    c.table_ = std::move(table);
    return c;
  }

 private:
  std::pair<std::int64_t, std::int64_t> split(std::int64_t p) const {
    std::int64_t pe = 1;
    while (m_ % (pe * p) == 0) pe *= p;
    if (pe == 1) throw InvalidArgument(std::to_string(p) + " does not divide the conductor " + std::to_string(m_));
    return {pe, m_ / pe};
  }

  friend DirichletCharacter operator+(const DirichletCharacter& a, const DirichletCharacter& b) {
    std::int64_t l = a.m_ / gcd_i64(a.m_, b.m_) * b.m_;
    std::vector<QmodZ> t(static_cast<std::size_t>(l));
    for (std::int64_t x = 0; x < l; ++x)
      if (gcd_i64(x, l) == 1) t[static_cast<std::size_t>(x)] = a(x) + b(x);
    return primitive_of(l, t);
  }

 private:
  static bool factors_through(std::int64_t m, const std::vector<QmodZ>& table, std::int64_t f) {
    for (std::int64_t a = 1 % f; a < m; a += f) {
      if (gcd_i64(a, m) == 1 && !table[static_cast<std::size_t>(a)].is_zero()) return false;
    }
    return true;
  }

  static DirichletCharacter primitive_of(std::int64_t m, const std::vector<QmodZ>& table) {
    std::int64_t f = m;
    bool shrunk = true;
    while (shrunk && f > 1) {
      shrunk = false;
      for (std::int64_t p : prime_divisors(f)) {
        if (factors_through(m, table, f / p)) {
          f /= p;
          shrunk = true;
          break;
        }
      }
    }
    std::vector<QmodZ> t(static_cast<std::size_t>(f));
    for (std::int64_t b = 0; b < f; ++b) {
      if (gcd_i64(b, f) != 1) continue;
      std::int64_t a = b;
      while (gcd_i64(a, m) != 1) a += f;
      t[static_cast<std::size_t>(b)] = table[static_cast<std::size_t>(a % m)];
    }
    return from_table(f, std::move(t));
  }

  std::int64_t m_;
  std::vector<QmodZ> table_;
};

/// Primitive characters of conductor exactly m, in canonical order.
inline const std::vector<DirichletCharacter>& primitive_characters(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, std::vector<DirichletCharacter>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<DirichletCharacter> out;
  if (m == 1) {
    out.emplace_back();
  } else {
    auto gens = unit_generators(m);
    // every unit as a word in the generators
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> words{{1 % m, std::vector<std::int64_t>(gens.size(), 0)}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> next;
      for (auto& [a, w] : words) {
        std::int64_t x = a;
        for (std::int64_t k = 0; k < gens[i].second; ++k) {
          auto w2 = w;
          w2[i] = k;
          next.emplace_back(x, w2);
          x = mulmod(x, gens[i].first, m);
        }
      }
      words = std::move(next);
    }
    std::vector<std::int64_t> img(gens.size(), 0);
    while (true) {
      std::vector<QmodZ> table(static_cast<std::size_t>(m));
      for (auto& [a, w] : words) {
        QmodZ v;
        for (std::size_t i = 0; i < gens.size(); ++i) v += QmodZ(mulmod(w[i], img[i], gens[i].second), gens[i].second);
        table[static_cast<std::size_t>(a)] = v;
      }
      bool primitive = true;
      for (std::int64_t p : prime_divisors(m)) {
        std::int64_t f = m / p;
        bool through = true;
        for (std::int64_t a = 1 % f; a < m && through; a += f)
          if (gcd_i64(a, m) == 1 && !table[static_cast<std::size_t>(a)].is_zero()) through = false;
        if (through) primitive = false;
      }
      if (primitive) out.push_back(DirichletCharacter::from_table(m, std::move(table)));
      std::size_t i = 0;
      while (i < img.size()) {
        if (++img[i] < gens[i].second) break;
        img[i] = 0;
        ++i;
      }
      if (i == img.size()) break;
    }
    std::sort(out.begin(), out.end());
  }
  return cache.emplace(m, std::move(out)).first->second;
}

/// All characters of conductor <= M, by conductor then value table.
inline std::vector<DirichletCharacter> enumerate_characters(std::int64_t M) {
  std::vector<DirichletCharacter> out;
  for (std::int64_t m = 1; m <= M; ++m) {
    const auto& cs = primitive_characters(m);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

inline QmodZ local_invariant(const DirichletCharacter& chi, const Place& v, const LocalValue& x,
                             const std::string& where = "") {
  if (chi.is_trivial()) return {};
  if (v.is_real()) {
    if (chi.is_even()) return {};
    return x.negative() ? chi(-1) : QmodZ();
  }
  if (!v.is_prime()) throw InvalidArgument("Dirichlet characters live on places of Q, got " + v.str());
  std::int64_t p = v.p();
  std::int64_t m = chi.modulus();
  long long a = x.valuation(p);
  if (m % p != 0) return static_cast<std::int64_t>(a) * chi(p);
  std::int64_t pe = 1;
  int e = 0;
  while (m % (pe * p) == 0) {
    pe *= p;
    ++e;
  }
  BigInt u = x.unit_residue(p, e, where.empty() ? v.str() : where);
  std::int64_t uinv = inv_mod(to_i64(u), pe);
  return static_cast<std::int64_t>(a) * chi.away_from(p) + chi.component_at(p, uinv);
}

/// Places of Q where the invariant of chi on q can be nonzero.
inline std::vector<Place> relevant_places(const DirichletCharacter& chi, const BigRational& q) {
  std::set<std::int64_t> ps;
  for (std::int64_t p : prime_divisors(chi.modulus())) ps.insert(p);
  for (auto& [p, e] : factor(q.num())) ps.insert(to_i64(p));
  for (auto& [p, e] : factor(q.den())) ps.insert(to_i64(p));
  std::vector<Place> out{Place::real()};
  for (std::int64_t p : ps) out.push_back(Place::prime(p));
  return out;
}

/// Sum of local invariants of chi over all places of Q at the rational q.
inline QmodZ global_sum(const DirichletCharacter& chi, const BigRational& q) {
  QmodZ s;
  for (const Place& v : relevant_places(chi, q)) s += local_invariant(chi, v, q);
  return s;
}

/// chi vanishes identically on Q_v^* for every v in S.
inline bool is_in_B1S(const DirichletCharacter& chi, const std::vector<Place>& S) {
  for (const Place& v : S) {
    if (v.is_real()) {
      if (!chi.is_even()) return false;
    } else if (v.is_prime()) {
      if (chi.modulus() % v.p() == 0) return false;
      if (!chi(v.p()).is_zero()) return false;
    } else {
      throw InvalidArgument("B_{1,S} over Q needs places of Q, got " + v.str());
    }
  }
  return true;
}

inline std::vector<DirichletCharacter> b1s_characters(std::int64_t M, const std::vector<Place>& S) {
  std::vector<DirichletCharacter> out;
  for (auto& c : enumerate_characters(M))
    if (is_in_B1S(c, S)) out.push_back(c);
  return out;
}

}  // namespace adeleforge
