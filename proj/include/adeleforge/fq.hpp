#pragma once

// Finite fields F_q, polynomials over F_q and rational functions in F_q(t).
//
// F_q for q = p^e is F_p[X]/(c(X)) with c the Conway polynomial listed in
// conway_table() below. An element is stored as its code sum_i a_i p^i where
// a_0 + a_1 X + ... is the reduced representative. For prime q the code is the
// residue itself. The least primitive element is the primitive element of
// smallest code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bigint.hpp"

namespace adeleforge {

using FqElem = std::uint32_t;

struct ConwayEntry {
  int p;
  int e;
  std::vector<int> coeffs;  // low to high, monic, length e + 1
};

inline const std::vector<ConwayEntry>& conway_table() {
  static const std::vector<ConwayEntry> table = {
      {2, 2, {1, 1, 1}},     // X^2 + X + 1
      {2, 3, {1, 1, 0, 1}},  // X^3 + X + 1
      {2, 4, {1, 1, 0, 0, 1}},
      {2, 5, {1, 0, 1, 0, 0, 1}},
      {2, 6, {1, 1, 0, 1, 1, 0, 1}},
      {3, 2, {2, 2, 1}},     // X^2 + 2X + 2
      {3, 3, {1, 2, 0, 1}},  // X^3 + 2X + 1
      {3, 4, {2, 0, 0, 2, 1}},
      {5, 2, {2, 4, 1}},
      {5, 3, {3, 3, 0, 1}},
      {7, 2, {3, 6, 1}},
  };
  return table;
}

class FqField {
 public:
  /// Shared instance for q; q must be a prime <= 251 or a tabulated prime power.
  static const FqField& get(int q) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FqField>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(q);
    if (it != registry.end()) return *it->second;
    auto f = std::unique_ptr<FqField>(new FqField(q));
    const FqField& ref = *f;
    registry.emplace(q, std::move(f));
    return ref;
  }

  int q() const { return q_; }
  int p() const { return p_; }
  int degree() const { return e_; }
  const std::vector<int>& defining_polynomial() const { return modulus_; }

  FqElem zero() const { return 0; }
  FqElem one() const { return 1; }
  FqElem add(FqElem a, FqElem b) const { return add_[a * q_ + b]; }
  FqElem neg(FqElem a) const { return neg_[a]; }
  FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }
  FqElem mul(FqElem a, FqElem b) const { return mul_[a * q_ + b]; }
  FqElem inv(FqElem a) const {
    if (a == 0) throw ZeroInput();
    return inv_[a];
  }
  FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }
  FqElem pow(FqElem a, std::uint64_t e) const {
    FqElem r = 1;
    while (e) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
  /// Image of the integer n under Z -> F_q.
  FqElem from_int(long long n) const { return static_cast<FqElem>(mod_i64(n, p_)); }
  FqElem primitive_element() const { return primitive_; }

  /// Discrete logarithm base the least primitive element.
  std::uint32_t dlog(FqElem a) const {
    if (a == 0) throw ZeroInput();
    return dlog_[a];
  }

 private:
  explicit FqField(int q) : q_(q) {
    auto ps = prime_divisors(q);
    if (q < 2 || ps.size() != 1) throw InvalidArgument("q must be a prime power: " + std::to_string(q));
    p_ = static_cast<int>(ps[0]);
    e_ = 0;
    for (int t = q; t > 1; t /= p_) ++e_;
    if (e_ == 1) {
      if (q > 251) throw InvalidArgument("prime field too large for table arithmetic");
      modulus_ = {0, 1};
    } else {
      bool found = false;
      for (const auto& c : conway_table()) {
        if (c.p == p_ && c.e == e_) {
          modulus_ = c.coeffs;
          found = true;
        }
      }
      if (!found) throw InvalidArgument("no defining polynomial tabulated for q=" + std::to_string(q));
    }
    const auto n = static_cast<std::size_t>(q_);
    add_.resize(n * n);
    mul_.resize(n * n);
    neg_.resize(n);
    inv_.resize(n);
    dlog_.assign(n, 0);
    auto digits = [&](FqElem a) {
      std::vector<int> d(static_cast<std::size_t>(e_));
      for (int i = 0; i < e_; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(a % static_cast<FqElem>(p_));
        a /= static_cast<FqElem>(p_);
      }
      return d;
    };
    auto code = [&](const std::vector<int>& d) {
      FqElem c = 0;
      for (int i = e_ - 1; i >= 0; --i) c = c * static_cast<FqElem>(p_) + static_cast<FqElem>(d[static_cast<std::size_t>(i)]);
      return c;
    };
    for (FqElem a = 0; a < n; ++a) {
      auto da = digits(a);
      std::vector<int> dn(da.size());
      for (std::size_t i = 0; i < da.size(); ++i) dn[i] = (p_ - da[i]) % p_;
      neg_[a] = code(dn);
      for (FqElem b = 0; b < n; ++b) {
        auto db = digits(b);
        std::vector<int> ds(da.size());
        for (std::size_t i = 0; i < da.size(); ++i) ds[i] = (da[i] + db[i]) % p_;
        add_[a * n + b] = code(ds);
        // schoolbook product reduced by the defining polynomial
        std::vector<int> prod(static_cast<std::size_t>(2 * e_), 0);
        for (int i = 0; i < e_; ++i)
          for (int j = 0; j < e_; ++j)
            prod[static_cast<std::size_t>(i + j)] =
                (prod[static_cast<std::size_t>(i + j)] + da[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(j)]) % p_;
        for (int k = 2 * e_ - 1; k >= e_; --k) {
          int c = prod[static_cast<std::size_t>(k)];
          if (c == 0) continue;
          for (int i = 0; i <= e_; ++i) {
            auto idx = static_cast<std::size_t>(k - e_ + i);
            prod[idx] = ((prod[idx] - c * modulus_[static_cast<std::size_t>(i)]) % p_ + p_) % p_;
          }
        }
        prod.resize(static_cast<std::size_t>(e_));
        mul_[a * n + b] = code(prod);
      }
    }
    for (FqElem a = 1; a < n; ++a) {
      for (FqElem b = 1; b < n; ++b) {
        if (mul_[a * n + b] == 1) {
          inv_[a] = b;
          break;
        }
      }
    }
    primitive_ = 0;
    for (FqElem g = 1; g < n && primitive_ == 0; ++g) {
      FqElem x = 1;
      std::uint32_t ord = 0;
      do {
        x = mul_[x * n + g];
        ++ord;
      } while (x != 1);
      if (ord == n - 1) primitive_ = g;
    }
    FqElem x = 1;
    for (std::uint32_t k = 0; k + 1 < n; ++k) {
      dlog_[x] = k;
      x = mul_[x * n + primitive_];
    }
  }

  int q_;
  int p_ = 0;
  int e_ = 0;
  std::vector<int> modulus_;
  std::vector<FqElem> add_, mul_, neg_, inv_;
  std::vector<std::uint32_t> dlog_;
  FqElem primitive_ = 0;
};

/// Polynomial over F_q in the variable t, coefficients low to high.
class FqPoly {
 public:
  FqPoly() = default;
  explicit FqPoly(const FqField& f) : f_(&f) {}
  FqPoly(const FqField& f, std::vector<FqElem> c) : f_(&f), c_(std::move(c)) { trim(); }

  static FqPoly constant(const FqField& f, FqElem a) { return FqPoly(f, {a}); }
  static FqPoly t(const FqField& f) { return FqPoly(f, {0, 1}); }
  /// t - a
  static FqPoly linear(const FqField& f, FqElem a) { return FqPoly(f, {f.neg(a), 1}); }

  const FqField& field() const { return *f_; }
  bool has_field() const { return f_ != nullptr; }
  const std::vector<FqElem>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  FqElem lead() const { return c_.empty() ? 0 : c_.back(); }
  FqElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_constant() const { return c_.size() <= 1; }

  FqPoly monic() const {
    if (is_zero()) return *this;
    return scale(f_->inv(lead()));
  }

  FqPoly scale(FqElem a) const {
    std::vector<FqElem> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = f_->mul(c_[i], a);
    return FqPoly(*f_, std::move(r));
  }

  FqElem eval(FqElem x) const {
    FqElem r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
    return r;
  }

  friend FqPoly operator+(const FqPoly& a, const FqPoly& b) {
    const FqField& f = a.pick(b);
    std::vector<FqElem> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a.coeff(i), b.coeff(i));
    return FqPoly(f, std::move(r));
  }
  FqPoly operator-() const {
    std::vector<FqElem> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = f_->neg(c_[i]);
    return FqPoly(*f_, std::move(r));
  }
  friend FqPoly operator-(const FqPoly& a, const FqPoly& b) { return a + (-b); }
  friend FqPoly operator*(const FqPoly& a, const FqPoly& b) {
    const FqField& f = a.pick(b);
    if (a.is_zero() || b.is_zero()) return FqPoly(f);
    std::vector<FqElem> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a.c_[i], b.c_[j]));
    }
    return FqPoly(f, std::move(r));
  }

  /// Euclidean division; returns (quotient, remainder).
  friend std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b) {
    const FqField& f = a.pick(b);
    if (b.is_zero()) throw ZeroInput();
    std::vector<FqElem> r = a.c_;
    int db = b.degree();
    if (a.degree() < db) return {FqPoly(f), a};
    std::vector<FqElem> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    FqElem il = f.inv(b.lead());
    for (int k = a.degree(); k >= db; --k) {
      FqElem c = f.mul(r[static_cast<std::size_t>(k)], il);
      if (c == 0) continue;
      q[static_cast<std::size_t>(k - db)] = c;
      for (int i = 0; i <= db; ++i) {
        auto idx = static_cast<std::size_t>(k - db + i);
        r[idx] = f.sub(r[idx], f.mul(c, b.c_[static_cast<std::size_t>(i)]));
      }
    }
    return {FqPoly(f, std::move(q)), FqPoly(f, std::move(r))};
  }
  friend FqPoly operator/(const FqPoly& a, const FqPoly& b) { return divmod(a, b).first; }
  friend FqPoly operator%(const FqPoly& a, const FqPoly& b) { return divmod(a, b).second; }

  friend FqPoly gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
      FqPoly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  FqPoly pow(unsigned e) const {
    FqPoly r = FqPoly::constant(*f_, 1), b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      b = b * b;
      e >>= 1u;
    }
    return r;
  }

  /// Canonical string in t; coefficients are element codes.
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      FqElem c = c_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(c);
        continue;
      }
      if (c != 1) out += std::to_string(c) + "*";
      out += "t";
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

  /// Parses sums of terms c, c*t^k, t^k, -t, ... with integer codes c.
  static FqPoly parse(const FqField& f, std::string_view s) {
    std::string clean;
    for (char ch : s)
      if (ch != ' ') clean += ch;
    if (clean.empty()) throw ParseError("empty polynomial");
    FqPoly acc(f);
    std::size_t i = 0;
    while (i < clean.size()) {
      bool negate = false;
      if (clean[i] == '+' || clean[i] == '-') {
        negate = clean[i] == '-';
        ++i;
      }
      std::size_t j = i;
      while (j < clean.size() && clean[j] != '+' && clean[j] != '-') ++j;
      std::string term = clean.substr(i, j - i);
      if (term.empty()) throw ParseError("bad polynomial: " + std::string(s));
      FqElem coef = 1;
      unsigned deg = 0;
      auto tpos = term.find('t');
      std::string cpart = tpos == std::string::npos ? term : term.substr(0, tpos);
      if (!cpart.empty() && cpart.back() == '*') cpart.pop_back();
      if (!cpart.empty()) {
        for (char ch : cpart)
          if (ch < '0' || ch > '9') throw ParseError("bad coefficient in " + std::string(s));
        long long v = std::stoll(cpart);
        if (v >= f.q()) throw ParseError("coefficient code out of range in " + std::string(s));
        coef = static_cast<FqElem>(v);
      }
      if (tpos != std::string::npos) {
        deg = 1;
        std::string rest = term.substr(tpos + 1);
        if (!rest.empty()) {
          if (rest[0] != '^' || rest.size() < 2) throw ParseError("bad exponent in " + std::string(s));
          for (std::size_t k = 1; k < rest.size(); ++k)
            if (rest[k] < '0' || rest[k] > '9') throw ParseError("bad exponent in " + std::string(s));
          deg = static_cast<unsigned>(std::stoul(rest.substr(1)));
        }
      }
      std::vector<FqElem> c(deg + 1, 0);
      c[deg] = negate ? f.neg(coef) : coef;
      acc = acc + FqPoly(f, std::move(c));
      i = j;
    }
    return acc;
  }

  friend bool operator==(const FqPoly& a, const FqPoly& b) {
    if (a.f_ && b.f_ && a.f_ != b.f_) return false;
    return a.c_ == b.c_;
  }
  /// Order: by degree, then coefficients from the top down.
  friend bool operator<(const FqPoly& a, const FqPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.c_.size(); i-- > 0;) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
  }

 private:
  const FqField& pick(const FqPoly& o) const {
    if (f_ && o.f_ && f_ != o.f_) throw InvalidArgument("F_q polynomials over different fields");
    if (f_) return *f_;
    if (o.f_) return *o.f_;
    throw InvalidArgument("F_q polynomial without field");
  }
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  const FqField* f_ = nullptr;
  std::vector<FqElem> c_;
};

/// All monic polynomials of the given degree, in increasing code order.
inline std::vector<FqPoly> monic_polynomials(const FqField& f, int degree) {
  std::vector<FqPoly> out;
  std::uint64_t count = 1;
  for (int i = 0; i < degree; ++i) count *= static_cast<std::uint64_t>(f.q());
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<FqElem> c(static_cast<std::size_t>(degree + 1));
    std::uint64_t x = idx;
    for (int i = 0; i < degree; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<FqElem>(x % static_cast<std::uint64_t>(f.q()));
      x /= static_cast<std::uint64_t>(f.q());
    }
    c[static_cast<std::size_t>(degree)] = 1;
    out.emplace_back(f, std::move(c));
  }
  return out;
}

/// Monic irreducibles of the given degree (cached per field), ordered by code.
inline const std::vector<FqPoly>& monic_irreducibles(const FqField& f, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<FqPoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(f.q(), degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<FqPoly> out;
  std::vector<FqPoly> smaller;
  for (int d = 1; d <= degree / 2; ++d) {
    auto ps = monic_polynomials(f, d);
    smaller.insert(smaller.end(), ps.begin(), ps.end());
  }
  for (auto& cand : monic_polynomials(f, degree)) {
    bool irreducible = true;
    for (const auto& g : smaller) {
      if ((cand % g).is_zero()) {
        irreducible = false;
        break;
      }
    }
    if (irreducible) out.push_back(cand);
  }
  return cache.emplace(key, std::move(out)).first->second;
}

inline bool is_irreducible(const FqPoly& g) {
  if (g.degree() < 1) return false;
  FqPoly m = g.monic();
  for (int d = 1; d <= m.degree() / 2; ++d) {
    for (const auto& h : monic_irreducibles(g.field(), d)) {
      if ((m % h).is_zero()) return false;
    }
  }
  return true;
}

struct FqFactorization {
  FqElem unit = 1;
  std::vector<std::pair<FqPoly, int>> factors;  // monic irreducible, multiplicity
};

/// Factorization by trial division with monic irreducibles of increasing degree.
inline FqFactorization factor(const FqPoly& g) {
  if (g.is_zero()) throw ZeroInput();
  FqFactorization out;
  out.unit = g.lead();
  FqPoly rest = g.monic();
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const auto& h : monic_irreducibles(g.field(), d)) {
      int mult = 0;
      while (true) {
        auto [qq, rr] = divmod(rest, h);
        if (!rr.is_zero()) break;
        rest = qq;
        ++mult;
      }
      if (mult) out.factors.emplace_back(h, mult);
      if (2 * d > rest.degree()) break;
    }
  }
  if (rest.degree() >= 1) {
    bool merged = false;
    for (auto& fm : out.factors) {
      if (fm.first == rest) {
        ++fm.second;
        merged = true;
      }
    }
    if (!merged) out.factors.emplace_back(rest, 1);
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Arithmetic in the residue field F_q[t]/(pi), pi monic irreducible.
class ResidueField {
 public:
  explicit ResidueField(FqPoly pi) : pi_(std::move(pi)) {}
  const FqPoly& modulus() const { return pi_; }
  int degree() const { return pi_.degree(); }
  FqPoly reduce(const FqPoly& a) const { return a % pi_; }
  FqPoly mul(const FqPoly& a, const FqPoly& b) const { return (a * b) % pi_; }
  FqPoly pow(FqPoly a, std::uint64_t e) const {
    FqPoly r = FqPoly::constant(pi_.field(), 1);
    a = reduce(a);
    while (e) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
  FqPoly inv(const FqPoly& a) const {
    FqPoly r0 = pi_, r1 = reduce(a);
    if (r1.is_zero()) throw ZeroInput();
    FqPoly s0(pi_.field()), s1 = FqPoly::constant(pi_.field(), 1);
    while (!r1.is_zero()) {
      auto [qq, rr] = divmod(r0, r1);
      r0 = r1;
      r1 = rr;
      FqPoly t = s0 - qq * s1;
      s0 = s1;
      s1 = t;
    }
    // r0 is a nonzero constant
    return reduce(s0.scale(pi_.field().inv(r0.lead())));
  }
  /// Norm to F_q: a^((q^d - 1)/(q - 1)).
  FqElem norm(const FqPoly& a) const {
    const FqField& f = pi_.field();
    std::uint64_t qd = 1;
    for (int i = 0; i < degree(); ++i) qd *= static_cast<std::uint64_t>(f.q());
    FqPoly n = pow(a, (qd - 1) / static_cast<std::uint64_t>(f.q() - 1));
    if (n.degree() > 0) throw Error("norm left F_q");
    return n.coeff(0);
  }

 private:
  FqPoly pi_;
};

/// Element of F_q(t): num/den with den monic and gcd(num, den) = 1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(FqPoly num) : num_(std::move(num)), den_(FqPoly::constant(num_.field(), 1)) {}
  RatFunc(FqPoly num, FqPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFunc constant(const FqField& f, FqElem a) { return RatFunc(FqPoly::constant(f, a)); }
  static RatFunc t(const FqField& f) { return RatFunc(FqPoly::t(f)); }

  const FqField& field() const { return num_.field(); }
  const FqPoly& num() const { return num_; }
  const FqPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  RatFunc inverse() const {
    if (is_zero()) throw ZeroInput();
    return RatFunc(den_, num_);
  }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (a.num_ == b.num_) return a.den_ < b.den_;
    return a.num_ < b.num_;
  }
  RatFunc pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    return RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
  }

  std::string str() const {
    if (den_.degree() == 0) return num_.str();
    auto wrap = [](const FqPoly& p) {
      std::string s = p.str();
      return (p.degree() >= 1 && s.find('+') != std::string::npos) || s.find('*') != std::string::npos
                 ? "(" + s + ")"
                 : s;
    };
    return wrap(num_) + "/" + wrap(den_);
  }

  /// Parses "poly" or "(poly)/(poly)".
  static RatFunc parse(const FqField& f, std::string_view s) {
    std::string clean;
    for (char ch : s)
      if (ch != ' ') clean += ch;
    auto slash = clean.find('/');
    auto strip = [](std::string x) {
      if (x.size() >= 2 && x.front() == '(' && x.back() == ')') x = x.substr(1, x.size() - 2);
      return x;
    };
    if (slash == std::string::npos) return RatFunc(FqPoly::parse(f, strip(clean)));
    FqPoly d = FqPoly::parse(f, strip(clean.substr(slash + 1)));
    if (d.is_zero()) throw ParseError("zero denominator");
    return RatFunc(FqPoly::parse(f, strip(clean.substr(0, slash))), d);
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw ZeroInput();
    FqPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    FqElem l = den_.lead();
    if (l != 1) {
      FqElem il = den_.field().inv(l);
      num_ = num_.scale(il);
      den_ = den_.scale(il);
    }
  }

  FqPoly num_;
  FqPoly den_;
};

}  // namespace adeleforge
