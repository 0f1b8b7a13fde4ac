#pragma once

// Multivariate polynomials with BigInt coefficients, with a small
// infix parser ("2*X1 - X2 - 1", "(1+3*X)*(1+3*Y) - 1").

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace adeleforge {

class MPoly {
 public:
  using Monomial = std::vector<int>;

  MPoly() = default;
  explicit MPoly(std::size_t nvars) : n_(nvars) {}

  static MPoly constant(std::size_t n, const BigInt& c) {
    MPoly p(n);
    if (c != 0) p.t_[Monomial(n, 0)] = c;
    return p;
  }
  static MPoly var(std::size_t n, std::size_t i) {
    if (i >= n) throw InvalidArgument("variable index out of range");
    MPoly p(n);
    Monomial m(n, 0);
    m[i] = 1;
    p.t_[m] = 1;
    return p;
  }

  std::size_t nvars() const { return n_; }
  const std::map<Monomial, BigInt>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : t_) {
      int s = 0;
      for (int e : m) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    r.check(b);
    for (const auto& [m, c] : b.t_) r.add_term(m, c);
    return r;
  }
  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check(b);
    MPoly r(a.n_);
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) {
        Monomial m(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend MPoly operator*(const BigInt& k, const MPoly& a) {
    MPoly r(a.n_);
    if (k == 0) return r;
    for (const auto& [m, c] : a.t_) r.t_[m] = k * c;
    return r;
  }
  MPoly pow(unsigned e) const {
    MPoly r = constant(n_, 1), b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      b = b * b;
      e >>= 1u;
    }
    return r;
  }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.n_ == b.n_ && a.t_ == b.t_; }

  /// Positive gcd of the coefficients (0 for the zero polynomial).
  BigInt content() const {
    BigInt g = 0;
    for (const auto& [m, c] : t_) g = big_gcd(g, c);
    return g;
  }
  MPoly divide_exact(const BigInt& k) const {
    MPoly r(n_);
    for (const auto& [m, c] : t_) {
      if (c % k != 0) throw Error("inexact polynomial division");
      r.t_[m] = c / k;
    }
    return r;
  }

  template <class T>
  T eval(const std::vector<T>& x) const {
    if (x.size() != n_) throw InvalidArgument("evaluation point has wrong length");
    T s(0);
    for (const auto& [m, c] : t_) {
      T term(c);
      for (std::size_t i = 0; i < n_; ++i)
        for (int e = 0; e < m[i]; ++e) term = term * x[i];
      s = s + term;
    }
    return s;
  }
  BigInt eval_mod(const std::vector<BigInt>& x, const BigInt& mod) const {
    BigInt s = 0;
    for (const auto& [m, c] : t_) {
      BigInt term = big_mod(c, mod);
      for (std::size_t i = 0; i < n_; ++i)
        for (int e = 0; e < m[i]; ++e) term = big_mod(term * x[i], mod);
      s = big_mod(s + term, mod);
    }
    return s;
  }

  /// Substitutes polynomials (in `images[0].nvars()` variables) for the variables.
  MPoly compose(const std::vector<MPoly>& images) const {
    if (images.size() != n_) throw InvalidArgument("compose needs one image per variable");
    std::size_t m = images.empty() ? 0 : images[0].n_;
    MPoly r(m);
    for (const auto& [mono, c] : t_) {
      MPoly term = constant(m, c);
      for (std::size_t i = 0; i < n_; ++i)
        if (mono[i]) term = term * images[i].pow(static_cast<unsigned>(mono[i]));
      r = r + term;
    }
    return r;
  }

  /// Terms by decreasing total degree, then decreasing exponents.
  std::string str(const std::vector<std::string>& names) const {
    if (names.size() != n_) throw InvalidArgument("need one name per variable");
    if (t_.empty()) return "0";
    std::vector<std::pair<Monomial, BigInt>> ts(t_.begin(), t_.end());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
      int da = 0, db = 0;
      for (int e : a.first) da += e;
      for (int e : b.first) db += e;
      if (da != db) return da > db;
      return a.first > b.first;
    });
    std::string s;
    for (const auto& [m, c] : ts) {
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!m[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += names[i];
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      BigInt a = big_abs(c);
      std::string body = mono.empty() ? a.str() : (a == 1 ? mono : a.str() + "*" + mono);
      if (s.empty())
        s = (c < 0 ? "-" : "") + body;
      else
        s += (c < 0 ? " - " : " + ") + body;
    }
    return s;
  }

  static MPoly parse(std::string_view src, const std::vector<std::string>& names) {
    Parser p{src, 0, names};
    MPoly r = p.expr();
    p.skip();
    if (p.i != src.size()) throw ParseError("unexpected '" + std::string(1, src[p.i]) + "' in " + std::string(src));
    return r;
  }

 private:
  struct Parser {
    std::string_view s;
    std::size_t i;
    const std::vector<std::string>& names;

    void skip() {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
      skip();
      if (i < s.size() && s[i] == c) {
        ++i;
        return true;
      }
      return false;
    }
    MPoly expr() {
      bool neg = eat('-');
      if (!neg) eat('+');
      MPoly r = term();
      if (neg) r = -r;
      while (true) {
        if (eat('+'))
          r = r + term();
        else if (eat('-'))
          r = r - term();
        else
          return r;
      }
    }
    MPoly term() {
      MPoly r = factor();
      while (eat('*')) r = r * factor();
      return r;
    }
    MPoly factor() {
      MPoly b = base();
      if (eat('^')) {
        skip();
        std::size_t j = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (j == i) throw ParseError("exponent expected in " + std::string(s));
        b = b.pow(static_cast<unsigned>(std::stoul(std::string(s.substr(j, i - j)))));
      }
      return b;
    }
    MPoly base() {
      skip();
      if (i >= s.size()) throw ParseError("unexpected end of " + std::string(s));
      if (eat('(')) {
        MPoly r = expr();
        if (!eat(')')) throw ParseError("missing ')' in " + std::string(s));
        return r;
      }
      if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        std::size_t j = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return constant(names.size(), BigInt(std::string(s.substr(j, i - j))));
      }
      std::size_t j = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      std::string name(s.substr(j, i - j));
      for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return var(names.size(), k);
      throw ParseError("unknown variable '" + name + "' in " + std::string(s));
    }
  };

  void check(const MPoly& o) const {
    if (o.n_ != n_) throw InvalidArgument("polynomials in different numbers of variables");
  }
  void add_term(const Monomial& m, const BigInt& c) {
    if (c == 0) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  std::size_t n_ = 0;
  std::map<Monomial, BigInt> t_;
};

}  // namespace adeleforge
