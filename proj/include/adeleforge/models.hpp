#pragma once

// Integral models over Z_S: the standard model of a curve inside G_m^d,
// dilatations x = c + p*x', congruence-neighbourhood models, integral points,
// and the integral-point / obstruction dichotomy check.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "curves.hpp"
#include "mpoly.hpp"
#include "parallel.hpp"
#include "sunits.hpp"
#include "toruslab.hpp"

namespace adeleforge {

enum class ModelShape { Hypersurface, CompleteIntersection, General };

inline std::string shape_str(ModelShape s) {
  switch (s) {
    case ModelShape::Hypersurface: return "hypersurface";
    case ModelShape::CompleteIntersection: return "complete_intersection";
    default: return "general";
  }
}
inline ModelShape parse_shape(const std::string& s) {
  if (s == "hypersurface") return ModelShape::Hypersurface;
  if (s == "complete_intersection") return ModelShape::CompleteIntersection;
  if (s == "general") return ModelShape::General;
  throw ParseError("unknown model shape: " + s);
}

struct DilatationRecord {
  std::int64_t p;
  std::vector<BigInt> center;  // lifts in [0, p-1]
  std::vector<int> divided;    // power of p removed from each relation
};

/// The curve behind a model: X_j = scale_j * f_j(t), Y_j = 1/X_j.
struct ModelSource {
  TorusEmbedding<BigRational> embedding;
  std::vector<BigRational> scale;

  BigRational beta(std::size_t j) const { return scale[j] * embedding.functions()[j].alpha; }
  /// f_j on P^1; nullopt at a zero or pole.
  std::optional<BigRational> coordinate(std::size_t j, const P1Point<BigRational>& t) const {
    const auto& f = embedding.functions()[j];
    if (!t) {
      if (!f.pole) return std::nullopt;
      return beta(j);
    }
    if (*t == f.root || (f.pole && *t == *f.pole)) return std::nullopt;
    return scale[j] * f(*t);
  }
  /// (X_1..X_d, Y_1..Y_d) at t, or nullopt when t lies in D.
  std::optional<std::vector<BigRational>> coords(const P1Point<BigRational>& t) const {
    const std::size_t d = scale.size();
    std::vector<BigRational> x(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
      auto v = coordinate(j, t);
      if (!v) return std::nullopt;
      x[j] = *v;
      x[d + j] = v->inverse();
    }
    return x;
  }
  /// t with X_1(t) = X.
  P1Point<BigRational> parameter(const BigRational& X) const {
    const auto& f = embedding.functions()[0];
    BigRational b = beta(0);
    if (!f.pole) return X / b + f.root;
    if (X == b) return std::nullopt;
    return (X * *f.pole - b * f.root) / (X - b);
  }
};

class AffineModel {
 public:
  AffineModel(std::vector<std::int64_t> inverted, std::vector<std::string> vars, std::vector<MPoly> relations,
              ModelShape shape, std::vector<DilatationRecord> history = {}, std::optional<ModelSource> source = {})
      : inverted_(std::move(inverted)),
        vars_(std::move(vars)),
        rel_(std::move(relations)),
        shape_(shape),
        history_(std::move(history)),
        source_(std::move(source)) {
    std::sort(inverted_.begin(), inverted_.end());
    inverted_.erase(std::unique(inverted_.begin(), inverted_.end()), inverted_.end());
    for (auto p : inverted_)
      if (!is_prime(p)) throw InvalidArgument("inverted element " + std::to_string(p) + " is not prime");
    std::set<std::string> seen;
    for (const auto& v : vars_)
      if (!seen.insert(v).second) throw InvalidArgument("repeated variable " + v);
    for (const auto& r : rel_) {
      if (r.nvars() != vars_.size()) throw InvalidArgument("relation in the wrong number of variables");
      if (r.is_zero()) throw InvalidArgument("zero relation");
      for (const auto& [q, e] : factor(r.content()))
        if (!std::binary_search(inverted_.begin(), inverted_.end(), to_i64(q)))
          throw InvalidArgument("relation " + r.str(vars_) + " has content divisible by " + q.str());
    }
  }

  const std::vector<std::int64_t>& inverted() const { return inverted_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<MPoly>& relations() const { return rel_; }
  ModelShape shape() const { return shape_; }
  const std::vector<DilatationRecord>& history() const { return history_; }
  const std::optional<ModelSource>& source() const { return source_; }

  std::vector<std::string> relation_strings() const {
    std::vector<std::string> out;
    for (const auto& r : rel_) out.push_back(r.str(vars_));
    return out;
  }
  int depth_at(std::int64_t p) const {
    int k = 0;
    for (const auto& h : history_) k += h.p == p;
    return k;
  }

  /// Whether original coordinates x (given exactly) specialize through every
  /// recorded dilatation, read p-adically. Records at other primes q are
  /// affine changes of variable by a p-adic unit there.
  bool passes_history(std::int64_t p, std::vector<BigRational> x) const {
    for (const auto& c : x)
      if (valuation(c.den(), p) > 0) return false;
    for (const auto& h : history_) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (h.p == p && x[i].residue(BigInt(p)) != h.center[i]) return false;
        x[i] = (x[i] - BigRational(h.center[i])) / BigRational(h.p);
      }
    }
    return true;
  }

  /// Exact check of original coordinates against the model: each relation of
  /// the current model vanishes after the dilatation substitutions.
  bool satisfies(std::vector<BigRational> x) const {
    for (const auto& h : history_)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] - BigRational(h.center[i])) / BigRational(h.p);
    for (const auto& r : rel_)
      if (!r.eval(x).is_zero()) return false;
    return true;
  }

 private:
  std::vector<std::int64_t> inverted_;
  std::vector<std::string> vars_;
  std::vector<MPoly> rel_;
  ModelShape shape_;
  std::vector<DilatationRecord> history_;
  std::optional<ModelSource> source_;
};

inline ModelShape infer_shape(std::size_t nvars, std::size_t nrel, std::size_t dim = 1) {
  if (nrel == 1 && nvars == dim + 1) return ModelShape::Hypersurface;
  if (nrel + dim == nvars) return ModelShape::CompleteIntersection;
  return ModelShape::General;
}

namespace detail {

// Integer multiple of sum c_j X_j - rhs with content 1 and a positive first coefficient.
inline MPoly integral_linear(const std::vector<BigRational>& c, const BigRational& rhs, std::size_t n) {
  BigInt l = rhs.den();
  for (const auto& x : c) l = l / big_gcd(l, x.den()) * x.den();
  MPoly r(n);
  for (std::size_t j = 0; j < c.size(); ++j) r = r + BigInt(c[j].num() * (l / c[j].den())) * MPoly::var(n, j);
  r = r - MPoly::constant(n, rhs.num() * (l / rhs.den()));
  BigInt g = r.content();
  r = r.divide_exact(g);
  if (!r.terms().empty()) {
    // leading coefficient in variable order X1, X2, ...
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j].is_zero()) continue;
      if (c[j].sign() < 0) r = -r;
      break;
    }
  }
  return r;
}

}  // namespace detail

/// Variables X_1..X_d, Y_1..Y_d; integer-scaled image relations, then
/// X_j*Y_j = 1. With monic = true the coordinates are (t - a_j)/(t - a_0)
/// instead of the basepoint-normalized f_j.
inline AffineModel clear_denominators(const TorusEmbedding<BigRational>& emb, const std::vector<Place>& S,
                                      bool monic = false) {
  const std::size_t d = static_cast<std::size_t>(emb.rank());
  const std::size_t n = 2 * d;
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < d; ++j) vars.push_back("X" + std::to_string(j + 1));
  for (std::size_t j = 0; j < d; ++j) vars.push_back("Y" + std::to_string(j + 1));
  std::vector<BigRational> scale(d, BigRational(1));
  if (monic)
    for (std::size_t j = 0; j < d; ++j) scale[j] = emb.functions()[j].alpha.inverse();
  std::vector<MPoly> rel;
  for (const auto& r : emb.relations()) {
    std::vector<BigRational> c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = r.coeffs[j] / scale[j];
    rel.push_back(detail::integral_linear(c, r.rhs, n));
  }
  for (std::size_t j = 0; j < d; ++j)
    rel.push_back(MPoly::var(n, j) * MPoly::var(n, d + j) - MPoly::constant(n, 1));
  return AffineModel(finite_primes(S), vars, rel, infer_shape(n, rel.size()), {}, ModelSource{emb, scale});
}

/// x_i = c_i + p*x_i', each relation divided by the largest power of p
/// dividing all of its coefficients.
inline AffineModel dilate(const AffineModel& m, std::int64_t p, const std::vector<BigInt>& center) {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  if (std::binary_search(m.inverted().begin(), m.inverted().end(), p))
    throw InvalidArgument(std::to_string(p) + " is inverted in the base ring");
  if (m.shape() == ModelShape::General)
    throw SaturationNotCertified("content division is only certified for hypersurfaces and complete intersections");
  const std::size_t n = m.vars().size();
  if (center.size() != n) throw InvalidArgument("center needs one residue per variable");
  std::vector<BigInt> c;
  for (const auto& x : center) c.push_back(big_mod(x, BigInt(p)));
  for (const auto& r : m.relations())
    if (r.eval_mod(c, BigInt(p)) != 0) throw CenterNotOnFiber("relation " + r.str(m.vars()) + " is nonzero at the center mod " + std::to_string(p));
  std::vector<MPoly> images;
  for (std::size_t i = 0; i < n; ++i)
    images.push_back(MPoly::constant(n, c[i]) + BigInt(p) * MPoly::var(n, i));
  std::vector<MPoly> rel;
  DilatationRecord rec{p, c, {}};
  for (const auto& r : m.relations()) {
    MPoly s = r.compose(images);
    int k = s.is_zero() ? 0 : static_cast<int>(valuation(s.content(), p));
    BigInt pk = big_pow(BigInt(p), static_cast<unsigned>(k));
    rel.push_back(s.divide_exact(pk));
    rec.divided.push_back(k);
  }
  auto hist = m.history();
  hist.push_back(rec);
  return AffineModel(m.inverted(), m.vars(), rel, m.shape(), hist, m.source());
}

/// x_i = residue_i mod p^e for every variable; an optional valuation is a
/// consistency check on the residue.
struct CongruenceCondition {
  std::int64_t p;
  int e = 1;
  std::map<std::string, BigInt> residues;
  std::map<std::string, int> valuations;
  std::optional<BigRational> parameter;  // t = parameter mod p^e, translated through the source curve
};

namespace detail {

inline std::vector<BigInt> condition_residues(const AffineModel& m, const CongruenceCondition& c) {
  if (c.e < 1) throw InvalidArgument("congruence depth must be >= 1");
  if (!is_prime(c.p)) throw InvalidArgument(std::to_string(c.p) + " is not prime");
  BigInt pe = big_pow(BigInt(c.p), static_cast<unsigned>(c.e));
  std::map<std::string, BigInt> res = c.residues;
  if (c.parameter) {
    if (!m.source()) throw InvalidArgument("a parameter congruence needs a model with a source curve");
    auto x = m.source()->coords(*c.parameter);
    if (!x) throw CenterNotOnFiber("parameter " + c.parameter->str() + " lies in D");
    for (std::size_t i = 0; i < x->size(); ++i) {
      if (valuation((*x)[i].num(), c.p) > 0 || valuation((*x)[i].den(), c.p) > 0)
        throw CenterNotOnFiber("coordinate " + m.vars()[i] + " at t = " + c.parameter->str() + " is not a " +
                               std::to_string(c.p) + "-adic unit");
      res.emplace(m.vars()[i], (*x)[i].residue(pe));
    }
  }
  // X_j given alone fixes Y_j = X_j^{-1} in a model with a source curve
  if (m.source()) {
    const std::size_t d = m.vars().size() / 2;
    for (std::size_t j = 0; j < d; ++j) {
      auto it = res.find(m.vars()[j]);
      if (it != res.end() && !res.count(m.vars()[d + j])) {
        if (big_gcd(it->second, pe) != 1)
          throw CenterNotOnFiber(m.vars()[j] + " residue is not a unit mod " + std::to_string(c.p));
        res.emplace(m.vars()[d + j], inv_mod(it->second, pe));
      }
    }
  }
  std::vector<BigInt> out;
  for (const auto& v : m.vars()) {
    auto it = res.find(v);
    if (it == res.end()) throw InvalidArgument("no residue for " + v + " at " + std::to_string(c.p));
    if (it->second < 0 || it->second >= pe) throw InvalidArgument("residue for " + v + " is not reduced mod p^e");
    out.push_back(it->second);
  }
  for (const auto& [v, k] : c.valuations) {
    auto it = res.find(v);
    if (it == res.end()) throw InvalidArgument("valuation given for unknown variable " + v);
    long long got = it->second == 0 ? c.e : static_cast<long long>(valuation(it->second, c.p));
    if (k < c.e && got != k) throw InvalidArgument("residue of " + v + " contradicts its valuation");
    if (k >= c.e && it->second != 0) throw InvalidArgument("residue of " + v + " contradicts its valuation");
  }
  for (const auto& [v, r] : res)
    if (std::find(m.vars().begin(), m.vars().end(), v) == m.vars().end())
      throw InvalidArgument("unknown variable " + v);
  return out;
}

}  // namespace detail

/// One dilatation per p-adic digit of the prescribed residues.
/// Residues refer to the original coordinates; they are first carried
/// through the model's earlier dilatations.
inline AffineModel apply_congruence(AffineModel m, const CongruenceCondition& c) {
  auto r = detail::condition_residues(m, c);
  BigInt p(c.p);
  int e = c.e;
  for (const auto& h : m.history()) {
    BigInt pe = big_pow(p, static_cast<unsigned>(e));
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (h.p == c.p) {
        if (big_mod(r[i] - h.center[i], p) != 0)
          throw CenterNotOnFiber("condition at " + std::to_string(c.p) + " misses an earlier dilatation center");
        r[i] = (r[i] - h.center[i]) / p;
      } else {
        r[i] = big_mod((r[i] - h.center[i]) * inv_mod(BigInt(h.p), pe), pe);
      }
    }
    if (h.p == c.p && --e == 0) return m;
  }
  for (int k = 0; k < e; ++k) {
    std::vector<BigInt> digit;
    for (auto& x : r) {
      digit.push_back(big_mod(x, p));
      x = x / p;
    }
    m = dilate(m, c.p, digit);
  }
  return m;
}

inline AffineModel model_for_congruences(const AffineModel& base, std::vector<CongruenceCondition> conds) {
  std::sort(conds.begin(), conds.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  for (std::size_t i = 1; i < conds.size(); ++i)
    if (conds[i].p == conds[i - 1].p) throw InvalidArgument("two conditions at " + std::to_string(conds[i].p));
  AffineModel m = base;
  for (const auto& c : conds) {
    if (std::binary_search(m.inverted().begin(), m.inverted().end(), c.p))
      throw InvalidArgument("condition at " + std::to_string(c.p) + ", which lies in S");
    m = apply_congruence(m, c);
  }
  return m;
}

inline AffineModel model_for_congruences(const TorusEmbedding<BigRational>& emb,
                                         const std::vector<CongruenceCondition>& conds, const std::vector<Place>& S,
                                         bool monic = false) {
  return model_for_congruences(clear_denominators(emb, S, monic), conds);
}

// ---- integral points ----

struct IntegralPoint {
  P1Point<BigRational> t;
  std::vector<BigRational> coords;  // original X_1..X_d, Y_1..Y_d
};

struct IntegralPointSet {
  std::vector<IntegralPoint> points;
  int exponent_bound;
  bool bound_stable;  // same set at exponent_bound + 10
  BigInt height_bound;
};

namespace detail {

inline bool p1_less(const P1Point<BigRational>& a, const P1Point<BigRational>& b) {
  if (!a || !b) return a.has_value() && !b.has_value();
  return *a < *b;
}

inline BigInt p1_height(const P1Point<BigRational>& t) { return t ? t->height() : BigInt(1); }

inline int default_exponent_bound(const ModelSource& src, const BigInt& H) {
  BigInt K = 1;
  for (std::size_t j = 0; j < src.scale.size(); ++j) {
    const auto& f = src.embedding.functions()[j];
    BigInt k = 2 * src.beta(j).height() * f.root.height() + 1;
    if (f.pole) k *= 2 * f.pole->height();
    K = std::max(K, k);
  }
  BigInt bound = K * H * H;
  int b = 0;
  while (bound > 0) {
    bound >>= 1;
    ++b;
  }
  return std::max(b, 1);
}

inline std::vector<IntegralPoint> integral_points_at(const AffineModel& m, const std::vector<std::int64_t>& S, int B,
                                                     const BigInt& H) {
  const ModelSource& src = *m.source();
  const std::size_t d = src.scale.size();
  std::vector<BigRational> X1s;
  if (d == 1) {
    X1s = enumerate_sunits(S, B);
  } else {
    // first image relation, in X coordinates: a X1 + b X2 = 1
    const auto& r = src.embedding.relations()[0];
    BigRational a = r.coeffs[0] / src.scale[0] / r.rhs, b = r.coeffs[1] / src.scale[1] / r.rhs;
    for (const auto& [u, w] : solve_unit_equation(S, B, a, b, false).solutions) X1s.push_back(u);
  }
  std::vector<IntegralPoint> out;
  for (const auto& X1 : X1s) {
    auto t = src.parameter(X1);
    if (p1_height(t) > H) continue;
    auto x = src.coords(t);
    if (!x) continue;
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) ok = sunit_exponents((*x)[j], S).has_value();
    for (const auto& h : m.history()) ok = ok && m.passes_history(h.p, *x);
    ok = ok && m.satisfies(*x);
    if (ok) out.push_back({t, *x});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return p1_less(a.t, b.t); });
  out.erase(std::unique(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t == b.t; }), out.end());
  return out;
}

}  // namespace detail

/// Points with S-integral model coordinates and parameter height <= H. The
/// exponent box defaults to one that contains every such point.
inline IntegralPointSet integral_points(const AffineModel& m, const std::vector<Place>& S, const BigInt& H,
                                        std::optional<int> exponent_bound = {}) {
  if (!m.source()) throw UnsupportedShape("integral points need a model attached to a curve or torus");
  auto primes = finite_primes(S);
  if (primes != m.inverted()) throw InvalidArgument("S does not match the primes inverted in the model");
  if (H < 1) throw InvalidArgument("height bound must be >= 1");
  int B = exponent_bound ? *exponent_bound : detail::default_exponent_bound(*m.source(), H);
  IntegralPointSet r{detail::integral_points_at(m, primes, B, H), B, false, H};
  auto wider = detail::integral_points_at(m, primes, B + 10, H);
  r.bound_stable = wider.size() == r.points.size();
  return r;
}

// ---- local points and the obstruction search ----

/// A residue class of t in P^1(Z_p) whose image lies in the model's
/// local integral points; coords are exact at the representative.
struct LocalClass {
  P1Point<BigRational> t;
  std::vector<BigRational> coords;
};

namespace detail {

inline int slack_at(const ModelSource& src, std::int64_t p) {
  int k = 0;
  std::vector<BigRational> pts;
  for (const auto& a : src.embedding.curve().D())
    if (a) pts.push_back(*a);
  for (std::size_t j = 0; j < src.scale.size(); ++j) {
    BigRational b = src.beta(j);
    k = std::max<int>(k, static_cast<int>(valuation(b.num(), p) + valuation(b.den(), p)));
  }
  for (const auto& a : pts) k = std::max<int>(k, static_cast<int>(valuation(a.den(), p)));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      BigRational diff = pts[i] - pts[j];
      k = std::max<int>(k, static_cast<int>(valuation(diff.num(), p)));
    }
  return k + 1;
}

}  // namespace detail

/// Classes of t modulo p^K (and near infinity, t = 1/(p r)), K = depth + slack.
inline std::vector<LocalClass> local_classes(const AffineModel& m, std::int64_t p, int depth) {
  const ModelSource& src = *m.source();
  const int K = std::max(depth, m.depth_at(p)) + detail::slack_at(src, p);
  const BigInt pK = big_pow(BigInt(p), static_cast<unsigned>(K));
  std::vector<LocalClass> out;
  auto consider = [&](const P1Point<BigRational>& t) {
    auto x = src.coords(t);
    if (!x) return false;
    for (const auto& c : *x)
      if (valuation(c.num(), p) > 0 || valuation(c.den(), p) > 0) return true;
    if (m.passes_history(p, *x)) out.push_back({t, *x});
    return true;
  };
  const std::int64_t n = to_i64(pK);
  for (std::int64_t r = 0; r < n; ++r)
    if (!consider(BigRational(r))) consider(BigRational(r + n));
  // t = 1/s, s in pZ_p; s = 0 is infinity
  for (std::int64_t r = 0; r < n / p; ++r) {
    if (r == 0) {
      if (!consider(std::nullopt)) consider(BigRational(1) / BigRational(BigInt(pK)));
      continue;
    }
    if (!consider(BigRational(1) / BigRational(p * r))) consider(BigRational(1) / BigRational(p * (r + n / p)));
  }
  return out;
}

struct LocalValueSet {
  std::int64_t p;
  int depth;
  std::size_t classes;
  std::vector<QmodZ> values;  // achievable local sums, sorted
};

struct SapVerdict {
  enum class Kind { IntegralPointFound, ObstructionFound, EmptyLocalPoints, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::vector<IntegralPoint> points;
  CharacterTuple tuple;
  std::vector<LocalValueSet> local_sets;
  std::int64_t empty_prime = 0;
  int empty_depth = 0;
  std::int64_t M = 0;
  BigInt H = 0;
  std::size_t tuples_scanned = 0;
  std::string reason;
};

inline std::string sap_kind_str(SapVerdict::Kind k) {
  switch (k) {
    case SapVerdict::Kind::IntegralPointFound: return "IntegralPointFound";
    case SapVerdict::Kind::ObstructionFound: return "ObstructionFound";
    case SapVerdict::Kind::EmptyLocalPoints: return "EmptyLocalPoints";
    default: return "Inconclusive";
  }
}

/// Minkowski sum of value sets.
inline std::vector<QmodZ> sum_sets(const std::vector<QmodZ>& a, const std::vector<QmodZ>& b) {
  std::set<QmodZ> s;
  for (auto x : a)
    for (auto y : b) s.insert(x + y);
  return {s.begin(), s.end()};
}

/// Integral point of height <= H; else a B_{1,S} tuple of conductor <= M
/// whose pairing misses 0 on the model's integral adelic points; else Inconclusive.
inline SapVerdict verify_sap(const AffineModel& m, const std::vector<Place>& S, std::int64_t M, const BigInt& H,
                             std::size_t max_tuples = 200000) {
  if (std::find(S.begin(), S.end(), Place::real()) == S.end())
    throw InvalidArgument("verify_sap needs the real place in S");
  SapVerdict r;
  r.M = M;
  r.H = H;
  if (!m.source()) {
    r.reason = "model has no attached curve";
    return r;
  }
  auto pts = integral_points(m, S, H);
  if (!pts.points.empty()) {
    r.kind = SapVerdict::Kind::IntegralPointFound;
    r.points = pts.points;
    return r;
  }
  const ModelSource& src = *m.source();
  auto Sp = finite_primes(S);
  auto in_S = [&](std::int64_t p) { return std::binary_search(Sp.begin(), Sp.end(), p); };

  // local solvability where P^1(F_p) can be covered or the model is modified
  std::set<std::int64_t> check;
  for (auto p : primes_up_to(static_cast<std::int64_t>(src.embedding.curve().D().size()))) check.insert(p);
  for (std::size_t j = 0; j < src.scale.size(); ++j) {
    BigRational b = src.beta(j);
    for (const auto& [p, e] : factor(big_abs(b.num()))) check.insert(to_i64(p));
    for (const auto& [p, e] : factor(b.den())) check.insert(to_i64(p));
  }
  for (const auto& h : m.history()) check.insert(h.p);
  for (auto p : check) {
    if (in_S(p)) continue;
    if (local_classes(m, p, 0).empty()) {
      r.kind = SapVerdict::Kind::EmptyLocalPoints;
      r.empty_prime = p;
      r.empty_depth = std::max(0, m.depth_at(p)) + detail::slack_at(src, p);
      return r;
    }
  }

  auto chars = b1s_characters(M, S);
  const std::size_t L = chars.size(), d = src.scale.size();
  // per prime: exponent, classes, and invariants val[class][j][i]
  struct PrimeData {
    std::int64_t p;
    int e;
    std::vector<LocalClass> classes;
    std::vector<std::vector<std::vector<QmodZ>>> val;
  };
  std::map<std::int64_t, PrimeData> primes;
  for (const auto& c : chars)
    for (auto p : prime_divisors(c.conductor())) {
      int e = static_cast<int>(valuation(BigInt(c.conductor()), p));
      auto& pd = primes[p];
      pd.p = p;
      pd.e = std::max(pd.e, e);
    }
  for (auto& [p, pd] : primes) {
    pd.classes = local_classes(m, p, pd.e);
    if (pd.classes.empty()) {
      r.kind = SapVerdict::Kind::EmptyLocalPoints;
      r.empty_prime = p;
      r.empty_depth = std::max(pd.e, m.depth_at(p)) + detail::slack_at(src, p);
      return r;
    }
    for (const auto& cl : pd.classes) {
      std::vector<std::vector<QmodZ>> per(d, std::vector<QmodZ>(L));
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < L; ++i)
          if (chars[i].conductor() % p == 0)
            per[j][i] = local_invariant(chars[i], Place::prime(p), LocalValue(cl.coords[j]));
      pd.val.push_back(std::move(per));
    }
  }

  auto local_set = [&](const PrimeData& pd, const std::vector<std::size_t>& idx) {
    std::set<QmodZ> s;
    for (const auto& per : pd.val) {
      QmodZ v;
      for (std::size_t j = 0; j < d; ++j) v += per[j][idx[j]];
      s.insert(v);
    }
    return std::vector<QmodZ>(s.begin(), s.end());
  };

  std::size_t lo = 0;
  while (lo < L) {
    std::size_t hi = lo;
    while (hi < L && chars[hi].conductor() == chars[lo].conductor()) ++hi;
    if (chars[lo].conductor() > 1) {
      std::size_t count = 1;
      for (std::size_t j = 0; j < d; ++j) count *= hi;
      if (r.tuples_scanned + count > max_tuples) {
        r.reason = "tuple budget exhausted at conductor " + std::to_string(chars[lo].conductor());
        return r;
      }
      auto decode = [&](std::size_t code) {
        std::vector<std::size_t> idx(d);
        for (std::size_t j = d; j-- > 0;) {
          idx[j] = code % hi;
          code /= hi;
        }
        return idx;
      };
      auto hit = parallel_find_first(count, [&](std::size_t code) {
        auto idx = decode(code);
        if (std::none_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= lo; })) return false;
        std::vector<QmodZ> total{QmodZ()};
        for (const auto& [p, pd] : primes) {
          bool rel = false;
          for (auto i : idx) rel = rel || chars[i].conductor() % p == 0;
          if (rel) total = sum_sets(total, local_set(pd, idx));
        }
        return std::find(total.begin(), total.end(), QmodZ()) == total.end();
      });
      r.tuples_scanned += count;
      if (hit) {
        auto idx = decode(*hit);
        r.kind = SapVerdict::Kind::ObstructionFound;
        for (auto i : idx) r.tuple.push_back(chars[i]);
        for (const auto& [p, pd] : primes) {
          bool rel = false;
          for (auto i : idx) rel = rel || chars[i].conductor() % p == 0;
          if (rel)
            r.local_sets.push_back({p, std::max(pd.e, m.depth_at(p)) + detail::slack_at(src, p), pd.classes.size(),
                                    local_set(pd, idx)});
        }
        return r;
      }
    }
    lo = hi;
  }
  r.reason = "no integral point of height <= " + H.str() + " and no obstruction of conductor <= " + std::to_string(M);
  return r;
}

}  // namespace adeleforge
