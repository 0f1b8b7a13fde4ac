#pragma once

// Adelic points of split tori over Q at finite precision and the
// Brauer-Manin pairing against tuples of Dirichlet characters.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "reciprocity.hpp"

namespace adeleforge {

using CharacterTuple = std::vector<DirichletCharacter>;

inline std::string tuple_str(const CharacterTuple& xi) {
  std::string s = "(";
  for (std::size_t i = 0; i < xi.size(); ++i) s += (i ? "," : "") + xi[i].str();
  return s + ")";
}

inline std::int64_t max_conductor(const CharacterTuple& xi) {
  std::int64_t m = 1;
  for (const auto& c : xi) m = std::max(m, c.conductor());
  return m;
}

/// Finite description of a point of G_m^d over the adeles (minus S).
///
/// Unlisted places follow the default rule: UnitElsewhere (each coordinate a
/// unit with unknown residue) or Constant (the coordinates of a fixed rational
/// point, which makes diagonal points and "diagonal except at v" descriptions
/// finite).
class AdelicPoint {
 public:
  enum class Default { UnitElsewhere, Constant };

  explicit AdelicPoint(int rank, std::set<Place> excluded = {}) : rank_(rank), excluded_(std::move(excluded)) {
    if (rank < 1) throw InvalidArgument("torus rank must be >= 1");
  }

  static AdelicPoint diagonal(const std::vector<BigRational>& q, std::set<Place> excluded = {}) {
    AdelicPoint x(static_cast<int>(q.size()), std::move(excluded));
    x.set_constant_default(q);
    return x;
  }

  int rank() const { return rank_; }
  const std::set<Place>& excluded() const { return excluded_; }
  const std::map<Place, std::vector<LocalValue>>& components() const { return explicit_; }
  Default default_rule() const { return default_; }
  const std::vector<BigRational>& constant() const { return constant_; }

  void set_component(const Place& v, std::vector<LocalValue> coords) {
    if (static_cast<int>(coords.size()) != rank_) throw InvalidArgument("component at " + v.str() + " has wrong length");
    if (excluded_.count(v)) throw InvalidArgument("component given at excluded place " + v.str());
    if (!v.is_real() && !v.is_prime()) throw InvalidArgument("adelic points over Q live on places of Q");
    for (const auto& c : coords) {
      if (v.is_prime() && !c.is_real() && c.is_padic() && c.padic().prime() != v.p()) throw PrimeMismatch();
      if (v.is_prime() && c.is_real()) throw InvalidArgument("real datum at finite place " + v.str());
      if (v.is_real() && c.is_padic()) throw InvalidArgument("p-adic datum at the real place");
    }
    explicit_.insert_or_assign(v, std::move(coords));
  }

  void set_constant_default(std::vector<BigRational> q) {
    if (static_cast<int>(q.size()) != rank_) throw InvalidArgument("constant default has wrong length");
    for (const auto& c : q)
      if (c.is_zero()) throw ZeroInput();
    default_ = Default::Constant;
    constant_ = std::move(q);
  }
  void set_unit_default() {
    default_ = Default::UnitElsewhere;
    constant_.clear();
  }

  /// Local value of coordinate j at v; nullopt when unknown beyond "unit".
  std::optional<LocalValue> value(const Place& v, int j) const {
    auto it = explicit_.find(v);
    if (it != explicit_.end()) return it->second[static_cast<std::size_t>(j)];
    if (default_ == Default::Constant) return LocalValue(constant_[static_cast<std::size_t>(j)]);
    return std::nullopt;
  }

  /// Places outside the conductor where coordinate j may be a non-unit.
  std::set<Place> support(int j) const {
    std::set<Place> out;
    for (const auto& [v, c] : explicit_) out.insert(v);
    if (default_ == Default::Constant) {
      const BigRational& c = constant_[static_cast<std::size_t>(j)];
      for (auto& [p, e] : factor(c.num())) out.insert(Place::prime(to_i64(p)));
      for (auto& [p, e] : factor(c.den())) out.insert(Place::prime(to_i64(p)));
    }
    return out;
  }

 private:
  int rank_;
  std::set<Place> excluded_;
  std::map<Place, std::vector<LocalValue>> explicit_;
  Default default_ = Default::UnitElsewhere;
  std::vector<BigRational> constant_;
};

/// Pairing of coordinate j with chi, summed over places outside `omit`.
/// With restricted = false, a conductor prime (or the real place for odd chi)
/// inside `omit` raises RelevantPlaceExcluded.
inline QmodZ pair_coordinate(const AdelicPoint& x, int j, const DirichletCharacter& chi, const std::set<Place>& omit,
                             bool restricted = false) {
  if (chi.is_trivial()) return {};
  std::set<Place> places = x.support(j);
  places.insert(Place::real());
  for (std::int64_t p : prime_divisors(chi.modulus())) places.insert(Place::prime(p));
  QmodZ total;
  const std::string coord = " coordinate " + std::to_string(j + 1);
  for (const Place& v : places) {
    bool needs_residue = v.is_real() ? !chi.is_even() : chi.modulus() % v.p() == 0;
    if (omit.count(v)) {
      if (needs_residue && !restricted)
        throw RelevantPlaceExcluded("place " + v.str() + " is relevant to " + chi.str() + " but excluded");
      continue;
    }
    auto val = x.value(v, j);
    if (!val) {
      if (needs_residue) throw InsufficientPrecision("place " + v.str() + coord + ": no residue data");
      continue;
    }
    try {
      total += local_invariant(chi, v, *val, "place " + v.str() + coord);
    } catch (const UnknownSign&) {
      throw InsufficientPrecision("place " + v.str() + coord + ": sign unknown");
    }
  }
  return total;
}

/// Sum over v outside S (the point's excluded set) and over coordinates.
inline QmodZ bm_pair(const AdelicPoint& x, const CharacterTuple& xi, bool restricted = false) {
  if (static_cast<int>(xi.size()) != x.rank()) throw InvalidArgument("character tuple length differs from torus rank");
  QmodZ s;
  for (int j = 0; j < x.rank(); ++j) s += pair_coordinate(x, j, xi[static_cast<std::size_t>(j)], x.excluded(), restricted);
  return s;
}

/// Pairing undetermined for the named tuple (first such in canonical order).
struct PairingUndetermined : InsufficientPrecision {
  CharacterTuple tuple;
  PairingUndetermined(const std::string& where_, CharacterTuple t)
      : InsufficientPrecision(where_ + " for tuple " + tuple_str(t)), tuple(std::move(t)) {}
};

struct Obstructed {
  CharacterTuple tuple;
  QmodZ value;
};
struct SurvivesUpTo {
  std::int64_t M;
};
using SurvivalVerdict = std::variant<Obstructed, SurvivesUpTo>;

namespace detail {

// Set of achievable sums summarized as empty / one value / several.
struct SumSummary {
  enum Kind { Empty, Single, Many } kind = Empty;
  QmodZ value;
  bool can_fail = false;

  void add_option(const SumSummary& o) {
    can_fail = can_fail || o.can_fail;
    if (o.kind == Empty) return;
    if (kind == Empty) {
      kind = o.kind;
      value = o.value;
    } else if (kind == Single && o.kind == Single && o.value == value) {
      return;
    } else {
      kind = Many;
    }
  }
  static SumSummary shifted(const SumSummary& s, QmodZ v) {
    SumSummary r = s;
    r.value = s.value + v;
    return r;
  }
  bool has_nonzero_with(QmodZ prefix) const {
    if (kind == Many) return true;
    if (kind == Single) return !(value + prefix).is_zero();
    return false;
  }
};

}  // namespace detail

/// Scan B_{1,S} tuples of conductor <= M in canonical order (max conductor,
/// then lexicographic over the character index).
inline SurvivalVerdict survives(const AdelicPoint& x, const std::vector<Place>& S, std::int64_t M) {
  bool has_real = false;
  for (const auto& v : S) has_real = has_real || v.is_real();
  if (!has_real) throw InvalidArgument("S must contain the real place over Q");
  std::set<Place> omit(S.begin(), S.end());
  omit.insert(x.excluded().begin(), x.excluded().end());
  auto chars = b1s_characters(M, S);
  const std::size_t L = chars.size();
  const int d = x.rank();

  std::vector<std::vector<std::optional<QmodZ>>> vals(static_cast<std::size_t>(d), std::vector<std::optional<QmodZ>>(L));
  std::vector<std::vector<std::string>> errs(static_cast<std::size_t>(d), std::vector<std::string>(L));
  bool all_zero = true;
  for (int j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < L; ++i) {
      try {
        vals[static_cast<std::size_t>(j)][i] = pair_coordinate(x, j, chars[i], omit);
        if (!vals[static_cast<std::size_t>(j)][i]->is_zero()) all_zero = false;
      } catch (const InsufficientPrecision& e) {
        errs[static_cast<std::size_t>(j)][i] = e.where;
        all_zero = false;
      }
    }
  }
  if (all_zero) return SurvivesUpTo{M};

  // level boundaries: chars[lo, hi) all have the same conductor
  std::size_t lo = 0;
  while (lo < L) {
    std::size_t hi = lo;
    while (hi < L && chars[hi].conductor() == chars[lo].conductor()) ++hi;
    // suffix summaries: S[j][need] over coordinates j..d-1, indices < hi,
    // need = at least one index in [lo, hi) still required
    std::vector<std::array<detail::SumSummary, 2>> suf(static_cast<std::size_t>(d + 1));
    suf[static_cast<std::size_t>(d)][0].kind = detail::SumSummary::Single;
    for (int j = d - 1; j >= 0; --j) {
      for (int need = 0; need < 2; ++need) {
        detail::SumSummary acc;
        for (std::size_t i = 0; i < hi; ++i) {
          bool in_level = i >= lo;
          int next_need = (need && !in_level) ? 1 : 0;
          const auto& rest = suf[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(next_need)];
          if (rest.kind == detail::SumSummary::Empty && !rest.can_fail) continue;
          const auto& v = vals[static_cast<std::size_t>(j)][i];
          detail::SumSummary opt;
          if (!v) {
            opt.can_fail = true;
          } else {
            opt = detail::SumSummary::shifted(rest, *v);
          }
          acc.add_option(opt);
        }
        suf[static_cast<std::size_t>(j)][static_cast<std::size_t>(need)] = acc;
      }
    }
    const auto& top = suf[0][1];
    if (top.can_fail || top.has_nonzero_with(QmodZ())) {
      // descend lexicographically to the first hit
      std::vector<std::size_t> idx;
      QmodZ prefix;
      int need = 1;
      for (int j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < hi; ++i) {
          bool in_level = i >= lo;
          int next_need = (need && !in_level) ? 1 : 0;
          const auto& rest = suf[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(next_need)];
          if (rest.kind == detail::SumSummary::Empty && !rest.can_fail) continue;
          const auto& v = vals[static_cast<std::size_t>(j)][i];
          if (!v) {
            CharacterTuple t;
            for (std::size_t k : idx) t.push_back(chars[k]);
            t.push_back(chars[i]);
            // smallest completion: trivial characters, with a level character last if still required
            for (int k = j + 1; k < d; ++k) t.push_back(next_need && k == d - 1 ? chars[lo] : chars[0]);
            throw PairingUndetermined(errs[static_cast<std::size_t>(j)][i], t);
          }
          if (rest.can_fail || rest.has_nonzero_with(prefix + *v)) {
            idx.push_back(i);
            prefix += *v;
            need = next_need;
            break;
          }
        }
      }
      CharacterTuple t;
      for (std::size_t k : idx) t.push_back(chars[k]);
      return Obstructed{t, prefix};
    }
    lo = hi;
  }
  return SurvivesUpTo{M};
}

namespace detail {

inline std::vector<BigRational> rationals_of_height(std::int64_t H) {
  std::vector<BigRational> out;
  for (std::int64_t h = 1; h <= H; ++h) {
    std::vector<BigRational> level;
    // height exactly h: |n| = h with den <= h, or den = h with |n| < h
    for (std::int64_t dd = 1; dd <= h; ++dd)
      if (gcd_i64(h, dd) == 1) level.emplace_back(BigInt(h), BigInt(dd));
    for (std::int64_t n = 1; n < h; ++n)
      if (gcd_i64(n, h) == 1) level.emplace_back(BigInt(n), BigInt(h));
    std::sort(level.begin(), level.end());
    for (const auto& r : level) {
      out.push_back(r);
      out.push_back(-r);
    }
  }
  return out;
}

}  // namespace detail

/// Rational points of height <= H consistent with every explicit datum of x.
inline std::vector<std::vector<BigRational>> match_rational(const AdelicPoint& x, std::int64_t H) {
  std::vector<std::vector<BigRational>> per;
  for (int j = 0; j < x.rank(); ++j) {
    std::vector<BigRational> cands;
    if (x.default_rule() == AdelicPoint::Default::Constant) {
      const BigRational& c = x.constant()[static_cast<std::size_t>(j)];
      if (c.height() <= H) cands.push_back(c);
    } else {
      cands = detail::rationals_of_height(H);
    }
    std::vector<BigRational> ok;
    for (const auto& q : cands) {
      bool good = true;
      for (const auto& [v, coords] : x.components()) {
        if (!coords[static_cast<std::size_t>(j)].matches(q, v)) {
          good = false;
          break;
        }
      }
      if (good && x.default_rule() == AdelicPoint::Default::UnitElsewhere) {
        for (const BigInt* n : {&q.num(), &q.den()}) {
          for (auto& [p, e] : factor(*n)) {
            Place v = Place::prime(to_i64(p));
            if (!x.components().count(v) && !x.excluded().count(v)) good = false;
          }
        }
      }
      if (good) ok.push_back(q);
    }
    per.push_back(std::move(ok));
  }
  std::vector<std::vector<BigRational>> out{{}};
  for (const auto& opts : per) {
    std::vector<std::vector<BigRational>> next;
    for (const auto& pre : out) {
      for (const auto& q : opts) {
        auto t = pre;
        t.push_back(q);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace adeleforge
