#pragma once

// Obstruction characters over F_q(t): unramified constant-field extensions and
// tame Kummer covers t -> f^(1/N), paired with adelic data through tame symbols.

#include <algorithm>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "curves.hpp"
#include "fq.hpp"
#include "parallel.hpp"
#include "place.hpp"
#include "reciprocity.hpp"

namespace adeleforge {

struct FFCharacter {
  enum class Kind { ConstantExt, Kummer };
  Kind kind = Kind::ConstantExt;
  int n = 2;                 // degree of the extension, or the Kummer exponent N
  std::optional<RatFunc> f;  // Kummer only

  static FFCharacter constant_ext(int n) {
    if (n < 2) throw InvalidArgument("constant extension degree must be >= 2");
    return {Kind::ConstantExt, n, std::nullopt};
  }
  static FFCharacter kummer(int N, RatFunc f) {
    if (N < 2) throw InvalidArgument("Kummer exponent must be >= 2");
    if (f.is_zero()) throw ZeroInput();
    if ((f.field().q() - 1) % N != 0)
      throw InvalidArgument("Kummer exponent " + std::to_string(N) + " does not divide q-1 = " +
                            std::to_string(f.field().q() - 1));
    return {Kind::Kummer, N, std::move(f)};
  }

  /// "const_ext(n)" or "kummer(N, f)".
  static FFCharacter parse(const FqField& F, std::string_view s) {
    std::string c;
    for (char ch : s)
      if (ch != ' ') c += ch;
    auto open = c.find('(');
    if (open == std::string::npos || c.back() != ')') throw ParseError("bad character: " + std::string(s));
    std::string head = c.substr(0, open), body = c.substr(open + 1, c.size() - open - 2);
    try {
      if (head == "const_ext") return constant_ext(std::stoi(body));
      if (head == "kummer") {
        auto comma = body.find(',');
        if (comma == std::string::npos) throw ParseError("kummer needs N and f");
        return kummer(std::stoi(body.substr(0, comma)), RatFunc::parse(F, body.substr(comma + 1)));
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad character: " + std::string(s));
    }
    throw ParseError("unknown character family: " + head);
  }

  std::string str() const {
    if (kind == Kind::ConstantExt) return "const_ext(" + std::to_string(n) + ")";
    return "kummer(" + std::to_string(n) + ", " + f->str() + ")";
  }
  friend bool operator==(const FFCharacter& a, const FFCharacter& b) {
    return a.kind == b.kind && a.n == b.n && a.f == b.f;
  }
};

/// (-1)^(ab) x^b f^(-a) at P, a = v_P(x), b = v_P(f); a unit, so its residue
/// in F_q[t]/(pi) (or in F_q at infinity) is returned.
inline FqPoly tame_symbol(const RatFunc& x, const RatFunc& f, const Place& P) {
  if (x.is_zero() || f.is_zero()) throw ZeroInput();
  auto [a, ux] = ff_val_unit(x, P);
  auto [b, uf] = ff_val_unit(f, P);
  const FqField& F = x.field();
  if (P.is_ff_infinity()) {
    auto pw = [&](FqElem u, long long e) {
      return e >= 0 ? F.pow(u, static_cast<std::uint64_t>(e)) : F.pow(F.inv(u), static_cast<std::uint64_t>(-e));
    };
    FqElem r = F.mul(pw(ux.coeff(0), b), pw(uf.coeff(0), -a));
    if ((a * b) % 2 != 0) r = F.neg(r);
    return FqPoly::constant(F, r);
  }
  ResidueField k(P.pi());
  auto pw = [&](const FqPoly& u, long long e) {
    return e >= 0 ? k.pow(u, static_cast<std::uint64_t>(e)) : k.pow(k.inv(u), static_cast<std::uint64_t>(-e));
  };
  FqPoly r = k.mul(pw(ux, b), pw(uf, -a));
  if ((a * b) % 2 != 0) r = k.reduce(-r);
  return r;
}

/// Norm of a residue-field element at P down to F_q.
inline FqElem ff_residue_norm(const FqPoly& r, const Place& P) {
  if (P.is_ff_infinity()) return r.coeff(0);
  return ResidueField(P.pi()).norm(r);
}

inline QmodZ ff_local_invariant(const FFCharacter& chi, const Place& P, const RatFunc& x) {
  if (x.is_zero()) throw ZeroInput();
  if (chi.kind == FFCharacter::Kind::ConstantExt)
    return QmodZ(ff_val_unit(x, P).valuation * P.degree(), chi.n);
  if (chi.f->field().q() != x.field().q()) throw InvalidArgument("character and point over different fields");
  const FqField& F = x.field();
  FqElem nm = ff_residue_norm(tame_symbol(x, *chi.f, P), P);
  return QmodZ(static_cast<std::int64_t>(F.dlog(nm)) % chi.n, chi.n);
}

/// Places where x is not a unit (infinity included when v_inf(x) != 0).
inline std::set<Place> ff_support(const RatFunc& x) {
  if (x.is_zero()) throw ZeroInput();
  std::set<Place> out;
  for (const FqPoly* g : {&x.num(), &x.den()})
    if (g->degree() > 0)
      for (const auto& [pi, m] : factor(*g).factors) out.insert(Place::ff_prime(pi));
  if (x.num().degree() != x.den().degree()) out.insert(Place::ff_infinity());
  return out;
}

/// Places where the character can be nonzero on units.
inline std::set<Place> ff_ramification(const FFCharacter& chi) {
  if (chi.kind == FFCharacter::Kind::ConstantExt) return {};
  auto s = ff_support(*chi.f);
  s.insert(Place::ff_infinity());
  return s;
}

/// Product over all places of the norms of tame symbols; Weil reciprocity says 1.
inline FqElem ff_norm_product(const RatFunc& x, const RatFunc& f) {
  auto places = ff_support(x);
  for (const auto& P : ff_support(f)) places.insert(P);
  places.insert(Place::ff_infinity());
  const FqField& F = x.field();
  FqElem r = 1;
  for (const auto& P : places) r = F.mul(r, ff_residue_norm(tame_symbol(x, f, P), P));
  return r;
}

/// Sum over every place of F_q(t) of the local invariants of x.
inline QmodZ ff_global_sum(const FFCharacter& chi, const RatFunc& x) {
  auto places = ff_support(x);
  for (const auto& P : ff_ramification(chi)) places.insert(P);
  QmodZ s;
  for (const auto& P : places) s += ff_local_invariant(chi, P, x);
  return s;
}

/// Whether the local invariant at P vanishes on all of F_P^*. Units are
/// covered by N | v_P(f) (norms from k(P) onto F_q are surjective), and one
/// uniformizer completes a generating set.
inline bool ff_locally_trivial(const FFCharacter& chi, const Place& P) {
  if (chi.kind == FFCharacter::Kind::ConstantExt) return P.degree() % chi.n == 0;
  if (ff_val_unit(*chi.f, P).valuation % chi.n != 0) return false;
  const FqField& F = chi.f->field();
  RatFunc pi = P.is_ff_infinity() ? RatFunc::t(F).inverse() : RatFunc(P.pi());
  return ff_local_invariant(chi, P, pi).is_zero();
}

struct FFBounds {
  int n_max = 6;
  int f_degree = 2;            // irreducibles up to this degree join {t - a}
  std::vector<RatFunc> extra_f;

  std::string str() const {
    std::string s = "n<=" + std::to_string(n_max) + ", N|q-1, f in {t-a} + irreducibles of degree <= " +
                    std::to_string(f_degree);
    if (!extra_f.empty()) s += " + " + std::to_string(extra_f.size()) + " extra";
    return s;
  }
};

/// The finite character family in scan order: constant extensions by n, then
/// Kummer covers by N and within N by the generator list.
inline std::vector<FFCharacter> ff_characters(const FqField& F, const FFBounds& b) {
  std::vector<FFCharacter> out;
  for (int n = 2; n <= b.n_max; ++n) out.push_back(FFCharacter::constant_ext(n));
  std::vector<RatFunc> gens;
  for (FqElem a = 0; a < static_cast<FqElem>(F.q()); ++a) gens.emplace_back(FqPoly::linear(F, a));
  for (int d = 2; d <= b.f_degree; ++d)
    for (const auto& pi : monic_irreducibles(F, d)) gens.emplace_back(pi);
  for (const auto& g : b.extra_f) {
    if (g.field().q() != F.q()) throw InvalidArgument("extra Kummer function over a different field");
    if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  }
  for (int N = 2; N <= F.q() - 1; ++N) {
    if ((F.q() - 1) % N != 0) continue;
    for (const auto& g : gens) out.push_back(FFCharacter::kummer(N, g));
  }
  return out;
}

/// Adelic point of G_m^d over F_q(t) with exact local coordinates.
class FFAdelicPoint {
 public:
  enum class Default { UnitElsewhere, Constant };

  FFAdelicPoint(const FqField& F, int rank) : field_(&F), rank_(rank) {
    if (rank < 1) throw InvalidArgument("torus rank must be >= 1");
  }
  static FFAdelicPoint diagonal(const std::vector<RatFunc>& c) {
    if (c.empty()) throw InvalidArgument("torus rank must be >= 1");
    FFAdelicPoint x(c[0].field(), static_cast<int>(c.size()));
    x.set_constant_default(c);
    return x;
  }

  const FqField& field() const { return *field_; }
  int rank() const { return rank_; }
  Default default_rule() const { return default_; }
  const std::vector<RatFunc>& constant() const { return constant_; }
  const std::map<Place, std::vector<RatFunc>>& components() const { return explicit_; }

  void set_component(const Place& P, std::vector<RatFunc> coords) {
    if (!P.is_ff()) throw InvalidArgument("expected a function-field place, got " + P.str());
    check(coords, "component at " + P.str());
    explicit_.insert_or_assign(P, std::move(coords));
  }
  void set_constant_default(std::vector<RatFunc> c) {
    check(c, "constant default");
    default_ = Default::Constant;
    constant_ = std::move(c);
  }
  void set_unit_default() {
    default_ = Default::UnitElsewhere;
    constant_.clear();
  }

  std::optional<RatFunc> value(const Place& P, int j) const {
    auto it = explicit_.find(P);
    if (it != explicit_.end()) return it->second[static_cast<std::size_t>(j)];
    if (default_ == Default::Constant) return constant_[static_cast<std::size_t>(j)];
    return std::nullopt;
  }

 private:
  void check(const std::vector<RatFunc>& c, const std::string& what) const {
    if (static_cast<int>(c.size()) != rank_) throw InvalidArgument(what + " has wrong length");
    for (const auto& x : c) {
      if (x.is_zero()) throw ZeroInput();
      if (x.field().q() != field_->q()) throw InvalidArgument(what + " over a different field");
    }
  }

  const FqField* field_;
  int rank_;
  std::map<Place, std::vector<RatFunc>> explicit_;
  Default default_ = Default::UnitElsewhere;
  std::vector<RatFunc> constant_;
};

/// Pairing of coordinate j with chi over the places outside S. Every place
/// where the summand can be nonzero is visited, so no reciprocity is assumed.
inline QmodZ ff_pair_coordinate(const FFAdelicPoint& x, int j, const FFCharacter& chi, const std::set<Place>& S) {
  std::set<Place> places;
  for (const auto& [P, c] : x.components()) places.insert(P);
  auto ram = ff_ramification(chi);
  if (x.default_rule() == FFAdelicPoint::Default::Constant) {
    for (const auto& P : ff_support(x.constant()[static_cast<std::size_t>(j)])) places.insert(P);
    places.insert(ram.begin(), ram.end());
  } else {
    ram.insert(Place::ff_infinity());
    for (const auto& P : ram)
      if (!S.count(P) && !x.components().count(P))
        throw InsufficientPrecision("coordinate " + std::to_string(j) + " at " + P.str() + " (needed by " + chi.str() +
                                    ")");
  }
  QmodZ s;
  for (const auto& P : places)
    if (!S.count(P)) s += ff_local_invariant(chi, P, *x.value(P, j));
  return s;
}

struct FFObstructed {
  FFCharacter character;
  int coordinate;
  QmodZ value;
};
struct FFSurvivesUpTo {
  FFBounds bounds;
};
using FFSurvivalVerdict = std::variant<FFObstructed, FFSurvivesUpTo>;

/// Characters of the family that are locally trivial at every place of S.
inline std::vector<FFCharacter> ff_admissible_characters(const FqField& F, const std::vector<Place>& S,
                                                         const FFBounds& b) {
  std::vector<FFCharacter> out;
  for (auto& chi : ff_characters(F, b)) {
    bool ok = true;
    for (const auto& P : S) ok = ok && ff_locally_trivial(chi, P);
    if (ok) out.push_back(std::move(chi));
  }
  return out;
}

/// First (character, coordinate) with nonzero pairing in scan order.
inline FFSurvivalVerdict ff_survives(const FFAdelicPoint& x, const std::vector<Place>& S, const FFBounds& b = {}) {
  for (const auto& P : S)
    if (!P.is_ff()) throw InvalidArgument("expected function-field places, got " + P.str());
  std::set<Place> omit(S.begin(), S.end());
  auto chars = ff_admissible_characters(x.field(), S, b);
  const std::size_t d = static_cast<std::size_t>(x.rank());
  std::vector<std::optional<QmodZ>> vals(chars.size() * d);
  std::vector<std::exception_ptr> errs(chars.size() * d);
  auto hit = parallel_find_first(vals.size(), [&](std::size_t i) {
    try {
      vals[i] = ff_pair_coordinate(x, static_cast<int>(i % d), chars[i / d], omit);
      return !vals[i]->is_zero();
    } catch (const InsufficientPrecision&) {
      errs[i] = std::current_exception();
      return true;
    }
  });
  if (!hit) return FFSurvivesUpTo{b};
  if (errs[*hit]) std::rethrow_exception(errs[*hit]);
  return FFObstructed{chars[*hit / d], static_cast<int>(*hit % d), *vals[*hit]};
}

/// Curve data over F_q(t): exact local points, and a constant default.
struct FFCurveData {
  std::map<Place, RatFunc> local;
  std::optional<RatFunc> constant;  // unset: the torus image is a unit elsewhere
};

inline FFAdelicPoint ff_to_torus(const TorusEmbedding<RatFunc>& emb, const FFCurveData& data) {
  const FqField& F = emb.curve().basepoint().field();
  FFAdelicPoint x(F, emb.rank());
  if (data.constant) x.set_constant_default(emb.apply(*data.constant));
  for (const auto& [P, t] : data.local) x.set_component(P, emb.apply(t));
  return x;
}

inline FFSurvivalVerdict ff_curve_survives(const TorusEmbedding<RatFunc>& emb, const std::vector<Place>& S,
                                           const FFCurveData& data, const FFBounds& b = {}) {
  return ff_survives(ff_to_torus(emb, data), S, b);
}

/// Infinity, then monic irreducibles by degree.
inline std::vector<Place> ff_places_up_to(const FqField& F, int degree) {
  std::vector<Place> out{Place::ff_infinity()};
  for (int d = 1; d <= degree; ++d)
    for (const auto& pi : monic_irreducibles(F, d)) out.push_back(Place::ff_prime(pi));
  return out;
}

}  // namespace adeleforge
