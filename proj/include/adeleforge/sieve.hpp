#pragma once

// Sieving an adelic point of a split torus against a finite set of rational
// points: localization modulo N-th powers at primes v0 = 1 (mod N), Selmer
// groups of mu_N, and the lattice check behind the constants c and h.

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "parallel.hpp"
#include "sunits.hpp"
#include "toruslab.hpp"

namespace adeleforge {

using TorusPoint = std::vector<BigRational>;

/// Finitely many distinct rational points of G_m^d.
class FiniteSubscheme {
 public:
  FiniteSubscheme(int rank, std::vector<TorusPoint> pts) : rank_(rank), pts_(std::move(pts)) {
    if (rank < 1) throw InvalidArgument("torus rank must be >= 1");
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (static_cast<int>(pts_[i].size()) != rank) throw InvalidArgument("subscheme point of wrong length");
      for (const auto& c : pts_[i])
        if (c.is_zero()) throw ZeroInput();
      for (std::size_t k = 0; k < i; ++k)
        if (pts_[k] == pts_[i]) throw InvalidArgument("repeated subscheme point");
    }
  }
  int rank() const { return rank_; }
  const std::vector<TorusPoint>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

 private:
  int rank_;
  std::vector<TorusPoint> pts_;
};

inline std::string point_str(const TorusPoint& z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + z[i].str();
  return s + ")";
}

// ---- localization ----

namespace detail {

/// k in [0, n) with a^((p-1)/n) = g^(k (p-1)/n), g the least primitive root.
inline std::int64_t dlog_mod(std::int64_t a, std::int64_t p, std::int64_t n) {
  std::int64_t e = (p - 1) / n;
  std::int64_t target = powmod(mod_i64(a, p), static_cast<std::uint64_t>(e), p);
  std::int64_t zeta = powmod(primitive_root(p), static_cast<std::uint64_t>(e), p);
  std::int64_t cur = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    if (cur == target) return k;
    cur = mulmod(cur, zeta, p);
  }
  throw InvalidArgument("residue is not a unit");
}

inline void require_split(std::int64_t v0, std::int64_t N) {
  if (N < 1) throw InvalidArgument("N must be >= 1");
  if (!is_prime(v0)) throw InvalidArgument(std::to_string(v0) + " is not prime");
  if ((v0 - 1) % N != 0) throw NotSplit(std::to_string(v0) + " is not 1 mod " + std::to_string(N));
}

inline std::int64_t residue_at(const LocalValue& x, std::int64_t v0, const std::string& where) {
  if (x.valuation(v0) != 0) throw NonUnitAtV0(where + " is not a unit at " + std::to_string(v0));
  return to_i64(x.unit_residue(v0, 1, where));
}

}  // namespace detail

/// Class of a unit at v0 in F_v0^* / (F_v0^*)^N = Z/N.
inline std::int64_t localize_mod_N(const LocalValue& x, std::int64_t v0, std::int64_t N) {
  detail::require_split(v0, N);
  return detail::dlog_mod(detail::residue_at(x, v0, "place " + std::to_string(v0)), v0, N);
}

inline std::vector<std::int64_t> localize_mod_N(const std::vector<LocalValue>& x, std::int64_t v0, std::int64_t N) {
  detail::require_split(v0, N);
  std::vector<std::int64_t> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::string where = "place " + std::to_string(v0) + " coordinate " + std::to_string(j + 1);
    out.push_back(detail::dlog_mod(detail::residue_at(x[j], v0, where), v0, N));
  }
  return out;
}

// ---- separation ----

struct SeparationWitness {
  std::size_t z_index;
  int coordinate;          // 0-based
  std::int64_t x_residue;  // x_j mod v0
  std::int64_t z_residue;  // z_j mod v0
  std::int64_t power;      // ((x_j / z_j) mod v0)^((v0-1)/N), never 1
};

struct Separation {
  std::int64_t N;
  std::int64_t v0;
  std::vector<SeparationWitness> witnesses;  // one per point of Z
};

namespace detail {

inline std::set<Place> omit_set(const AdelicPoint& x, const std::vector<Place>& S) {
  std::set<Place> omit(S.begin(), S.end());
  omit.insert(x.excluded().begin(), x.excluded().end());
  return omit;
}

inline bool divides_support(std::int64_t p, const FiniteSubscheme& Z) {
  for (const auto& z : Z.points())
    for (const auto& c : z)
      if (c.num() % p == 0 || c.den() % p == 0) return true;
  return false;
}

/// Witnesses at v0, or nullopt when v0 is unusable or fails to separate.
inline std::optional<Separation> try_separate(const AdelicPoint& x, const FiniteSubscheme& Z, std::int64_t N,
                                              std::int64_t v0) {
  const int d = x.rank();
  std::vector<std::int64_t> xr;
  for (int j = 0; j < d; ++j) {
    auto val = x.value(Place::prime(v0), j);
    if (!val) return std::nullopt;
    if (val->valuation(v0) != 0) return std::nullopt;
    xr.push_back(to_i64(val->unit_residue(v0, 1, "place " + std::to_string(v0))));
  }
  Separation sep{N, v0, {}};
  const auto e = static_cast<std::uint64_t>((v0 - 1) / N);
  for (std::size_t k = 0; k < Z.size(); ++k) {
    bool found = false;
    for (int j = 0; j < d && !found; ++j) {
      std::int64_t zr = to_i64(Z.points()[k][static_cast<std::size_t>(j)].residue(BigInt(v0)));
      std::int64_t ratio = mulmod(xr[static_cast<std::size_t>(j)], inv_mod(zr, v0), v0);
      std::int64_t pw = powmod(ratio, e, v0);
      if (pw != 1) {
        sep.witnesses.push_back({k, j, xr[static_cast<std::size_t>(j)], zr, pw});
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return sep;
}

}  // namespace detail

/// Smallest usable v0 <= P separating x from every point of Z modulo N-th
/// powers. Primes in S, in x's excluded set, or in the support of Z are
/// skipped, as are primes where x carries no unit residue.
inline std::optional<Separation> separating_prime(const AdelicPoint& x, const FiniteSubscheme& Z, std::int64_t N,
                                                  std::int64_t P, const std::vector<Place>& S = {}) {
  if (Z.rank() != x.rank()) throw InvalidArgument("subscheme and point have different ranks");
  if (N < 2) throw InvalidArgument("N must be >= 2");
  auto omit = detail::omit_set(x, S);
  std::vector<std::int64_t> cands;
  for (std::int64_t p : primes_up_to(P))
    if ((p - 1) % N == 0 && !omit.count(Place::prime(p)) && !detail::divides_support(p, Z)) cands.push_back(p);
  std::vector<std::optional<Separation>> found(cands.size());
  auto hit = parallel_find_first(cands.size(), [&](std::size_t i) {
    found[i] = detail::try_separate(x, Z, N, cands[i]);
    return found[i].has_value();
  });
  if (!hit) return std::nullopt;
  return found[*hit];
}

/// Independent re-check of an exclusion certificate.
inline bool check_separation(const Separation& s, const FiniteSubscheme& Z) {
  if (s.N < 2 || !is_prime(s.v0) || (s.v0 - 1) % s.N != 0) return false;
  if (s.witnesses.size() != Z.size()) return false;
  for (std::size_t k = 0; k < Z.size(); ++k) {
    const auto& w = s.witnesses[k];
    if (w.z_index != k || w.coordinate < 0 || w.coordinate >= Z.rank()) return false;
    const BigRational& zj = Z.points()[k][static_cast<std::size_t>(w.coordinate)];
    if (zj.num() % s.v0 == 0 || zj.den() % s.v0 == 0) return false;
    if (to_i64(zj.residue(BigInt(s.v0))) != w.z_residue) return false;
    std::int64_t ratio = mulmod(w.x_residue, inv_mod(w.z_residue, s.v0), s.v0);
    std::int64_t pw = powmod(ratio, static_cast<std::uint64_t>((s.v0 - 1) / s.N), s.v0);
    if (pw != w.power || pw == 1) return false;
  }
  return true;
}

// ---- membership ----

struct SieveParams {
  std::vector<std::int64_t> schedule{2, 3, 5, 4, 6};
  std::int64_t prime_bound = 10000;
};

struct MembershipVerdict {
  enum class Kind { Member, Excluded, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::size_t z_index = 0;                 // Member
  std::vector<std::string> checks;         // Member: consistency checks passed
  std::optional<Separation> separation;    // Excluded
  std::vector<TorusPoint> torsion_twists;  // z*t (t != 1) consistent with x; rational but outside Z
  std::string reason;                      // Inconclusive
};

namespace detail {

/// Is x the diagonal image of the rational point q, as far as its data says?
inline bool consistent_with(const AdelicPoint& x, const TorusPoint& q, const std::set<Place>& omit,
                            std::vector<std::string>* checks) {
  for (const auto& [v, coords] : x.components()) {
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (!coords[j].matches(q[j], v)) return false;
      if (checks) checks->push_back("place " + v.str() + " coordinate " + std::to_string(j + 1) + ": " +
                                    coords[j].str() + " matches " + q[j].str());
    }
  }
  if (x.default_rule() == AdelicPoint::Default::Constant) {
    if (x.constant() != q) return false;
    if (checks) checks->push_back("default rule: constant " + point_str(q));
  } else {
    for (std::size_t j = 0; j < q.size(); ++j) {
      for (const BigInt* n : {&q[j].num(), &q[j].den()}) {
        for (auto& [p, e] : factor(*n)) {
          Place v = Place::prime(to_i64(p));
          if (!x.components().count(v) && !omit.count(v)) return false;
        }
      }
    }
    if (checks) checks->push_back("default rule: units elsewhere, support of " + point_str(q) + " covered");
  }
  return true;
}

}  // namespace detail

inline MembershipVerdict decide_membership(const AdelicPoint& x, const FiniteSubscheme& Z, const std::vector<Place>& S,
                                           const SieveParams& params = {}) {
  if (Z.rank() != x.rank()) throw InvalidArgument("subscheme and point have different ranks");
  auto omit = detail::omit_set(x, S);
  MembershipVerdict r;
  const int d = x.rank();
  // (i) x against z*t for t in {+-1}^d
  for (std::size_t k = 0; k < Z.size(); ++k) {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      TorusPoint zt = Z.points()[k];
      for (int j = 0; j < d; ++j)
        if (mask & (1u << j)) zt[static_cast<std::size_t>(j)] = -zt[static_cast<std::size_t>(j)];
      std::vector<std::string> checks;
      if (!detail::consistent_with(x, zt, omit, mask == 0 ? &checks : nullptr)) continue;
      if (mask == 0) {
        r.kind = MembershipVerdict::Kind::Member;
        r.z_index = k;
        r.checks = std::move(checks);
        return r;
      }
      r.torsion_twists.push_back(zt);
    }
  }
  // (ii) sieve
  for (std::int64_t N : params.schedule) {
    auto sep = separating_prime(x, Z, N, params.prime_bound, S);
    if (sep) {
      r.kind = MembershipVerdict::Kind::Excluded;
      r.separation = sep;
      return r;
    }
  }
  r.reason = "no separating prime <= " + std::to_string(params.prime_bound) + " for the N schedule";
  return r;
}

// ---- Selmer groups ----

struct SelmerDescription {
  std::vector<std::int64_t> S, S1;  // finite primes
  std::int64_t N;
  int rank;
  std::vector<std::int64_t> unit_presentation;     // invariant factors
  std::vector<std::int64_t> sampled_presentation;  // invariant factors of the image in prod_v F_v^*/N
  std::int64_t sample_bound;
  std::size_t sampled_primes;
  bool agree;
  std::vector<std::int64_t> invariant_factors() const { return unit_presentation; }
  std::int64_t order() const {
    std::int64_t o = 1;
    for (auto f : unit_presentation) o *= f;
    return o;
  }
};

inline SelmerDescription selmer_group(const std::vector<Place>& S, const std::vector<Place>& S1, std::int64_t N,
                                      int rank = 1, std::int64_t sample_bound = 10000) {
  if (N < 2) throw InvalidArgument("N must be >= 2");
  if (rank < 1) throw InvalidArgument("torus rank must be >= 1");
  std::set<Place> big(S1.begin(), S1.end());
  for (const auto& v : S)
    if (!big.count(v)) throw InvalidArgument("S must be contained in S1");
  SelmerDescription r;
  r.S = finite_primes(S);
  r.S1 = finite_primes(S1);
  r.N = N;
  r.rank = rank;
  r.sample_bound = sample_bound;
  std::vector<std::int64_t> unit, sampled;
  auto q = mod_nth_powers(r.S1, N);
  std::vector<std::int64_t> gens{-1};
  gens.insert(gens.end(), r.S1.begin(), r.S1.end());
  std::vector<std::int64_t> v0s;
  // every odd prime outside S1: F_v^*/N = Z/gcd(N, v-1), embedded in Z/N.
  // Split primes alone miss classes such as -4 = (1+i)^4 when N = 4.
  for (std::int64_t p : primes_up_to(sample_bound))
    if (p > 2 && gcd_i64(N, p - 1) > 1 && !std::binary_search(r.S1.begin(), r.S1.end(), p)) v0s.push_back(p);
  r.sampled_primes = v0s.size();
  std::vector<std::vector<std::int64_t>> rows;
  for (std::int64_t g : gens) {
    std::vector<std::int64_t> row;
    for (std::int64_t p : v0s) {
      std::int64_t n = gcd_i64(N, p - 1);
      row.push_back(detail::dlog_mod(g, p, n) * (N / n));
    }
    rows.push_back(row);
  }
  auto one = v0s.empty() ? std::vector<std::int64_t>{} : image_cyclic_orders(rows, N);
  for (int i = 0; i < rank; ++i) {
    for (auto f : q.invariant_factors()) unit.push_back(f);
    for (auto f : one) sampled.push_back(f);
  }
  r.unit_presentation = invariant_factors(unit);
  r.sampled_presentation = invariant_factors(sampled);
  r.agree = r.unit_presentation == r.sampled_presentation;
  return r;
}

// ---- the constants c and h ----

struct ConstantsCheck {
  std::int64_t N;
  bool vacuous = false;
  bool ok = true;
  std::size_t sampled_primes = 0;
  IntMatrix lattice;                  // exponent vectors over (-1, p_1, ..., p_s)
  std::optional<BigRational> witness;  // S1-unit locally an hN-th power, not an N-th power
  std::string mechanism;
};

struct ConstantsReport {
  std::int64_t c, h;
  std::vector<std::int64_t> S1;
  std::int64_t sample_bound;
  std::vector<ConstantsCheck> checks;
  bool ok() const {
    for (const auto& k : checks)
      if (!k.ok) return false;
    return true;
  }
};

namespace detail {

/// Brute-force log of a in the cyclic group generated by g modulo m.
inline std::int64_t cyclic_log(std::int64_t a, std::int64_t g, std::int64_t m, std::int64_t order) {
  std::int64_t cur = 1;
  for (std::int64_t k = 0; k < order; ++k) {
    if (cur == mod_i64(a, m)) return k;
    cur = mulmod(cur, g, m);
  }
  throw InvalidArgument("element outside the cyclic subgroup");
}

/// Congruences sum e_i c_i = 0 mod n cutting out the exponent vectors whose
/// unit is an n-th power in Z_v^*.
inline std::vector<std::pair<std::vector<BigInt>, BigInt>> local_power_conditions(const std::vector<std::int64_t>& gens,
                                                                                  std::int64_t v, std::int64_t n) {
  std::vector<std::pair<std::vector<BigInt>, BigInt>> out;
  std::int64_t a = 0, rest = n;
  while (rest % v == 0) {
    rest /= v;
    ++a;
  }
  if (v == 2) {
    if (a == 0) return out;
    std::int64_t mod = ipow(2, static_cast<int>(a + 2));
    std::vector<BigInt> sgn, lg;
    for (std::int64_t g : gens) {
      std::int64_t r = mod_i64(g, mod);
      bool neg = r % 4 == 3;
      sgn.emplace_back(neg ? 1 : 0);
      lg.emplace_back(cyclic_log(neg ? mod - r : r, 5, mod, ipow(2, static_cast<int>(a))));
    }
    out.emplace_back(sgn, BigInt(2));
    out.emplace_back(lg, BigInt(ipow(2, static_cast<int>(a))));
    return out;
  }
  std::int64_t nv = gcd_i64(n, v - 1);
  if (nv > 1) {
    std::vector<BigInt> c;
    for (std::int64_t g : gens) c.emplace_back(dlog_mod(g, v, nv));
    out.emplace_back(c, BigInt(nv));
  }
  if (a > 0) {
    std::int64_t va = ipow(v, static_cast<int>(a)), mod = va * v;
    std::vector<BigInt> c;
    for (std::int64_t g : gens) c.emplace_back(cyclic_log(powmod(mod_i64(g, mod), static_cast<std::uint64_t>(v - 1), mod), 1 + v, mod, va));
    out.emplace_back(c, BigInt(va));
  }
  return out;
}

}  // namespace detail

/// For each N, the lattice of S1-unit exponent vectors passing the local
/// hN-th power test at every sampled prime v <= sample_bound outside S1 must
/// land in the N-th powers. Sampling makes this a necessary-condition check
/// of the constant, not a proof.
inline ConstantsReport verify_constants(const std::vector<Place>& S1, const std::vector<std::int64_t>& Ns,
                                        std::int64_t h = 8, std::int64_t c = 2, std::int64_t sample_bound = 10000) {
  if (h < 1) throw InvalidArgument("h must be >= 1");
  ConstantsReport rep{c, h, finite_primes(S1), sample_bound, {}};
  std::vector<std::int64_t> gens{-1};
  gens.insert(gens.end(), rep.S1.begin(), rep.S1.end());
  const std::size_t r = gens.size();
  for (std::int64_t N : Ns) {
    ConstantsCheck chk;
    chk.N = N;
    if (N < 2) {
      chk.vacuous = true;
      chk.mechanism = "every unit is a first power";
      rep.checks.push_back(chk);
      continue;
    }
    IntMatrix L;
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<BigInt> e(r, 0);
      e[i] = 1;
      L.push_back(e);
    }
    for (std::int64_t v : primes_up_to(sample_bound)) {
      if (std::binary_search(rep.S1.begin(), rep.S1.end(), v)) continue;
      ++chk.sampled_primes;
      for (const auto& [coef, mod] : detail::local_power_conditions(gens, v, h * N)) L = restrict_by_congruence(L, coef, mod);
    }
    chk.lattice = L;
    for (const auto& b : L) {
      bool nth = (N % 2 == 1 || b[0] % 2 == 0);
      for (std::size_t i = 1; i < r; ++i) nth = nth && b[i] % N == 0;
      if (nth) continue;
      chk.ok = false;
      BigRational u = b[0] % 2 == 0 ? BigRational(1) : BigRational(-1);
      for (std::size_t i = 1; i < r; ++i) u = u * BigRational(gens[i]).pow(static_cast<long long>(b[i]));
      chk.witness = u;
      chk.mechanism = u.str() + " is an " + std::to_string(h * N) + "-th power in Z_v^* at all " +
                      std::to_string(chk.sampled_primes) + " sampled primes but not an " + std::to_string(N) +
                      "-th power of an S1-unit";
      break;
    }
    if (chk.ok) chk.mechanism = "every locally admissible exponent vector is divisible by N";
    rep.checks.push_back(chk);
  }
  return rep;
}

}  // namespace adeleforge
