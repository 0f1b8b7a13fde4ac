#include <gtest/gtest.h>

#include <random>

#include "adeleforge/sieve.hpp"

using namespace adeleforge;

namespace {

const std::vector<Place> kInf{Place::real()};

// y^N table; independent of discrete logs
bool is_power_mod(std::int64_t a, std::int64_t p, std::int64_t N) {
  a = mod_i64(a, p);
  for (std::int64_t y = 1; y < p; ++y)
    if (powmod(y, static_cast<std::uint64_t>(N), p) == a) return true;
  return false;
}

std::optional<std::int64_t> naive_separator(std::int64_t x, const std::vector<std::int64_t>& Z, std::int64_t N,
                                            std::int64_t P) {
  for (std::int64_t p = 3; p <= P; ++p) {
    if (!is_prime(p) || (p - 1) % N || x % p == 0) continue;
    bool bad = false;
    for (auto z : Z) bad = bad || z % p == 0;
    if (bad) continue;
    bool all = true;
    for (auto z : Z) all = all && !is_power_mod(mulmod(mod_i64(x, p), inv_mod(mod_i64(z, p), p), p), p, N);
    if (all) return p;
  }
  return std::nullopt;
}

FiniteSubscheme g1(std::vector<long long> zs) {
  std::vector<TorusPoint> pts;
  for (auto z : zs) pts.push_back({BigRational(z)});
  return FiniteSubscheme(1, pts);
}

}  // namespace

TEST(Localize, Examples) {
  EXPECT_EQ(localize_mod_N(LocalValue(1), 13, 3), 0);
  EXPECT_NE(localize_mod_N(LocalValue(3), 13, 3), 0);
  EXPECT_EQ(localize_mod_N(LocalValue(5), 13, 3), 0);
  for (std::int64_t a = 1; a < 13; ++a) EXPECT_EQ(localize_mod_N(LocalValue(a), 13, 3) == 0, is_power_mod(a, 13, 3));
  EXPECT_THROW(localize_mod_N(LocalValue(3), 7, 4), NotSplit);
  EXPECT_THROW(localize_mod_N(LocalValue(14), 7, 3), NonUnitAtV0);
  EXPECT_THROW(localize_mod_N(LocalValue(3), 9, 2), InvalidArgument);
}

TEST(Localize, Homomorphism) {
  for (std::int64_t p : {7, 13, 31, 61})
    for (std::int64_t N : {2, 3, 5, 6})
      if ((p - 1) % N == 0)
        for (std::int64_t a = 1; a < p; a += 3)
          for (std::int64_t b = 1; b < p; b += 5)
            EXPECT_EQ(localize_mod_N(LocalValue(a * b), p, N),
                      mod_i64(localize_mod_N(LocalValue(a), p, N) + localize_mod_N(LocalValue(b), p, N), N));
}

TEST(Localize, PadicResidueAndVector) {
  auto v = localize_mod_N({LocalValue(embed_padic(3, 13, 2)), LocalValue(BigRational(5, 2))}, 13, 3);
  EXPECT_EQ(v[0], localize_mod_N(LocalValue(3), 13, 3));
  EXPECT_EQ(v[1], localize_mod_N(LocalValue(BigRational(5, 2)), 13, 3));
}

TEST(SeparatingPrime, Examples) {
  auto a = separating_prime(AdelicPoint::diagonal({BigRational(3)}), g1({1, 4}), 3, 1000);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->v0, 13);
  EXPECT_TRUE(check_separation(*a, g1({1, 4})));
  EXPECT_FALSE(separating_prime(AdelicPoint::diagonal({BigRational(1)}), g1({1}), 5, 2000));
  auto c = separating_prime(AdelicPoint::diagonal({BigRational(3)}), g1({2}), 2, 1000);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->v0, 7);
}

TEST(SeparatingPrime, MatchesNaiveSearch) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> u(2, 30);
  for (int it = 0; it < 60; ++it) {
    long long x = u(rng);
    std::vector<long long> zs{u(rng)};
    if (it % 2) zs.push_back(u(rng) + 31);
    std::int64_t N = std::vector<std::int64_t>{2, 3, 4, 5}[static_cast<std::size_t>(it % 4)];
    auto got = separating_prime(AdelicPoint::diagonal({BigRational(x)}), g1(zs), N, 400);
    auto want = naive_separator(x, std::vector<std::int64_t>(zs.begin(), zs.end()), N, 400);
    ASSERT_EQ(got.has_value(), want.has_value()) << x;
    if (got) {
      EXPECT_EQ(got->v0, *want);
      EXPECT_TRUE(check_separation(*got, g1(zs)));
    }
  }
}

TEST(SeparatingPrime, WorkerCountDoesNotChangeResult) {
  AdelicPoint x = AdelicPoint::diagonal({BigRational(3), BigRational(7, 2)});
  FiniteSubscheme Z(2, {{BigRational(1), BigRational(1)}, {BigRational(4), BigRational(7, 2)}});
  auto one = separating_prime(x, Z, 3, 3000);
  ::setenv("ADELEFORGE_THREADS", "4", 1);
  auto four = separating_prime(x, Z, 3, 3000);
  ::unsetenv("ADELEFORGE_THREADS");
  ASSERT_TRUE(one && four);
  EXPECT_EQ(one->v0, four->v0);
}

TEST(SeparatingPrime, TamperedCertificateRejected) {
  auto s = *separating_prime(AdelicPoint::diagonal({BigRational(3)}), g1({1, 4}), 3, 1000);
  auto bad = s;
  bad.v0 = 7;
  EXPECT_FALSE(check_separation(bad, g1({1, 4})));
  bad = s;
  bad.witnesses[1].x_residue = 4;
  EXPECT_FALSE(check_separation(bad, g1({1, 4})));
}

TEST(DecideMembership, Examples) {
  auto m = decide_membership(AdelicPoint::diagonal({BigRational(4)}), g1({1, 4}), kInf);
  ASSERT_EQ(m.kind, MembershipVerdict::Kind::Member);
  EXPECT_EQ(m.z_index, 1u);
  EXPECT_FALSE(m.checks.empty());

  SieveParams cubic;
  cubic.schedule = {3};
  auto e = decide_membership(AdelicPoint::diagonal({BigRational(3)}), g1({1, 4}), kInf, cubic);
  ASSERT_EQ(e.kind, MembershipVerdict::Kind::Excluded);
  EXPECT_EQ(e.separation->N, 3);
  EXPECT_EQ(e.separation->v0, 13);
  // with squares first, 5 already separates: 3 and 3/4 are non-squares mod 5
  auto d = decide_membership(AdelicPoint::diagonal({BigRational(3)}), g1({1, 4}), kInf);
  ASSERT_EQ(d.kind, MembershipVerdict::Kind::Excluded);
  EXPECT_EQ(d.separation->N, 2);
  EXPECT_EQ(d.separation->v0, 5);
  EXPECT_TRUE(check_separation(*d.separation, g1({1, 4})));

  AdelicPoint starved(1, {Place::real()});
  EXPECT_EQ(decide_membership(starved, g1({2}), kInf).kind, MembershipVerdict::Kind::Inconclusive);
}

TEST(DecideMembership, TorsionTwistIsNotMembership) {
  auto r = decide_membership(AdelicPoint::diagonal({BigRational(-4)}), g1({1, 4}), kInf);
  EXPECT_EQ(r.kind, MembershipVerdict::Kind::Excluded);
  ASSERT_EQ(r.torsion_twists.size(), 1u);
  EXPECT_EQ(r.torsion_twists[0][0], BigRational(-4));
}

TEST(DecideMembership, ExplicitDataMustAgree) {
  AdelicPoint x = AdelicPoint::diagonal({BigRational(4)});
  x.set_component(Place::prime(7), {LocalValue(embed_padic(11, 7, 1))});  // 11 = 4 mod 7
  EXPECT_EQ(decide_membership(x, g1({4}), kInf).kind, MembershipVerdict::Kind::Member);
  x.set_component(Place::prime(7), {LocalValue(embed_padic(5, 7, 1))});
  EXPECT_EQ(decide_membership(x, g1({4}), kInf).kind, MembershipVerdict::Kind::Excluded);
  AdelicPoint units(1, {Place::real()});
  units.set_component(Place::prime(3), {LocalValue(embed_padic(4, 3, 2))});
  EXPECT_EQ(decide_membership(units, g1({4}), kInf).kind, MembershipVerdict::Kind::Inconclusive);
}

TEST(DecideMembership, DisjointUnion) {
  std::vector<long long> z1{1, 4}, z2{9, 2};
  std::vector<long long> all{1, 4, 9, 2};
  for (long long c : {1LL, 2LL, 3LL, 4LL, 5LL, 9LL}) {
    AdelicPoint x = AdelicPoint::diagonal({BigRational(c)});
    auto r = decide_membership(x, g1(all), kInf);
    auto r1 = decide_membership(x, g1(z1), kInf);
    auto r2 = decide_membership(x, g1(z2), kInf);
    if (r.kind == MembershipVerdict::Kind::Member) {
      long long z = all[r.z_index];
      bool in1 = std::find(z1.begin(), z1.end(), z) != z1.end();
      EXPECT_EQ((in1 ? r1 : r2).kind, MembershipVerdict::Kind::Member);
      EXPECT_EQ((in1 ? r2 : r1).kind, MembershipVerdict::Kind::Excluded);
    } else {
      EXPECT_NE(r1.kind, MembershipVerdict::Kind::Member);
      EXPECT_NE(r2.kind, MembershipVerdict::Kind::Member);
    }
  }
}

TEST(DecideMembership, TorsionOfRationalPointsIsSign) {
  std::set<std::string> tors;
  for (long long n = -20; n <= 20; ++n)
    for (long long d = 1; d <= 20; ++d) {
      if (n == 0 || gcd_i64(n, d) != 1) continue;
      BigRational q(n, d);
      for (long long k = 1; k <= 12; ++k)
        if (q.pow(k) == BigRational(1)) tors.insert(q.str());
    }
  EXPECT_EQ(tors, (std::set<std::string>{"-1", "1"}));
}

TEST(Selmer, Examples) {
  std::vector<Place> s23{Place::real(), Place::prime(2), Place::prime(3)};
  auto a = selmer_group(s23, s23, 5);
  EXPECT_EQ(a.invariant_factors(), (std::vector<std::int64_t>{5, 5}));
  EXPECT_EQ(a.order(), 25);
  EXPECT_TRUE(a.agree);
  auto b = selmer_group(kInf, kInf, 2);
  EXPECT_EQ(b.invariant_factors(), (std::vector<std::int64_t>{2}));
  EXPECT_TRUE(b.agree);
  auto c = selmer_group(kInf, {Place::real(), Place::prime(2)}, 3);
  EXPECT_EQ(c.invariant_factors(), (std::vector<std::int64_t>{3}));
  EXPECT_TRUE(c.agree);
  EXPECT_THROW(selmer_group({Place::real(), Place::prime(5)}, kInf, 3), InvalidArgument);
}

TEST(Selmer, PresentationsAgree) {
  std::vector<std::vector<Place>> sets{kInf,
                                       {Place::real(), Place::prime(2)},
                                       {Place::real(), Place::prime(2), Place::prime(3)},
                                       {Place::real(), Place::prime(3), Place::prime(7)}};
  for (const auto& S1 : sets)
    for (std::int64_t N : {2, 3, 4, 5, 6})
      for (int d : {1, 2}) {
        auto s = selmer_group(kInf, S1, N, d, 3000);
        EXPECT_TRUE(s.agree) << N;
        EXPECT_EQ(s.order(), ipow(mod_nth_powers(finite_primes(S1), N).order(), d));
      }
}

TEST(Linalg, ImageOrdersAndInvariantFactors) {
  EXPECT_EQ(invariant_factors({2, 3}), (std::vector<std::int64_t>{6}));
  EXPECT_EQ(invariant_factors({2, 2, 4}), (std::vector<std::int64_t>{2, 2, 4}));
  EXPECT_EQ(invariant_factors({6, 4}), (std::vector<std::int64_t>{2, 12}));
  // rows (2,0),(0,3) in (Z/6)^2 span Z/3 x Z/2
  auto o = image_cyclic_orders({{2, 0}, {0, 3}}, 6);
  EXPECT_EQ(invariant_factors(o), (std::vector<std::int64_t>{6}));
  // brute-force subgroup order for random matrices
  std::mt19937_64 rng(9);
  for (int it = 0; it < 40; ++it) {
    std::int64_t N = 2 + static_cast<std::int64_t>(rng() % 7);
    std::vector<std::vector<std::int64_t>> m(3, std::vector<std::int64_t>(4));
    for (auto& r : m)
      for (auto& x : r) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N));
    std::set<std::vector<std::int64_t>> span;
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; ++b)
        for (std::int64_t c = 0; c < N; ++c) {
          std::vector<std::int64_t> v(4);
          for (int j = 0; j < 4; ++j) v[static_cast<std::size_t>(j)] = mod_i64(a * m[0][static_cast<std::size_t>(j)] + b * m[1][static_cast<std::size_t>(j)] + c * m[2][static_cast<std::size_t>(j)], N);
          span.insert(v);
        }
    std::int64_t ord = 1;
    for (auto c : image_cyclic_orders(m, N)) ord *= c;
    EXPECT_EQ(ord, static_cast<std::int64_t>(span.size()));
  }
}

TEST(Linalg, CongruenceSublattice) {
  IntMatrix I{{1, 0}, {0, 1}};
  auto L = restrict_by_congruence(I, {1, 1}, 4);
  // x + y = 0 mod 4: index 4
  ASSERT_EQ(L.size(), 2u);
  EXPECT_EQ(big_abs(L[0][0] * L[1][1] - L[0][1] * L[1][0]), 4);
  for (const auto& b : L) EXPECT_EQ(big_mod(b[0] + b[1], 4), 0);
}

TEST(VerifyConstants, PassesForShippedConstants) {
  std::vector<Place> S1{Place::real(), Place::prime(2), Place::prime(3)};
  auto rep = verify_constants(S1, {1, 2, 3, 4, 5, 6}, 8, 2, 2000);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.checks[0].vacuous);
  EXPECT_EQ(rep.c, 2);
  EXPECT_EQ(rep.h, 8);
}

TEST(VerifyConstants, HEqualsOneFailsAtEight) {
  std::vector<Place> S1{Place::real(), Place::prime(2), Place::prime(3)};
  auto rep = verify_constants(S1, {2, 3, 4, 5, 6, 8}, 1, 2, 2000);
  for (std::size_t i = 0; i + 1 < rep.checks.size(); ++i) EXPECT_TRUE(rep.checks[i].ok) << rep.checks[i].N;
  const auto& last = rep.checks.back();
  ASSERT_FALSE(last.ok);
  ASSERT_TRUE(last.witness);
  // the witness really is a local 8th power at every odd prime sampled, and not a global one
  BigRational w = *last.witness;
  for (std::int64_t p : primes_up_to(400)) {
    if (p <= 3) continue;
    EXPECT_TRUE(is_power_mod(to_i64(w.residue(BigInt(p))), p, 8)) << p;
  }
  EXPECT_FALSE(mod_nth_powers({2, 3}, 8).is_nth_power(w));
}
