#include <gtest/gtest.h>

#include <set>

#include "adeleforge/sunits.hpp"

using namespace adeleforge;

namespace {

bool contains(const std::vector<std::pair<BigRational, BigRational>>& sols, BigRational u, BigRational w) {
  return std::find(sols.begin(), sols.end(), std::make_pair(u, w)) != sols.end();
}

// q is an N-th power of a rational number (direct root extraction)
bool rational_nth_power(const BigRational& q, std::int64_t N) {
  if (q.sign() < 0 && N % 2 == 0) return false;
  for (const BigInt* n : {&q.num(), &q.den()})
    for (auto& [p, e] : factor(*n))
      if (e % N) return false;
  return true;
}

}  // namespace

TEST(SUnitsQ, Enumerate) {
  auto a = enumerate_sunits({2}, 1);
  std::vector<BigRational> expect{-2, -1, BigRational(-1, 2), BigRational(1, 2), 1, 2};
  EXPECT_EQ(a, expect);
  auto b = enumerate_sunits({2, 3}, 0);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], BigRational(-1));
  EXPECT_EQ(b[1], BigRational(1));
}

TEST(SUnitsQ, UnitEquationTwoThree) {
  auto r = solve_unit_equation({2, 3}, 10, 1, 1);
  const auto& s = r.solutions;
  EXPECT_TRUE(contains(s, 2, -1));
  EXPECT_TRUE(contains(s, -1, 2));
  EXPECT_TRUE(contains(s, BigRational(1, 2), BigRational(1, 2)));
  EXPECT_TRUE(contains(s, 4, -3));
  EXPECT_TRUE(contains(s, -3, 4));
  EXPECT_TRUE(contains(s, BigRational(3, 2), BigRational(-1, 2)));
  EXPECT_TRUE(contains(s, 9, -8));
  EXPECT_TRUE(contains(s, BigRational(1, 4), BigRational(3, 4)));
  EXPECT_TRUE(contains(s, BigRational(1, 9), BigRational(8, 9)));
  EXPECT_TRUE(r.bound_stable);
  for (const auto& [u, w] : s) EXPECT_EQ(u + w, BigRational(1));
}

TEST(SUnitsQ, UnitEquationTwoOnlyMatchesDirectScan) {
  auto r = solve_unit_equation({2}, 10, 1, 1);
  std::vector<std::pair<BigRational, BigRational>> scan;
  for (int a = -12; a <= 12; ++a)
    for (int s : {1, -1}) {
      BigRational u = BigRational(s) * BigRational(2).pow(a);
      BigRational w = BigRational(1) - u;
      if (w.is_zero()) continue;
      BigRational aw = w.sign() < 0 ? -w : w;
      for (int b = -12; b <= 12; ++b)
        if (aw == BigRational(2).pow(b)) scan.emplace_back(u, w);
    }
  std::sort(scan.begin(), scan.end());
  EXPECT_EQ(r.solutions, scan);
  ASSERT_EQ(r.solutions.size(), 3u);
}

TEST(SUnitsQ, SixElementOrbitClosure) {
  for (auto S : std::vector<std::vector<std::int64_t>>{{2}, {2, 3}, {2, 3, 5}}) {
    auto r = solve_unit_equation(S, 8, 1, 1, false);
    std::set<std::pair<BigRational, BigRational>> sols(r.solutions.begin(), r.solutions.end());
    auto in_box = [&](const BigRational& q) {
      auto e = sunit_exponents(q, S);
      if (!e) return false;
      for (auto x : *e)
        if (x > 8 || x < -8) return false;
      return true;
    };
    for (const auto& [u, w] : r.solutions) {
      EXPECT_TRUE(sols.count({w, u}));
      BigRational u2 = u.inverse(), w2 = -w / u;
      if (in_box(u2) && in_box(w2)) EXPECT_TRUE(sols.count({u2, w2}));
    }
  }
}

TEST(SUnitsQ, GeneralCoefficients) {
  // 2u - w = 1 over Z[1/2]: u = t/2, w = t - 1 for t in {2, -1, 1/2}
  auto r = solve_unit_equation({2}, 20, 2, -1);
  std::vector<BigRational> ts;
  for (const auto& [u, w] : r.solutions) ts.push_back(2 * u);
  std::sort(ts.begin(), ts.end());
  std::vector<BigRational> expect{-1, BigRational(1, 2), 2};
  EXPECT_EQ(ts, expect);
  EXPECT_TRUE(r.bound_stable);
}

TEST(ModNthPowers, Examples) {
  auto a = mod_nth_powers({2, 3}, 5);
  EXPECT_EQ(a.order(), 25);
  EXPECT_EQ(a.invariant_factors(), (std::vector<std::int64_t>{5, 5}));
  EXPECT_TRUE(a.is_nth_power(-1));
  auto b = mod_nth_powers({2}, 2);
  EXPECT_EQ(b.invariant_factors(), (std::vector<std::int64_t>{2, 2}));
  auto c = mod_nth_powers({}, 3);
  EXPECT_EQ(c.order(), 1);
}

TEST(ModNthPowers, ClassCountMatchesRootExtraction) {
  for (std::int64_t N : {2, 3, 4, 5, 6}) {
    for (auto S : std::vector<std::vector<std::int64_t>>{{}, {2}, {2, 3}}) {
      auto units = enumerate_sunits(S, static_cast<int>(N));
      std::vector<BigRational> reps;
      for (const auto& u : units) {
        bool fresh = true;
        for (const auto& r : reps)
          if (rational_nth_power(u / r, N)) fresh = false;
        if (fresh) reps.push_back(u);
      }
      EXPECT_EQ(static_cast<std::int64_t>(reps.size()), mod_nth_powers(S, N).order()) << N;
    }
  }
}

TEST(SUnitsFF, EnumerateF2) {
  const FqField& f = FqField::get(2);
  std::vector<Place> S{Place::parse_ff(f, "t"), Place::parse_ff(f, "t+1"), Place::ff_infinity()};
  EXPECT_EQ(enumerate_ff_sunits(f, S, 1).size(), 9u);
  // without infinity only degree-0 combinations remain: t^a (t+1)^-a
  std::vector<Place> S2{Place::parse_ff(f, "t"), Place::parse_ff(f, "t+1")};
  EXPECT_EQ(enumerate_ff_sunits(f, S2, 2).size(), 5u);
  const FqField& f3 = FqField::get(3);
  std::vector<Place> S3{Place::parse_ff(f3, "t"), Place::ff_infinity()};
  EXPECT_EQ(enumerate_ff_sunits(f3, S3, 1).size(), 6u);
}

TEST(SUnitsFF, UnitEquationF2) {
  const FqField& f = FqField::get(2);
  std::vector<Place> S{Place::parse_ff(f, "t"), Place::parse_ff(f, "t+1"), Place::ff_infinity()};
  RatFunc one = RatFunc::constant(f, 1);
  auto r = solve_ff_unit_equation(f, S, 4, one, one);
  auto has = [&](const std::string& u, const std::string& w) {
    auto p = std::make_pair(RatFunc::parse(f, u), RatFunc::parse(f, w));
    return std::find(r.solutions.begin(), r.solutions.end(), p) != r.solutions.end();
  };
  EXPECT_TRUE(has("t", "t+1"));
  EXPECT_TRUE(has("t+1", "t"));
  EXPECT_TRUE(has("t^2", "t^2+1"));
  EXPECT_TRUE(has("t^4", "t^4+1"));
  for (const auto& [u, w] : r.solutions) {
    EXPECT_EQ(u + w, one);
    // Frobenius closure inside the box
    auto u2 = u * u, w2 = w * w;
    auto eu = ff_sunit_exponents(u2, S), ew = ff_sunit_exponents(w2, S);
    bool fits = true;
    for (auto* e : {&eu, &ew})
      for (auto x : **e) fits = fits && x <= 4 && x >= -4;
    if (fits) EXPECT_TRUE(std::find(r.solutions.begin(), r.solutions.end(), std::make_pair(u2, w2)) != r.solutions.end());
  }
}
