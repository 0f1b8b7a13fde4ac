#include <gtest/gtest.h>

#include <random>

#include "adeleforge/reciprocity.hpp"

using namespace adeleforge;

namespace {

// number of primitive characters of conductor m, computed multiplicatively
std::int64_t primitive_count(std::int64_t m) {
  std::int64_t r = 1;
  for (std::int64_t p : prime_divisors(m)) {
    int e = 0;
    std::int64_t t = m;
    while (t % p == 0) {
      t /= p;
      ++e;
    }
    std::int64_t c;
    if (p == 2)
      c = e == 1 ? 0 : (e == 2 ? 1 : ipow(2, e - 2));
    else
      c = e == 1 ? p - 2 : ipow(p, e - 2) * (p - 1) * (p - 1);
    r *= c;
  }
  return r;
}

const DirichletCharacter& quad3() { return primitive_characters(3).at(0); }

DirichletCharacter cubic7() {
  return DirichletCharacter::from_generator_images(7, {{3, QmodZ(1, 3)}});
}

}  // namespace

TEST(Characters, SmallEnumerations) {
  EXPECT_EQ(enumerate_characters(1).size(), 1u);
  auto c3 = enumerate_characters(3);
  ASSERT_EQ(c3.size(), 2u);
  EXPECT_EQ(c3[1].modulus(), 3);
  EXPECT_EQ(c3[1](2), QmodZ(1, 2));
  auto c5 = enumerate_characters(5);
  ASSERT_EQ(c5.size(), 6u);
  EXPECT_EQ(c5[2].modulus(), 4);
  for (int i = 3; i < 6; ++i) EXPECT_EQ(c5[static_cast<std::size_t>(i)].modulus(), 5);
}

TEST(Characters, CountsMatchMultiplicativeFormula) {
  for (std::int64_t m = 1; m <= 64; ++m)
    EXPECT_EQ(static_cast<std::int64_t>(primitive_characters(m).size()), primitive_count(m)) << m;
}

TEST(Characters, TablesAreHomomorphisms) {
  for (const auto& chi : enumerate_characters(40)) {
    std::int64_t m = chi.modulus();
    EXPECT_TRUE(chi(1).is_zero());
    for (std::int64_t a = 1; a < m; ++a) {
      if (gcd_i64(a, m) != 1) continue;
      for (std::int64_t b = 1; b < m; b += 3) {
        if (gcd_i64(b, m) != 1) continue;
        EXPECT_EQ(chi(a * b), chi(a) + chi(b));
      }
    }
  }
}

TEST(Characters, GeneratorImagesRoundTrip) {
  for (const auto& chi : enumerate_characters(30)) {
    auto back = DirichletCharacter::from_generator_images(chi.modulus(), chi.generator_images());
    EXPECT_EQ(back, chi);
  }
  // imprimitive input reduces to its conductor: quad mod 3 induced to 12
  auto induced = DirichletCharacter::from_generator_images(12, {{11, QmodZ(1, 2)}, {7, QmodZ(0, 1)}});
  EXPECT_EQ(induced.conductor(), 3);
  EXPECT_THROW(DirichletCharacter::from_generator_images(7, {{2, QmodZ(1, 2)}}), InvalidArgument);
  EXPECT_THROW(DirichletCharacter::from_generator_images(7, {{3, QmodZ(1, 4)}}), InvalidArgument);
}

TEST(LocalInvariantTest, Examples) {
  EXPECT_EQ(local_invariant(quad3(), Place::prime(2), 2), QmodZ(1, 2));
  for (const auto& chi : enumerate_characters(20))
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23})
      if (chi.modulus() % p) EXPECT_TRUE(local_invariant(chi, Place::prime(p), BigRational(5 * 0 + 1, 1)).is_zero());
  auto c = cubic7();
  EXPECT_TRUE(c.is_even());
  EXPECT_FALSE(local_invariant(c, Place::prime(7), 3).is_zero());
}

TEST(LocalInvariantTest, PrecisionAndSign) {
  auto c = cubic7();
  LocalValue coarse = PAdicApprox(7, 0, 3, 1);
  EXPECT_NO_THROW(local_invariant(c, Place::prime(7), coarse));
  auto chi49 = primitive_characters(49).at(1);
  EXPECT_THROW(local_invariant(chi49, Place::prime(7), coarse), InsufficientPrecision);
  LocalValue unsure = PAdicApprox(5, 0, 1, 2);
  EXPECT_THROW(local_invariant(quad3(), Place::real(), unsure), UnknownSign);
  EXPECT_TRUE(local_invariant(c, Place::real(), unsure).is_zero());  // even: no sign needed
}

TEST(ProductFormula, TwoPrimeRationals) {
  auto chars = enumerate_characters(36);
  auto primes = primes_up_to(50);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      for (int a = -3; a <= 3; ++a) {
        for (int b = -3; b <= 3; b += 2) {
          BigRational q = BigRational(primes[i]).pow(a) * BigRational(primes[j]).pow(b);
          for (int s : {1, -1}) {
            for (std::size_t k = 0; k < chars.size(); k += 5) {
              EXPECT_TRUE(global_sum(chars[k], s * q).is_zero()) << chars[k].str() << " " << (s * q).str();
            }
          }
        }
      }
    }
  }
}

TEST(LocalInvariantTest, BilinearityAndInversion) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> d(1, 400);
  auto chars = enumerate_characters(30);
  for (int it = 0; it < 300; ++it) {
    BigRational x(d(rng) * (it % 2 ? -1 : 1), d(rng)), y(d(rng), d(rng) * (it % 3 ? 1 : -1));
    const auto& chi = chars[static_cast<std::size_t>(it) % chars.size()];
    for (const Place& v : {Place::real(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7)}) {
      EXPECT_EQ(local_invariant(chi, v, x * y), local_invariant(chi, v, x) + local_invariant(chi, v, y));
      EXPECT_EQ(local_invariant(chi.negated(), v, x), -local_invariant(chi, v, x));
    }
  }
}

TEST(B1S, Examples) {
  EXPECT_TRUE(is_in_B1S(DirichletCharacter(), {Place::real(), Place::prime(2)}));
  EXPECT_FALSE(is_in_B1S(quad3(), {Place::real()}));
  EXPECT_TRUE(is_in_B1S(cubic7(), {Place::real()}));
  EXPECT_FALSE(is_in_B1S(cubic7(), {Place::real(), Place::prime(2)}));  // chi(2) = 2/3
}

TEST(B1S, CriterionMatchesLocalSampling) {
  std::vector<Place> places{Place::real(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7)};
  for (const auto& chi : enumerate_characters(36)) {
    for (const Place& v : places) {
      bool vanishes = true;
      if (v.is_real()) {
        vanishes = local_invariant(chi, v, -1).is_zero() && local_invariant(chi, v, 1).is_zero();
      } else {
        std::int64_t p = v.p(), pe = p;
        while (chi.modulus() % (pe * p) == 0) pe *= p;
        for (int a = -3; a <= 3 && vanishes; ++a)
          for (std::int64_t u = 1; u < pe && vanishes; ++u)
            if (u % p) vanishes = local_invariant(chi, v, BigRational(p).pow(a) * BigRational(u)).is_zero();
      }
      EXPECT_EQ(is_in_B1S(chi, {v}), vanishes) << chi.str() << " at " << v.str();
    }
  }
}
