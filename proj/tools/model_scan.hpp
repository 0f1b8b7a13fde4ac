#pragma once

// Random hypersurface models and the local-point scan comparing a dilated
// model with the points of the original model that specialize to the center.

#include <random>

#include "adeleforge/models.hpp"

namespace scan {

using namespace adeleforge;

struct RandomHypersurface {
  AffineModel model;
  std::int64_t p;
};

// g = a*x1 + p*b*x1^2 + h(x2, ..., xn) with a a p-unit, so x1 is
// Hensel-solvable from any choice of the other coordinates.
inline RandomHypersurface random_hypersurface(std::mt19937& rng) {
  static const std::int64_t primes[] = {2, 3, 5, 7, 11, 13};
  std::int64_t p = primes[std::uniform_int_distribution<int>(0, 5)(rng)];
  std::size_t n = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
  std::uniform_int_distribution<int> coef(-4, 4), ex(0, 2);
  MPoly g(n);
  std::int64_t a;
  do a = coef(rng);
  while (a == 0 || a % p == 0);
  g = g + BigInt(a) * MPoly::var(n, 0) + BigInt(p * coef(rng)) * MPoly::var(n, 0).pow(2);
  for (int k = 0; k < 4; ++k) {
    MPoly mono = MPoly::constant(n, coef(rng));
    for (std::size_t i = 1; i < n; ++i) mono = mono * MPoly::var(n, i).pow(static_cast<unsigned>(ex(rng)));
    g = g + mono;
  }
  g = g.divide_exact(g.content());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return {AffineModel({}, names, {g}, ModelShape::Hypersurface), p};
}

// Point of g = 0 modulo p^k with the given x2..xn; x1 by Newton iteration.
inline std::vector<BigInt> hensel_point(const MPoly& g, std::int64_t p, int k, std::vector<BigInt> x) {
  BigInt pk = big_pow(BigInt(p), static_cast<unsigned>(k));
  const std::size_t n = g.nvars();
  MPoly dg(n);
  for (const auto& [m, c] : g.terms())
    if (m[0] > 0) {
      auto mm = m;
      --mm[0];
      MPoly t = MPoly::constant(n, c * m[0]);
      for (std::size_t i = 0; i < n; ++i) t = t * MPoly::var(n, i).pow(static_cast<unsigned>(mm[i]));
      dg = dg + t;
    }
  x[0] = 0;
  for (int it = 0; it < k + 2; ++it) {
    BigInt v = g.eval_mod(x, pk), d = dg.eval_mod(x, pk);
    x[0] = big_mod(x[0] - v * inv_mod(d, pk), pk);
  }
  return x;
}

struct ScanResult {
  int samples = 0;
  int specializing = 0;
  int mismatches = 0;
};

// Dilates `depth` times along the digits of a random point and compares the
// two sides on 500 sampled points of the original model (half forced to
// specialize), plus the exact identity g(C + p^depth y) = p^M g'(y) at 500
// random integer y.
inline ScanResult dilatation_scan(const RandomHypersurface& hs, int depth, std::mt19937& rng) {
  const MPoly& g = hs.model.relations()[0];
  const std::int64_t p = hs.p;
  const std::size_t n = g.nvars();
  const int k0 = depth + 4;
  std::uniform_int_distribution<long long> digit(0, 1'000'000'000);
  std::vector<BigInt> seed(n);
  for (auto& s : seed) s = BigInt(digit(rng));
  auto P0 = hensel_point(g, p, k0, seed);

  AffineModel m = hs.model;
  BigInt pd = big_pow(BigInt(p), static_cast<unsigned>(depth));
  std::vector<BigInt> rest = P0;
  for (int s = 0; s < depth; ++s) {
    std::vector<BigInt> c;
    for (auto& x : rest) {
      c.push_back(big_mod(x, BigInt(p)));
      x = (x - c.back()) / p;
    }
    m = dilate(m, p, c);
  }
  int M = 0;
  for (const auto& h : m.history()) M += h.divided[0];
  const MPoly& gd = m.relations()[0];
  std::vector<BigInt> C;
  for (const auto& x : P0) C.push_back(big_mod(x, pd));

  ScanResult r;
  const int k = M + depth + 3;
  const BigInt pk = big_pow(BigInt(p), static_cast<unsigned>(k));
  const BigInt pkm = big_pow(BigInt(p), static_cast<unsigned>(k - M));
  for (int s = 0; s < 500; ++s) {
    std::vector<BigInt> x(n);
    for (auto& v : x) v = BigInt(digit(rng));
    if (s % 2 == 0)
      for (std::size_t i = 1; i < n; ++i) x[i] = C[i] + pd * big_mod(x[i], pk);
    auto P = hensel_point(g, p, k, x);
    if (g.eval_mod(P, pk) != 0) ++r.mismatches;
    bool lifts = true;
    for (std::size_t i = 0; i < n; ++i) lifts = lifts && big_mod(P[i], pd) == C[i];
    bool image = false;
    if (lifts) {
      std::vector<BigInt> y;
      for (std::size_t i = 0; i < n; ++i) y.push_back((P[i] - C[i]) / pd);
      image = gd.eval_mod(y, pkm) == 0;
      std::vector<BigRational> exact(P.begin(), P.end());
      if (!m.passes_history(p, exact)) ++r.mismatches;
    } else {
      std::vector<BigRational> exact(P.begin(), P.end());
      if (m.passes_history(p, exact)) ++r.mismatches;
    }
    r.specializing += lifts;
    if (lifts != image) ++r.mismatches;
    ++r.samples;
  }
  BigInt pM = big_pow(BigInt(p), static_cast<unsigned>(M));
  for (int s = 0; s < 500; ++s) {
    std::vector<BigInt> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = BigInt(digit(rng)) - 500'000'000;
      x[i] = C[i] + pd * y[i];
    }
    if (g.eval(x) != pM * gd.eval(y)) ++r.mismatches;
  }
  return r;
}

}  // namespace scan
