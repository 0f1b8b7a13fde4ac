#pragma once

// Small integer lattice routines: Hermite normal form, sublattices cut out by
// congruences, and the structure of subgroups of (Z/N)^k.

#include <algorithm>
#include <map>
#include <vector>

#include "bigint.hpp"

namespace adeleforge {

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Row Hermite normal form; zero rows dropped.
inline IntMatrix hnf(IntMatrix rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    while (true) {
      std::size_t piv = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        if (piv == rows.size() || big_abs(rows[i][c]) < big_abs(rows[piv][c])) piv = i;
      }
      if (piv == rows.size()) break;
      std::swap(rows[r], rows[piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        BigInt q = rows[i][c] / rows[r][c];
        for (std::size_t k = c; k < n; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && rows[r][c] != 0) {
      if (rows[r][c] < 0)
        for (auto& x : rows[r]) x = -x;
      for (std::size_t i = 0; i < r; ++i) {
        BigInt q = (rows[i][c] - big_mod(rows[i][c], rows[r][c])) / rows[r][c];
        for (std::size_t k = c; k < n; ++k) rows[i][k] -= q * rows[r][k];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

/// Basis of {sum x_k b_k : sum x_k w_k = 0 mod n} where w_k = c . b_k.
inline IntMatrix restrict_by_congruence(const IntMatrix& basis, const std::vector<BigInt>& c, const BigInt& n) {
  if (n == 1 || basis.empty()) return basis;
  const std::size_t k = basis.size();
  // augmented rows (e_i | w_i) plus (0 | n); HNF on the last column isolates the kernel
  IntMatrix aug;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<BigInt> row(k + 1, 0);
    row[0] = 0;
    BigInt w = 0;
    for (std::size_t j = 0; j < c.size(); ++j) w += c[j] * basis[i][j];
    row[0] = big_mod(w, n);
    row[i + 1] = 1;
    aug.push_back(row);
  }
  std::vector<BigInt> last(k + 1, 0);
  last[0] = n;
  aug.push_back(last);
  IntMatrix h = hnf(aug);
  IntMatrix out;
  for (const auto& row : h) {
    if (row[0] != 0) continue;
    std::vector<BigInt> v(basis[0].size(), 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += row[i + 1] * basis[i][j];
    out.push_back(v);
  }
  return hnf(out);
}

/// Cyclic orders (each > 1) of the subgroup of (Z/N)^k spanned by the rows.
inline std::vector<std::int64_t> image_cyclic_orders(std::vector<std::vector<std::int64_t>> m, std::int64_t N) {
  std::vector<std::int64_t> out;
  if (m.empty()) return out;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (auto& r : m)
    for (auto& x : r) x = mod_i64(x, N);
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry in the remaining block
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] && (pi == rows || m[i][j] < m[pi][pj])) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(m[t], m[pi]);
    for (auto& r : m) std::swap(r[t], r[pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (!m[i][t]) continue;
        std::int64_t q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] = mod_i64(m[i][j] - q * m[t][j], N);
        if (m[i][t]) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (!m[t][j]) continue;
        std::int64_t q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] = mod_i64(m[i][j] - q * m[i][t], N);
        if (m[t][j]) {
          for (auto& r : m) std::swap(r[t], r[j]);
          clean = false;
        }
      }
    }
    std::int64_t ord = N / gcd_i64(N, m[t][t]);
    if (ord > 1) out.push_back(ord);
    ++t;
  }
  return out;
}

/// Invariant factors d_1 | d_2 | ... of a direct sum of cyclic groups.
inline std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& cyclic) {
  std::map<std::int64_t, std::vector<std::int64_t>> parts;  // prime -> prime powers
  for (std::int64_t c : cyclic) {
    for (std::int64_t p : prime_divisors(c)) {
      std::int64_t pe = 1;
      while (c % (pe * p) == 0) pe *= p;
      parts[p].push_back(pe);
    }
  }
  std::size_t len = 0;
  for (auto& [p, v] : parts) {
    std::sort(v.begin(), v.end(), std::greater<>());
    len = std::max(len, v.size());
  }
  std::vector<std::int64_t> out(len, 1);
  for (auto& [p, v] : parts)
    for (std::size_t i = 0; i < v.size(); ++i) out[len - 1 - i] *= v[i];
  return out;
}

}  // namespace adeleforge
