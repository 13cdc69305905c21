#pragma once

// Deliberately naive reference implementations used only by tests.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int mobius(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

inline std::int64_t gcd_all(const std::vector<std::int64_t>& v) {
  std::int64_t g = 0;
  for (auto x : v) {
    std::int64_t a = g, b = x;
    while (b) {
      const auto t = a % b;
      a = b;
      b = t;
    }
    g = a;
  }
  return g;
}

inline mpz_class lcm_all(const std::vector<std::int64_t>& v) {
  // Via prime exponents.
  std::map<std::int64_t, int> top;
  for (auto x : v)
    for (std::int64_t p = 2; x > 1; ++p) {
      int e = 0;
      while (x % p == 0) x /= p, ++e;
      if (e > top[p]) top[p] = e;
      if (p * p > x && x > 1) {
        if (top[x] < 1) top[x] = 1;
        break;
      }
    }
  mpz_class r = 1;
  for (auto [p, e] : top)
    for (int i = 0; i < e; ++i) r *= static_cast<long>(p);
  return r;
}

inline int valuation(std::int64_t n, std::int64_t p) {
  int e = 0;
  while (n % p == 0) n /= p, ++e;
  return e;
}

// Nested-loop census over sets given as plain vectors.
template <class Pred>
std::int64_t census(const std::vector<std::vector<std::int64_t>>& sets, Pred&& pred) {
  std::int64_t hits = 0;
  std::vector<std::int64_t> t(sets.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == sets.size()) {
      hits += pred(t) ? 1 : 0;
      return;
    }
    for (auto a : sets[i]) {
      t[i] = a;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return hits;
}

}  // namespace oracle
