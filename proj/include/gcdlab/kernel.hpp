#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "gcdlab/exact.hpp"

namespace gcdlab {

// gcd of a nonempty sequence of positive integers.
std::int64_t gcd_tuple(std::span<const std::int64_t> values);
ExactInt gcd_tuple(std::span<const ExactInt> values);

// lcm of a nonempty sequence of positive integers; the result is exact.
ExactInt lcm_tuple(std::span<const std::int64_t> values);
ExactInt lcm_tuple(std::span<const ExactInt> values);

// True iff lcm(values) <= bound. Stops as soon as the running lcm exceeds
// the bound, so it never forms huge intermediates.
bool lcm_at_most(std::span<const std::int64_t> values, std::int64_t bound);

int mobius(std::int64_t n);

// mu(0..n) by a linear sieve; entry 0 is unused and set to 0.
std::vector<std::int8_t> mobius_table(std::int64_t n);

// Smallest-prime-factor sieve with the primes and mu it produces.
class SieveTable {
 public:
  explicit SieveTable(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  const std::vector<std::int64_t>& primes() const { return primes_; }
  int mobius(std::int64_t n) const { return mu_.at(static_cast<std::size_t>(n)); }
  std::int64_t smallest_factor(std::int64_t n) const { return spf_.at(static_cast<std::size_t>(n)); }
  std::span<const std::int8_t> mobius_values() const { return mu_; }

 private:
  std::int64_t limit_;
  std::vector<std::int64_t> primes_;
  std::vector<std::int32_t> spf_;
  std::vector<std::int8_t> mu_;
};

// Primes p with lo <= p <= hi (segmented sieve). lo > hi gives an empty result.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::int64_t n);

int p_adic_valuation(std::int64_t n, std::int64_t p);

// Prime factorization by trial division, ascending primes.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

bool is_squarefree(std::int64_t n);

std::vector<std::int64_t> divisor_list(std::int64_t n);

std::int64_t divisor_count(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

// Number of multiples of d in the closed window [lo, hi].
inline std::int64_t multiples_in_window(std::int64_t lo, std::int64_t hi, std::int64_t d) {
  if (hi < lo) return 0;
  const std::int64_t first = (lo + d - 1) / d;
  const std::int64_t last = hi / d;
  return last >= first ? last - first + 1 : 0;
}

// A point t = (t_1, ..., t_k) of Z^k, k >= 2.
class LatticePoint {
 public:
  explicit LatticePoint(std::vector<std::int64_t> coords);
  LatticePoint(std::initializer_list<std::int64_t> coords) : LatticePoint(std::vector<std::int64_t>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  // Adds c to every coordinate.
  LatticePoint shifted(std::int64_t c) const;

  // m*1 and m*1 + e_j.
  static LatticePoint diagonal(std::size_t k, std::int64_t m);
  static LatticePoint diagonal_plus_unit(std::size_t k, std::int64_t m, std::size_t j);

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

// sum_i t_i - k * min_i t_i. Zero exactly on the diagonal.
std::int64_t gcd_norm(const LatticePoint& t);
std::int64_t gcd_norm(std::span<const std::int64_t> t);

}  // namespace gcdlab
