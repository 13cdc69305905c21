#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gcdlab/counting.hpp"
#include "gcdlab/exact.hpp"

namespace gcdlab {

// Every A_i is the multiples of d0 in [X_i, 2X_i].
struct GcdRecipe {
  std::size_t k;
  std::vector<std::int64_t> scales;
  std::int64_t threshold;
  Rational target_delta;
  std::int64_t d0;
};

// A_i is the union over j of the multiples of q_j in [X_i, 2X_i].
struct LcmRecipe {
  std::size_t k;
  std::vector<std::int64_t> scales;
  std::int64_t budget;
  Rational target_delta;
  double c_const;
  double big_c_const;
  std::int64_t m;
  std::int64_t q;
  std::vector<std::int64_t> primes;
  // block_sizes[i][j] = |A_i^{(j)}|.
  std::vector<std::vector<std::int64_t>> block_sizes;
  // Q / (M log2(2M)) and Q / (8k M^2); both >= 1 means the proof's slack is present.
  double log_margin;
  double overlap_margin;
  // 2^{k+1} prod X_i <= L Q^{k-1}.
  bool budget_ok;
};

double default_lcm_small_const(std::size_t k);
double default_lcm_large_const(std::size_t k);

std::pair<GcdInstance, GcdRecipe> build_gcd_extremal_delta1(std::size_t k, const std::vector<std::int64_t>& scales,
                                                            std::int64_t threshold);

std::pair<GcdInstance, GcdRecipe> build_gcd_extremal(std::size_t k, std::int64_t scale, std::int64_t threshold,
                                                     const Rational& delta);

// Nullopt constants mean the defaults above.
std::pair<LcmInstance, LcmRecipe> build_lcm_extremal(std::size_t k, const std::vector<std::int64_t>& scales,
                                                     std::int64_t budget, const Rational& delta,
                                                     std::optional<double> c_const = std::nullopt,
                                                     std::optional<double> big_c_const = std::nullopt);

// Tuples lying in some product block prod_i A_i^{(j)}, i.e. some q_j divides every coordinate.
TupleCensus good_tuple_census(const LcmRecipe& recipe, const LcmInstance& inst);

// sum_j prod_i |A_i^{(j)}| - sum_{j<l} prod_i |A_i^{(j)} cap A_i^{(l)}|.
ExactInt good_tuple_lower_bound(const LcmRecipe& recipe, const LcmInstance& inst);

// Uniformly chosen block, then uniform coordinates inside it.
TupleList sample_good_tuples(const LcmRecipe& recipe, const LcmInstance& inst, std::size_t count, std::uint64_t seed);

// lcm(t) * Q^{k-1} <= 2^{k+1} prod X_i, the per-tuple bound behind the budget check.
bool good_tuple_lcm_bound_holds(const LcmRecipe& recipe, std::span<const std::int64_t> tuple);

}  // namespace gcdlab
