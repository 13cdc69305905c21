#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gcdlab/exact.hpp"
#include "gcdlab/set_model.hpp"

namespace gcdlab {

inline constexpr std::int64_t kDefaultBruteforceCap = 10'000'000;
inline constexpr std::int64_t kLcmBudgetCap = 100'000'000;

// k sets A_1..A_k and a gcd threshold D with 1 <= D <= min X_i.
class GcdInstance {
 public:
  GcdInstance(std::vector<IntegerSet> sets, std::int64_t threshold);

  std::size_t k() const { return sets_.size(); }
  const std::vector<IntegerSet>& sets() const { return sets_; }
  const IntegerSet& set(std::size_t i) const { return sets_[i]; }
  std::int64_t threshold() const { return threshold_; }
  std::int64_t min_scale() const;
  std::vector<std::int64_t> scales() const;

 private:
  std::vector<IntegerSet> sets_;
  std::int64_t threshold_;
};

// k sets and an lcm budget L with L >= max X_i.
class LcmInstance {
 public:
  LcmInstance(std::vector<IntegerSet> sets, std::int64_t budget);

  std::size_t k() const { return sets_.size(); }
  const std::vector<IntegerSet>& sets() const { return sets_; }
  const IntegerSet& set(std::size_t i) const { return sets_[i]; }
  std::int64_t budget() const { return budget_; }
  std::vector<std::int64_t> scales() const;

 private:
  std::vector<IntegerSet> sets_;
  std::int64_t budget_;
};

struct TupleCensus {
  ExactInt total;
  ExactInt qualifying;
  Rational delta;

  static TupleCensus make(ExactInt total, ExactInt qualifying);
  friend bool operator==(const TupleCensus&, const TupleCensus&) = default;
};

// S(Delta) = sum over Delta <= d < 2 Delta of prod_i |A_{i,d}|.
struct DyadicBlock {
  std::int64_t delta_scale;
  ExactInt value;
};

// F(l) = prod_i d_{A_i}(l) and G(l) = #{tuples with lcm exactly l}, for 1 <= l <= L.
class LcmLattice {
 public:
  using Storage = std::variant<std::vector<std::int64_t>, std::vector<ExactInt>>;

  LcmLattice(std::int64_t budget, Storage multiples, Storage exact)
      : budget_(budget), f_(std::move(multiples)), g_(std::move(exact)) {}

  std::int64_t budget() const { return budget_; }
  ExactInt multiple_count(std::int64_t l) const { return at(f_, l); }
  ExactInt exact_count(std::int64_t l) const { return at(g_, l); }

 private:
  static ExactInt at(const Storage& s, std::int64_t l);

  std::int64_t budget_;
  Storage f_;
  Storage g_;
};

struct CountOptions {
  unsigned workers = 1;
};

// Flat storage of k-tuples.
class TupleList {
 public:
  explicit TupleList(std::size_t k) : k_(k) {}
  std::size_t k() const { return k_; }
  std::size_t size() const { return k_ ? flat_.size() / k_ : 0; }
  std::span<const std::int64_t> operator[](std::size_t i) const { return {flat_.data() + i * k_, k_}; }
  void push_back(std::span<const std::int64_t> t) { flat_.insert(flat_.end(), t.begin(), t.end()); }

 private:
  std::size_t k_;
  std::vector<std::int64_t> flat_;
};

using TuplePredicate = std::function<bool(std::span<const std::int64_t>)>;

TuplePredicate gcd_at_least(std::int64_t threshold);
TuplePredicate lcm_within(std::int64_t budget);
// Every size-s sub-tuple has gcd >= threshold.
TuplePredicate swise_gcd_at_least(std::int64_t threshold, int s);

TupleCensus count_gcd_bruteforce(const GcdInstance& inst, std::int64_t cap = kDefaultBruteforceCap);
TupleCensus count_gcd_fast(const GcdInstance& inst, CountOptions opts = {});
// Number of tuples with gcd exactly g, for g = D, D+1, ..., (index g - D).
std::vector<ExactInt> exact_gcd_counts(const GcdInstance& inst);

TupleCensus count_lcm_bruteforce(const LcmInstance& inst, std::int64_t cap = kDefaultBruteforceCap);
std::pair<TupleCensus, LcmLattice> count_lcm_fast(const LcmInstance& inst, std::int64_t budget_cap = kLcmBudgetCap);
// sum_{l <= L} prod_i d_{A_i}(l).
ExactInt multiplicity_weighted_sum(const LcmInstance& inst, std::int64_t budget_cap = kLcmBudgetCap);

std::vector<DyadicBlock> dyadic_blocks(const GcdInstance& inst);

TupleCensus count_swise_bruteforce(const GcdInstance& inst, int s, std::int64_t cap = kDefaultBruteforceCap);

// Census of the distinct projections pi_I(Omega) of the tuples accepted by the
// predicate; indices are 0-based. Total is prod_{i in I} |A_i|.
TupleCensus project_census(const GcdInstance& inst, const TuplePredicate& qualifies,
                           std::span<const std::size_t> indices, std::int64_t cap = kDefaultBruteforceCap);

// Enumerates every tuple of prod A_i (in lexicographic order) and keeps the accepted ones.
TupleList enumerate_tuples(std::span<const IntegerSet> sets, const TuplePredicate& qualifies,
                           std::int64_t cap = kDefaultBruteforceCap);

// Visits every tuple with gcd >= D, pruning prefixes whose gcd already dropped below D.
// The cap bounds prod_{i<k} |A_i|.
void for_each_gcd_qualifying(const GcdInstance& inst, const std::function<void(std::span<const std::int64_t>)>& visit,
                             std::int64_t cap = kDefaultBruteforceCap);

ExactInt tuple_space_size(std::span<const IntegerSet> sets);

}  // namespace gcdlab
