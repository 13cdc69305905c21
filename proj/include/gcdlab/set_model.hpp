#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gcdlab/exact.hpp"

namespace gcdlab {

enum class EmptyPolicy { reject, allow };

// A finite set of integers inside the dyadic window [X, 2X].
// Elements are kept sorted and deduplicated.
class IntegerSet {
 public:
  IntegerSet(std::int64_t scale, std::vector<std::int64_t> elements, EmptyPolicy policy = EmptyPolicy::reject);

  static IntegerSet empty_at(std::int64_t scale) { return IntegerSet(scale, {}, EmptyPolicy::allow); }
  // All integers of [X, 2X].
  static IntegerSet full_window(std::int64_t scale);

  std::int64_t scale() const { return scale_; }
  std::int64_t window_lo() const { return scale_; }
  std::int64_t window_hi() const { return 2 * scale_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(std::int64_t a) const;
  std::span<const std::int64_t> elements() const { return elements_; }
  std::int64_t min() const { return elements_.front(); }
  std::int64_t max() const { return elements_.back(); }
  std::int64_t operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const IntegerSet&, const IntegerSet&) = default;

 private:
  std::int64_t scale_;
  std::vector<std::int64_t> elements_;
};

// counts[d] = #{a in A : d | a} for 1 <= d <= d_max.
class MultiplicityTable {
 public:
  MultiplicityTable(std::int64_t set_size, std::vector<std::int64_t> counts)
      : set_size_(set_size), counts_(std::move(counts)) {}

  std::int64_t d_max() const { return static_cast<std::int64_t>(counts_.size()) - 1; }
  std::int64_t set_size() const { return set_size_; }
  std::int64_t operator[](std::int64_t d) const {
    return d >= 1 && d <= d_max() ? counts_[static_cast<std::size_t>(d)] : 0;
  }
  std::span<const std::int64_t> counts() const { return counts_; }

 private:
  std::int64_t set_size_;
  std::vector<std::int64_t> counts_;
};

// The elements of a set with p-adic valuation exactly t, and their share alpha.
struct ValuationSlice {
  std::int64_t p;
  int t;
  std::int64_t parent_scale;
  std::vector<std::int64_t> members;
  Rational alpha;
};

IntegerSet multiples_in(std::int64_t scale, std::int64_t d);

MultiplicityTable multiplicity_table(const IntegerSet& a, std::int64_t d_max);

// Disjoint slices covering A, ascending in t, empty slices omitted.
std::vector<ValuationSlice> valuation_slices(const IntegerSet& a, std::int64_t p);

// Divides p^t out of every member; the result lives in [ceil(X/p^t), 2 ceil(X/p^t)].
IntegerSet prime_removed(const ValuationSlice& slice);

std::int64_t divisor_count_in_set(const IntegerSet& a, std::int64_t l);

// Line format: "X <scale>" then one element per line.
void write_set_text(std::ostream& out, const IntegerSet& a);
IntegerSet read_set_text(std::istream& in);

}  // namespace gcdlab
