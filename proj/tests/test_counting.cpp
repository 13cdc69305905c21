#include <doctest.h>

#include <random>

#include "gcdlab/counting.hpp"
#include "gcdlab/errors.hpp"
#include "gcdlab/exact.hpp"
#include "gcdlab/kernel.hpp"
#include "gcdlab/set_model.hpp"
#include "oracles.hpp"

using namespace gcdlab;

namespace {

std::vector<IntegerSet> copies(std::size_t k, const IntegerSet& a) { return std::vector<IntegerSet>(k, a); }

std::vector<std::vector<std::int64_t>> plain(const std::vector<IntegerSet>& sets) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
  return out;
}

std::vector<IntegerSet> random_sets(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale, std::size_t max_size) {
  std::vector<IntegerSet> sets;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t x = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_scale));
    const std::size_t n = 1 + rng() % max_size;
    std::vector<std::int64_t> v;
    for (std::size_t j = 0; j < n; ++j) v.push_back(x + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x + 1)));
    sets.emplace_back(x, v);
  }
  return sets;
}

std::int64_t min_scale(const std::vector<IntegerSet>& sets) {
  std::int64_t m = sets[0].scale();
  for (const auto& s : sets) m = std::min(m, s.scale());
  return m;
}

std::int64_t max_scale(const std::vector<IntegerSet>& sets) {
  std::int64_t m = 0;
  for (const auto& s : sets) m = std::max(m, s.scale());
  return m;
}

}  // namespace

TEST_CASE("instance validation") {
  const IntegerSet a(3, {4, 5, 6});
  CHECK_THROWS_AS(GcdInstance(copies(1, a), 1), parameter_error);
  CHECK_THROWS_AS(GcdInstance(copies(2, a), 0), parameter_error);
  CHECK_THROWS_WITH_AS(GcdInstance(copies(2, a), 4), doctest::Contains("D <= min"), parameter_error);
  CHECK_THROWS_AS(LcmInstance(copies(2, a), 2), parameter_error);
  CHECK_NOTHROW(LcmInstance(copies(2, a), 3));
}

TEST_CASE("gcd census examples") {
  const GcdInstance inst(copies(2, IntegerSet(3, {4, 5, 6})), 2);
  const auto brute = count_gcd_bruteforce(inst);
  CHECK(brute.qualifying == 5);
  CHECK(brute.total == 9);
  CHECK(brute.delta == Rational(5, 9));
  CHECK(count_gcd_fast(inst) == brute);

  const GcdInstance triple(copies(3, IntegerSet(2, {2, 3})), 2);
  CHECK(count_gcd_bruteforce(triple).qualifying == 2);
  CHECK(count_gcd_fast(triple).qualifying == 2);

  const GcdInstance one(copies(3, IntegerSet(5, {5, 6, 7, 9})), 1);
  CHECK(count_gcd_bruteforce(one).qualifying == count_gcd_bruteforce(one).total);
  CHECK(count_gcd_fast(one).qualifying == 64);

  const GcdInstance eight(copies(2, IntegerSet(4, {4, 6, 8})), 3);
  const auto exact = exact_gcd_counts(eight);
  // Indices are g - 3.
  CHECK(exact[0] == 0);
  CHECK(exact[1] == 3);
  CHECK(exact[3] == 1);
  CHECK(exact[5] == 1);
  CHECK(count_gcd_fast(eight).qualifying == 5);

  const GcdInstance mult(copies(3, multiples_in(50, 7)), 7);
  CHECK(count_gcd_fast(mult).delta == 1);
}

TEST_CASE("brute force refuses above the cap") {
  const GcdInstance inst(copies(3, IntegerSet::full_window(100)), 2);
  CHECK_THROWS_WITH_AS(count_gcd_bruteforce(inst, 1000), doctest::Contains("1030301"), cap_exceeded);
  const LcmInstance linst(copies(3, IntegerSet::full_window(100)), 300);
  CHECK_THROWS_AS(count_lcm_bruteforce(linst, 1000), cap_exceeded);
  const LcmInstance huge(copies(2, IntegerSet(3, {3})), 200'000'000);
  CHECK_THROWS_AS(count_lcm_fast(huge), cap_exceeded);
}

TEST_CASE("lcm census examples") {
  const LcmInstance inst(copies(2, IntegerSet(3, {3, 4, 5})), 12);
  CHECK(count_lcm_bruteforce(inst).qualifying == 5);
  CHECK(count_lcm_fast(inst).first.qualifying == 5);

  const LcmInstance small(copies(2, IntegerSet(2, {2, 3})), 5);
  CHECK(count_lcm_bruteforce(small).qualifying == 2);

  const LcmInstance six(copies(2, IntegerSet(2, {2, 3})), 6);
  const auto [census, lattice] = count_lcm_fast(six);
  CHECK(lattice.multiple_count(6) == 4);
  CHECK(lattice.exact_count(6) == 2);
  CHECK(lattice.exact_count(1) == 0);
  CHECK(multiplicity_weighted_sum(six) == 7);
  CHECK(census.qualifying == 4);

  const LcmInstance everything(copies(2, IntegerSet(3, {3, 4, 5})), 36);
  CHECK(count_lcm_fast(everything).first.delta == 1);

  const LcmInstance below(copies(2, IntegerSet(10, {15, 17})), 14);
  CHECK(multiplicity_weighted_sum(below) == 0);
  CHECK(count_lcm_fast(below).first.qualifying == 0);
}

TEST_CASE("exact lcm counts vanish below the largest minimum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sets = random_sets(rng, 2 + trial % 3, 60, 8);
    const std::int64_t l = max_scale(sets) + static_cast<std::int64_t>(rng() % 2000);
    const LcmInstance inst(sets, l);
    const auto [census, lattice] = count_lcm_fast(inst);
    std::int64_t floor = 0;
    for (const auto& s : sets) floor = std::max(floor, s.min());
    ExactInt sum = 0;
    for (std::int64_t v = 1; v <= l; ++v) {
      const ExactInt g = lattice.exact_count(v);
      REQUIRE(g >= 0);
      if (v < floor) REQUIRE(g == 0);
      sum += g;
    }
    CHECK(sum == census.qualifying);
  }
}

TEST_CASE("fast counters match brute force and the nested-loop oracle") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 3);
    const auto sets = random_sets(rng, k, 500, k == 4 ? 12 : 25);
    const std::int64_t xmin = min_scale(sets);
    const std::int64_t d = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(std::min<std::int64_t>(xmin, 40)));
    const GcdInstance g(sets, d);
    const auto brute = count_gcd_bruteforce(g);
    REQUIRE(count_gcd_fast(g) == brute);
    if (trial % 25 == 0) {
      const auto want = oracle::census(plain(sets), [&](const auto& t) { return oracle::gcd_all(t) >= d; });
      CHECK(brute.qualifying == want);
    }

    const std::int64_t l = max_scale(sets) + static_cast<std::int64_t>(rng() % 20000);
    const LcmInstance li(sets, l);
    const auto lb = count_lcm_bruteforce(li);
    REQUIRE(count_lcm_fast(li).first == lb);
    if (trial % 25 == 0) {
      const auto want = oracle::census(plain(sets), [&](const auto& t) { return oracle::lcm_all(t) <= l; });
      CHECK(lb.qualifying == want);
    }
  }
}

TEST_CASE("chain inequalities and monotonicity") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 3);
    const auto sets = random_sets(rng, k, 300, 20);
    const std::int64_t xmin = min_scale(sets);
    const std::int64_t d = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(xmin));
    const GcdInstance g(sets, d);
    const auto c = count_gcd_fast(g);
    ExactInt blocks = 0;
    for (const auto& b : dyadic_blocks(g)) blocks += b.value;
    CHECK(Rational(c.qualifying) <= Rational(blocks));
    CHECK(c.delta * Rational(c.total) == Rational(c.qualifying));
    if (d < xmin) CHECK(count_gcd_fast(GcdInstance(sets, d + 1)).qualifying <= c.qualifying);

    const std::int64_t l = max_scale(sets) + static_cast<std::int64_t>(rng() % 5000);
    const LcmInstance li(sets, l);
    const auto lc = count_lcm_fast(li).first;
    CHECK(lc.delta * Rational(lc.total) <= Rational(multiplicity_weighted_sum(li)));
    CHECK(count_lcm_fast(LcmInstance(sets, l + 1 + static_cast<std::int64_t>(rng() % 100))).first.qualifying >= lc.qualifying);
  }
}

TEST_CASE("mobius counts are nonnegative and sum to the census") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sets = random_sets(rng, 3, 400, 25);
    const GcdInstance g(sets, 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(min_scale(sets))));
    ExactInt sum = 0;
    for (const auto& m : exact_gcd_counts(g)) {
      REQUIRE(m >= 0);
      sum += m;
    }
    CHECK(sum == count_gcd_fast(g).qualifying);
  }
}

TEST_CASE("worker count does not change censuses") {
  const GcdInstance g(copies(3, multiples_in(20000, 3)), 30);
  const auto one = count_gcd_fast(g, {1});
  CHECK(count_gcd_fast(g, {3}) == one);
  CHECK(count_gcd_fast(g, {8}) == one);
}

TEST_CASE("dyadic blocks") {
  const GcdInstance g(copies(2, IntegerSet(4, {4, 6, 8})), 2);
  const auto blocks = dyadic_blocks(g);
  REQUIRE_FALSE(blocks.empty());
  CHECK(blocks[0].delta_scale == 2);
  CHECK(blocks[0].value == 10);
  CHECK(blocks.size() == 3);
}

TEST_CASE("s-wise census") {
  const GcdInstance even(copies(3, IntegerSet(4, {4, 6})), 2);
  CHECK(count_swise_bruteforce(even, 2).qualifying == 8);
  const GcdInstance mixed(copies(3, IntegerSet(4, {4, 5})), 2);
  CHECK(count_swise_bruteforce(mixed, 2).qualifying == 2);
  CHECK(count_swise_bruteforce(mixed, 3) == count_gcd_bruteforce(mixed));
  CHECK_THROWS_AS(count_swise_bruteforce(mixed, 1), usage_error);
  CHECK_THROWS_AS(count_swise_bruteforce(mixed, 4), usage_error);
}

TEST_CASE("projection census") {
  const GcdInstance mixed(copies(3, IntegerSet(4, {4, 5})), 2);
  const auto pred = swise_gcd_at_least(2, 2);
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(project_census(mixed, pred, all) == count_swise_bruteforce(mixed, 2));
  const GcdInstance even(copies(3, IntegerSet(4, {4, 6})), 2);
  const std::vector<std::size_t> first_two{0, 1};
  const auto proj = project_census(even, pred, first_two);
  CHECK(proj.qualifying == 4);
  CHECK(proj.total == 4);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sets = random_sets(rng, 3, 60, 10);
    const GcdInstance g(sets, 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(min_scale(sets))));
    const auto full = count_swise_bruteforce(g, 2);
    for (std::size_t drop = 0; drop < 3; ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < 3; ++i)
        if (i != drop) keep.push_back(i);
      const auto p = project_census(g, swise_gcd_at_least(g.threshold(), 2), keep);
      CHECK(p.qualifying * static_cast<long>(sets[drop].size()) >= full.qualifying);
    }
  }
}

TEST_CASE("pruned enumeration agrees with the predicate scan") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sets = random_sets(rng, 3, 200, 15);
    const GcdInstance g(sets, 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(min_scale(sets))));
    const auto listed = enumerate_tuples(g.sets(), gcd_at_least(g.threshold()));
    std::size_t visited = 0;
    for_each_gcd_qualifying(g, [&](std::span<const std::int64_t> t) {
      CHECK(gcd_tuple(t) >= g.threshold());
      ++visited;
    });
    CHECK(visited == listed.size());
    CHECK(ExactInt(static_cast<unsigned long>(visited)) == count_gcd_fast(g).qualifying);
  }
}
