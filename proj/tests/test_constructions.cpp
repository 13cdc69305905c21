#include <doctest.h>

#include <cmath>
#include <set>

#include "gcdlab/constructions.hpp"
#include "gcdlab/counting.hpp"
#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"

using namespace gcdlab;

TEST_CASE("delta one gcd construction") {
  const auto [inst, recipe] = build_gcd_extremal_delta1(2, {10, 10}, 5);
  CHECK(std::vector<std::int64_t>(inst.set(0).begin(), inst.set(0).end()) == std::vector<std::int64_t>{10, 15, 20});
  CHECK(count_gcd_bruteforce(inst).delta == 1);
  CHECK(recipe.d0 == 5);

  const auto [full, r1] = build_gcd_extremal_delta1(3, {7, 9, 11}, 1);
  CHECK(full.set(1) == IntegerSet::full_window(9));
  CHECK(count_gcd_fast(full).delta == 1);

  for (std::size_t k = 2; k <= 4; ++k)
    for (std::int64_t x : {50, 333, 1000})
      for (std::int64_t d : {1, 3, 7, 50}) {
        const auto [g, r] = build_gcd_extremal_delta1(k, std::vector<std::int64_t>(k, x), d);
        const double log_size = log_of(tuple_space_size(g.sets()));
        const double log_ref = static_cast<double>(k) * (std::log(static_cast<double>(x)) - std::log(static_cast<double>(d)));
        CHECK(std::abs(log_size - log_ref) <= static_cast<double>(k) * std::log(4.0));
      }
}

TEST_CASE("gcd construction with target density") {
  const auto [inst, recipe] = build_gcd_extremal(3, 1000, 100, Rational(1, 100));
  CHECK(recipe.d0 == 10);
  const auto [same, r1] = build_gcd_extremal(3, 1000, 100, Rational(1));
  CHECK(r1.d0 == 100);
  CHECK(same.sets() == build_gcd_extremal_delta1(3, {1000, 1000, 1000}, 100).first.sets());
  CHECK_THROWS_WITH_AS(build_gcd_extremal(3, 1000, 5, Rational(1, 100)), doctest::Contains("D >= delta^(-1/(k-1))"),
                       parameter_error);

  for (std::int64_t d : {20, 50, 100}) {
    const auto [g, r] = build_gcd_extremal(3, 5000, d, Rational(1, 100));
    const ExactInt size = tuple_space_size(g.sets());
    const Rational lo = ratio(5000, 2 * r.d0);
    const Rational hi = ratio(2 * 5000, r.d0);
    CHECK(Rational(size) >= lo * lo * lo);
    CHECK(Rational(size) <= hi * hi * hi);
  }
}

TEST_CASE("measured density of the sharp gcd instance") {
  const Rational delta(1, 100);
  const auto [inst, recipe] = build_gcd_extremal(3, 1'000'000, 100, delta);
  const auto c = count_gcd_fast(inst);
  CHECK(c.delta >= delta / 8);
  CHECK(c.delta <= delta * 8);
}

TEST_CASE("lcm construction recipe") {
  const auto [inst, r] = build_lcm_extremal(2, {100000, 100000}, 4'000'000, Rational(1, 512), 1.0 / 128, 8.0);
  CHECK(r.m == 4);
  CHECK(r.q == 20000);
  REQUIRE(r.primes.size() == 4);
  std::set<std::int64_t> distinct(r.primes.begin(), r.primes.end());
  CHECK(distinct.size() == 4);
  for (auto p : r.primes) {
    CHECK(is_prime(p));
    CHECK(p >= r.q);
    CHECK(p <= 2 * r.q);
  }
  CHECK(r.budget_ok);
  CHECK(r.log_margin >= 1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto b = r.block_sizes[i][j];
      CHECK(4 * r.q * b >= r.scales[i]);
      CHECK(b * r.q <= 2 * r.scales[i]);
      CHECK(b == static_cast<std::int64_t>(multiples_in(r.scales[i], r.primes[j]).size()));
    }
  const auto good = good_tuple_census(r, inst);
  CHECK(good.delta >= r.target_delta);
  CHECK(good.qualifying >= good_tuple_lower_bound(r, inst));
  CHECK(good.qualifying <= count_lcm_fast(inst, 200'000'000).first.qualifying);
  const auto sample = sample_good_tuples(r, inst, 500, 42);
  CHECK(sample.size() == 500);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    CHECK(lcm_at_most(sample[i], r.budget));
    CHECK(good_tuple_lcm_bound_holds(r, sample[i]));
  }
}

TEST_CASE("single-prime lcm construction makes every tuple good") {
  const auto [inst, r] = build_lcm_extremal(2, {5000, 5000}, 100'000, Rational(1, 64), 1.0 / 128, 8.0);
  CHECK(r.m == 1);
  const auto good = good_tuple_census(r, inst);
  CHECK(good.qualifying == good.total);
  CHECK(count_lcm_fast(inst).first.delta == 1);
}

TEST_CASE("lcm construction good census matches brute force") {
  const auto [inst, r] = build_lcm_extremal(3, {3000, 3000, 3000}, 4'000'000, Rational(1, 4), 1.5, 8.0);
  CHECK(r.m == 3);
  const auto good = good_tuple_census(r, inst);
  std::vector<std::int64_t> qs = r.primes;
  const auto listed = enumerate_tuples(inst.sets(), [&](std::span<const std::int64_t> t) {
    for (auto q : qs) {
      bool all = true;
      for (auto a : t) all = all && a % q == 0;
      if (all) return true;
    }
    return false;
  });
  CHECK(good.qualifying == static_cast<unsigned long>(listed.size()));
}

TEST_CASE("lcm construction parameter errors") {
  CHECK_THROWS_AS(build_lcm_extremal(2, {100, 100}, 100, Rational(1, 2), std::nullopt, std::nullopt), parameter_error);
  CHECK_THROWS_AS(build_lcm_extremal(2, {100, 100}, 50, Rational(1, 2)), parameter_error);
  CHECK(default_lcm_small_const(2) == doctest::Approx(1.0 / 128));
  CHECK(default_lcm_large_const(2) == doctest::Approx(32.0));
  CHECK(default_lcm_large_const(3) == doctest::Approx(72.0));
}
