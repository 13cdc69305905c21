#include <doctest.h>

#include <cmath>
#include <random>

#include "gcdlab/concentration.hpp"
#include "gcdlab/constructions.hpp"
#include "gcdlab/counting.hpp"
#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"
#include "oracles.hpp"

using namespace gcdlab;

namespace {

FiniteMeasure uniform(std::size_t k, const std::vector<LatticePoint>& pts) {
  std::map<LatticePoint, Rational> w;
  for (const auto& p : pts) w[p] = Rational(1, static_cast<long>(pts.size()));
  return FiniteMeasure(k, w);
}

std::vector<WeightSequence> indicators(std::size_t k, std::int64_t m, double q_prime) {
  return std::vector<WeightSequence>(k, WeightSequence({{m, 1.0}}, q_prime));
}

}  // namespace

TEST_CASE("concentration parameters") {
  const auto p = q_of(3, 0.5);
  CHECK(p.q == doctest::Approx(1.625));
  CHECK(p.q_prime == doctest::Approx(2.6));
  CHECK(p.eta == doctest::Approx(1.875));
  CHECK(eta_of(3, 1.625) == doctest::Approx(1.875));
  CHECK(q_of(3, 1e-9).q == doctest::Approx(1.5));
  CHECK(q_of(4, 0.5).eta == doctest::Approx(4 * (q_of(4, 0.5).q - 1)));
  CHECK_THROWS_AS(q_of(2, 0.5), not_applicable);
  CHECK(default_lambda_k(3) == doctest::Approx(std::pow(2.0, -0.5)));
}

TEST_CASE("c floor") {
  CHECK(c_floor(3, std::pow(2.0, -0.5)) == doctest::Approx(0.028595).epsilon(1e-4));
  CHECK(c_floor(3, 1e-12) == doctest::Approx(1.0 / 3));
  double prev = 1;
  for (int i = 1; i < 100; ++i) {
    const double v = c_floor(4, i / 100.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("measures and weight sequences validate") {
  CHECK_THROWS_AS(FiniteMeasure(2, {{LatticePoint{0, 0}, Rational(1, 2)}}), usage_error);
  CHECK_THROWS_AS(FiniteMeasure(2, {{LatticePoint{0, 0}, Rational(3, 2)}, {LatticePoint{1, 0}, Rational(-1, 2)}}),
                  usage_error);
  CHECK_THROWS_AS(WeightSequence({{0, 0.5}}, 2.0), usage_error);
  const auto w = WeightSequence::normalized({{0, 1.0}, {1, 1.0}}, 2.0);
  CHECK(w(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(w(5) == 0);
}

TEST_CASE("domination hypothesis") {
  const std::size_t k = 3;
  const std::int64_t m = 4;
  const auto point = uniform(k, {LatticePoint::diagonal(k, m)});
  const auto xs = indicators(k, m, 2.6);
  CHECK(check_hypothesis(point, xs, 0.3, 1.0).pass);
  CHECK(check_hypothesis(point, xs, 0.9, 1.0).pass);
  const auto fail = check_hypothesis(point, xs, 0.3, 0.5);
  CHECK_FALSE(fail.pass);
  REQUIRE(fail.first_violation);
  CHECK(*fail.first_violation == LatticePoint::diagonal(k, m));

  const auto two = uniform(k, {LatticePoint::diagonal(k, m), LatticePoint::diagonal_plus_unit(k, m, 0)});
  std::vector<WeightSequence> ys = xs;
  ys[0] = WeightSequence::normalized({{m, 1.0}, {m + 1, 2.0}}, 2.6);
  const double lambda = 0.5;
  const double need_diag = 0.5 / ys[0](m);
  const double need_unit = 0.5 / (lambda * ys[0](m + 1));
  const auto h = check_hypothesis(two, ys, lambda, 1.0);
  CHECK(h.required_c == doctest::Approx(std::max(need_diag, need_unit)));
  REQUIRE(h.binding_point);
  CHECK(*h.binding_point == (need_unit > need_diag ? LatticePoint::diagonal_plus_unit(k, m, 0) : LatticePoint::diagonal(k, m)));
  CHECK(check_hypothesis(two, ys, lambda, h.required_c * (1 + 1e-9)).pass);
  CHECK_FALSE(check_hypothesis(two, ys, lambda, h.required_c * 0.99).pass);

  // Measure outside the support of x.
  const auto off = check_hypothesis(two, xs, lambda, 1.0);
  CHECK_FALSE(off.pass);
  CHECK(std::isinf(off.required_c));
}

TEST_CASE("best center") {
  CHECK(best_center(uniform(3, {LatticePoint{5, 5, 5}})).m == 5);
  CHECK(best_center(uniform(3, {LatticePoint{5, 5, 5}})).outside_mass == 0);
  const auto s0 = best_center(uniform(3, {LatticePoint{0, 0, 0}, LatticePoint{1, 0, 0}, LatticePoint{0, 1, 0},
                                          LatticePoint{0, 0, 1}}));
  CHECK(s0.m == 0);
  CHECK(s0.outside_mass == 0);
  const auto half = best_center(uniform(3, {LatticePoint{0, 0, 0}, LatticePoint{2, 0, 0}}));
  CHECK(half.m == 0);
  CHECK(half.outside_mass == Rational(1, 2));
  CHECK(in_concentration_set(LatticePoint{3, 2, 2}, 2));
  CHECK_FALSE(in_concentration_set(LatticePoint{3, 3, 2}, 2));
}

TEST_CASE("localization at a prime") {
  const GcdInstance inst(std::vector<IntegerSet>(2, IntegerSet(3, {4, 5, 6})), 2);
  const auto omega = enumerate_tuples(inst.sets(), gcd_at_least(2));
  const auto mu = localize_at_prime(inst, omega, 2);
  for (const auto& t : {LatticePoint{2, 2}, LatticePoint{2, 1}, LatticePoint{1, 2}, LatticePoint{1, 1}, LatticePoint{0, 0}})
    CHECK(mu(t) == Rational(1, 5));
  CHECK(mu.weights().size() == 5);
  CHECK(localize_at_prime_fast(inst, 2) == mu);

  const GcdInstance coprime(std::vector<IntegerSet>(3, IntegerSet(10, {11, 13, 20})), 1);
  const auto all = enumerate_tuples(coprime.sets(), gcd_at_least(1));
  const auto point = localize_at_prime(coprime, all, 7);
  CHECK(point(LatticePoint{0, 0, 0}) == 1);
  CHECK_THROWS_AS(localize_at_prime(coprime, TupleList(3), 7), usage_error);
}

TEST_CASE("fast and enumerated localization agree") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<IntegerSet> sets;
    for (int i = 0; i < 3; ++i) {
      const std::int64_t x = 20 + static_cast<std::int64_t>(rng() % 200);
      std::vector<std::int64_t> v;
      for (int j = 0; j < 15; ++j) v.push_back(x + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x + 1)));
      sets.emplace_back(x, v);
    }
    const GcdInstance g(sets, 1 + static_cast<std::int64_t>(rng() % 6));
    const auto omega = enumerate_tuples(g.sets(), gcd_at_least(g.threshold()));
    if (omega.size() == 0) continue;
    for (std::int64_t p : {2, 3, 5}) {
      const auto slow = localize_at_prime(g, omega, p);
      CHECK(localize_at_prime_fast(g, p) == slow);
      Rational total = 0;
      for (const auto& [t, w] : slow.weights()) total += w;
      CHECK(total == 1);
      // Marginal of coordinate 0 never exceeds the slice share scaled by the census.
      const auto census = count_gcd_fast(g);
      for (const auto& sl : valuation_slices(g.set(0), p)) {
        Rational marginal = 0;
        for (const auto& [t, w] : slow.weights())
          if (t[0] == sl.t) marginal += w;
        CHECK(marginal <= sl.alpha / census.delta);
      }
    }
  }
}

TEST_CASE("measure constraint check reports a finite requirement") {
  const auto [inst, r] = build_gcd_extremal(3, 2000, 100, Rational(1, 100));
  const auto params = q_of(3, 0.5);
  const auto mu = localize_at_prime_fast(inst, 3);
  const auto h = measure_constraint_check(inst, mu, 3, params, 1000);
  CHECK(h.required_c > 0);
  CHECK(std::isfinite(h.required_c));
}

TEST_CASE("purity") {
  const std::vector<std::int64_t> a{4, 6, 10};
  CHECK(purity_check(a, 2));
  const std::vector<std::int64_t> b{4, 3, 5};
  CHECK_FALSE(purity_check(b, 1));
  const std::vector<std::int64_t> diag{12, 12, 12};
  CHECK(purity_check(diag, 12));
  CHECK_THROWS_AS(purity_check(b, 2), usage_error);

  std::mt19937_64 rng(4);
  int pure = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 30);
    std::vector<std::int64_t> t(3);
    for (auto& v : t) v = n * (1 + static_cast<std::int64_t>(rng() % 40));
    if (purity_check(t, n)) {
      ++pure;
      REQUIRE(oracle::gcd_all(t) == n);
    }
  }
  CHECK(pure > 100);
}

TEST_CASE("structure scan") {
  const GcdInstance inst(std::vector<IntegerSet>(3, IntegerSet(20, {30, 35})), 5);
  TupleList one(3);
  const std::vector<std::int64_t> t{30, 30, 30};
  one.push_back(t);
  const auto prof = structure_scan(inst, one);
  CHECK(prof.n == 30);
  CHECK(prof.pure_fraction == 1);
  CHECK(prof.centers.size() == 3);
}

TEST_CASE("dominated measure search finds no counterexample") {
  for (std::size_t k : {3, 4}) {
    const auto s = dominated_measure_search(k, 200, 2024);
    CHECK(s.trials.size() == 200);
    CHECK(s.violations == 0);
    CHECK(s.accepted > 0);
    REQUIRE(s.min_accepted_c);
    CHECK(*s.min_accepted_c >= s.floor);
    CHECK(s.floor == doctest::Approx(c_floor(k, default_lambda_k(k))));
  }
  // Sampled measures really satisfy the hypothesis they were drawn under.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    DominatedTrial trial{};
    std::vector<WeightSequence> xs;
    const auto mu = sample_dominated_measure(3, seed, trial, &xs);
    if (!mu) continue;
    CHECK(check_hypothesis(*mu, xs, trial.lambda, trial.c).pass);
  }
  const auto a = dominated_measure_search(3, 64, 9, 1);
  const auto b = dominated_measure_search(3, 64, 9, 4);
  CHECK(a.accepted == b.accepted);
  CHECK(a.min_accepted_c == b.min_accepted_c);
}
