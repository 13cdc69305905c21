#include <doctest.h>

#include <random>

#include "gcdlab/errors.hpp"
#include "gcdlab/exact.hpp"
#include "gcdlab/kernel.hpp"
#include "oracles.hpp"

using namespace gcdlab;

namespace {
std::int64_t g(std::initializer_list<std::int64_t> v) { return gcd_tuple(std::vector<std::int64_t>(v)); }
ExactInt l(std::initializer_list<std::int64_t> v) { return lcm_tuple(std::vector<std::int64_t>(v)); }
}  // namespace

TEST_CASE("gcd of tuples") {
  CHECK(g({6, 10, 15}) == 1);
  CHECK(g({7, 7, 7}) == 7);
  CHECK(g({4, 6}) == 2);
  CHECK_THROWS_AS(gcd_tuple(std::vector<std::int64_t>{}), usage_error);
  CHECK_THROWS_AS(g({4, 0}), usage_error);
  const std::vector<ExactInt> big{ExactInt("123456789012345678901234567890"), ExactInt("30")};
  CHECK(gcd_tuple(big) == 30);
}

TEST_CASE("lcm of tuples is exact") {
  CHECK(l({4, 6}) == 12);
  CHECK(l({9}) == 9);
  CHECK(l({3, 4, 5}) == 60);
  CHECK_THROWS_AS(lcm_tuple(std::vector<std::int64_t>{}), usage_error);
  // Far beyond 64 bits.
  const std::vector<std::int64_t> primes{1000000007, 998244353, 1000000009, 999999937};
  CHECK(lcm_tuple(primes) == oracle::lcm_all(primes));
  CHECK(lcm_at_most(std::vector<std::int64_t>{4, 6}, 12));
  CHECK_FALSE(lcm_at_most(std::vector<std::int64_t>{4, 6}, 11));
  CHECK_FALSE(lcm_at_most(primes, std::int64_t{1} << 62));
}

TEST_CASE("gcd times lcm equals product for pairs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 100000);
    const std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 100000);
    const std::vector<std::int64_t> v{a, b};
    CHECK(to_exact(gcd_tuple(v)) * lcm_tuple(v) == to_exact(a) * to_exact(b));
    CHECK(gcd_tuple(v) == oracle::gcd_all(v));
  }
}

TEST_CASE("mobius values and table") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(12) == 0);
  CHECK(mobius(30) == -1);
  CHECK_THROWS_AS(mobius(0), usage_error);
  const auto table = mobius_table(20000);
  for (std::int64_t n = 1; n <= 20000; ++n) REQUIRE(table[static_cast<std::size_t>(n)] == oracle::mobius(n));
}

TEST_CASE("sum of mobius over divisors vanishes above 1") {
  const std::int64_t n_max = 100000;
  const auto mu = mobius_table(n_max);
  std::vector<std::int64_t> sums(static_cast<std::size_t>(n_max + 1), 0);
  for (std::int64_t d = 1; d <= n_max; ++d)
    for (std::int64_t m = d; m <= n_max; m += d) sums[static_cast<std::size_t>(m)] += mu[static_cast<std::size_t>(d)];
  CHECK(sums[1] == 1);
  bool all_zero = true;
  for (std::int64_t n = 2; n <= n_max; ++n) all_zero = all_zero && sums[static_cast<std::size_t>(n)] == 0;
  CHECK(all_zero);
}

TEST_CASE("primes in a range") {
  CHECK(primes_in(10, 20) == std::vector<std::int64_t>{11, 13, 17, 19});
  CHECK(primes_in(2, 2) == std::vector<std::int64_t>{2});
  CHECK(primes_in(24, 28).empty());
  CHECK(primes_in(30, 20).empty());
  std::vector<std::int64_t> trial;
  for (std::int64_t n = 2; n <= 10000; ++n)
    if (oracle::is_prime(n)) trial.push_back(n);
  CHECK(primes_in(2, 10000) == trial);
  // A segment far from the origin.
  std::vector<std::int64_t> far;
  for (std::int64_t n = 1'000'000'000; n <= 1'000'001'000; ++n)
    if (oracle::is_prime(n)) far.push_back(n);
  CHECK(primes_in(1'000'000'000, 1'000'001'000) == far);
  for (auto p : far) CHECK(is_prime(p));
  CHECK(is_prime(9223372036854775783));
  CHECK_FALSE(is_prime(9223372036854775781));
}

TEST_CASE("p-adic valuation") {
  CHECK(p_adic_valuation(40, 2) == 3);
  CHECK(p_adic_valuation(7, 3) == 0);
  CHECK(p_adic_valuation(27, 3) == 3);
  CHECK_THROWS_AS(p_adic_valuation(40, 4), usage_error);
  CHECK_THROWS_AS(p_adic_valuation(0, 2), usage_error);
}

TEST_CASE("gcd norm") {
  CHECK(gcd_norm(LatticePoint{2, 2, 2}) == 0);
  CHECK(gcd_norm(LatticePoint{0, 0, 1}) == 1);
  CHECK(gcd_norm(LatticePoint{-1, 0, 0}) == 2);
  CHECK_THROWS_AS(LatticePoint{1}, usage_error);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 2 + rng() % 4;
    std::vector<std::int64_t> c(k);
    for (auto& x : c) x = static_cast<std::int64_t>(rng() % 21) - 10;
    const LatticePoint t(c);
    const std::int64_t shift = static_cast<std::int64_t>(rng() % 41) - 20;
    CHECK(gcd_norm(t.shifted(shift)) == gcd_norm(t));
    CHECK(gcd_norm(t) >= 0);
    const bool diagonal = std::all_of(c.begin(), c.end(), [&](auto v) { return v == c[0]; });
    CHECK((gcd_norm(t) == 0) == diagonal);
    const std::int64_t m = shift;
    CHECK(gcd_norm(LatticePoint::diagonal(k, m)) == 0);
    for (std::size_t j = 0; j < k; ++j) CHECK(gcd_norm(LatticePoint::diagonal_plus_unit(k, m, j)) == 1);
  }
}

TEST_CASE("divisor utilities") {
  CHECK(divisor_list(1) == std::vector<std::int64_t>{1});
  CHECK(divisor_list(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisor_list(7) == std::vector<std::int64_t>{1, 7});
  for (std::int64_t n = 1; n <= 3000; ++n) {
    std::int64_t tau = 0, phi = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
      tau += n % d == 0;
      phi += std::gcd(n, d) == 1;
    }
    REQUIRE(divisor_count(n) == tau);
    REQUIRE(static_cast<std::int64_t>(divisor_list(n).size()) == tau);
    REQUIRE(euler_phi(n) == phi);
    REQUIRE(is_squarefree(n) == (oracle::mobius(n) != 0));
  }
  CHECK(multiples_in_window(10, 20, 4) == 3);
  CHECK(multiples_in_window(5, 10, 5) == 2);
}

TEST_CASE("exact conversions and parsing") {
  CHECK(parse_rational("1/100") == Rational(1, 100));
  CHECK(parse_rational("0.01") == Rational(1, 100));
  CHECK(parse_rational("1e-2") == Rational(1, 100));
  CHECK(parse_rational("-7/12") == Rational(-7, 12));
  CHECK(parse_rational("2.5E+3") == Rational(2500));
  CHECK_THROWS_AS(parse_rational("abc"), parse_error);
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK(to_int64(ExactInt("9223372036854775807")).value() == INT64_MAX);
  CHECK_FALSE(to_int64(ExactInt("9223372036854775808")).has_value());
  CHECK(to_exact(static_cast<__int128>(1) << 100) == ExactInt(1) << 100);
  CHECK(log_of(ExactInt(ExactInt(1) << 2000)) == doctest::Approx(2000 * std::log(2.0)));
  CHECK(floor_root(ExactInt(1000), 3) == 10);
  CHECK(floor_root(ExactInt(999), 3) == 9);
}
