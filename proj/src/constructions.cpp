#include "gcdlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <fmt/format.h>

#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"

namespace gcdlab {

namespace {

// Ceiling that tolerates floating noise on values meant to be integers.
std::int64_t snapped_ceil(long double v) {
  const long double r = std::round(v);
  if (std::fabs(v - r) <= 1e-9L * std::max<long double>(1.0L, std::fabs(v))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(v));
}

long double as_long_double(const Rational& r) {
  // Numerator and denominator may exceed double individually; go through logs when they do.
  const double lnum = log_of(ExactInt(r.get_num()));
  const double lden = log_of(ExactInt(r.get_den()));
  if (lnum < 700 && lden < 700) return static_cast<long double>(r.get_num().get_d()) / r.get_den().get_d();
  return std::exp(static_cast<long double>(lnum) - lden);
}

void require_delta(const Rational& delta, const char* what) {
  if (delta <= 0 || delta > 1) throw parameter_error(std::string(what) + ": delta must lie in (0, 1]");
}

std::int64_t count_in_set_divisible(const IntegerSet& a, std::int64_t d) {
  std::int64_t c = 0;
  const std::int64_t first = (a.window_lo() + d - 1) / d * d;
  for (std::int64_t m = first; m <= a.window_hi(); m += d) c += a.contains(m) ? 1 : 0;
  return c;
}

}  // namespace

double default_lcm_small_const(std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::pow(2.0 * std::pow(8.0, kk), -1.0 / (kk - 1.0));
}

double default_lcm_large_const(std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::max(std::pow(2.0, (kk + 1.0) / (kk - 1.0)), 8.0 * kk * kk);
}

std::pair<GcdInstance, GcdRecipe> build_gcd_extremal_delta1(std::size_t k, const std::vector<std::int64_t>& scales,
                                                            std::int64_t threshold) {
  if (scales.size() != k) throw usage_error("build_gcd_extremal_delta1: expected k scales");
  std::vector<IntegerSet> sets;
  for (auto x : scales) sets.push_back(multiples_in(x, threshold));
  GcdInstance inst(std::move(sets), threshold);
  return {std::move(inst), GcdRecipe{k, scales, threshold, Rational(1), threshold}};
}

std::pair<GcdInstance, GcdRecipe> build_gcd_extremal(std::size_t k, std::int64_t scale, std::int64_t threshold,
                                                     const Rational& delta) {
  if (k < 2) throw parameter_error("build_gcd_extremal: k must be >= 2");
  require_delta(delta, "build_gcd_extremal");
  if (threshold < 1 || threshold > scale)
    throw parameter_error("build_gcd_extremal: requires 1 <= D <= X");
  // D >= delta^{-1/(k-1)}  <=>  delta * D^{k-1} >= 1.
  ExactInt dpow;
  mpz_pow_ui(dpow.get_mpz_t(), to_exact(threshold).get_mpz_t(), static_cast<unsigned long>(k - 1));
  const Rational scaled = delta * Rational(dpow);
  if (scaled < 1)
    throw parameter_error(fmt::format("build_gcd_extremal: requires D >= delta^(-1/(k-1)), got D={} delta={}",
                                      threshold, to_string(delta)));
  ExactInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  // floor(delta^{1/(k-1)} D) = floor((floor(delta D^{k-1}))^{1/(k-1)}).
  const std::int64_t d0 = *to_int64(floor_root(fl, static_cast<unsigned>(k - 1)));
  std::vector<IntegerSet> sets(k, multiples_in(scale, d0));
  GcdInstance inst(std::move(sets), threshold);
  return {std::move(inst), GcdRecipe{k, std::vector<std::int64_t>(k, scale), threshold, delta, d0}};
}

std::pair<LcmInstance, LcmRecipe> build_lcm_extremal(std::size_t k, const std::vector<std::int64_t>& scales,
                                                     std::int64_t budget, const Rational& delta,
                                                     std::optional<double> c_const, std::optional<double> big_c_const) {
  if (k < 2) throw parameter_error("build_lcm_extremal: k must be >= 2");
  if (scales.size() != k) throw usage_error("build_lcm_extremal: expected k scales");
  require_delta(delta, "build_lcm_extremal");
  const double c = c_const.value_or(default_lcm_small_const(k));
  const double big_c = big_c_const.value_or(default_lcm_large_const(k));
  if (!(c > 0) || !(big_c > 0)) throw parameter_error("build_lcm_extremal: constants must be positive");
  const std::int64_t max_x = *std::max_element(scales.begin(), scales.end());
  const std::int64_t min_x = *std::min_element(scales.begin(), scales.end());
  if (budget < max_x) throw parameter_error("build_lcm_extremal: requires L >= max X_i");

  const long double inv = 1.0L / static_cast<long double>(k - 1);
  const std::int64_t m = snapped_ceil(c * std::pow(1.0L / as_long_double(delta), inv));
  long double log_ratio = -std::log(static_cast<long double>(budget));
  for (auto x : scales) log_ratio += std::log(static_cast<long double>(x));
  const std::int64_t q = snapped_ceil(big_c * std::exp(log_ratio * inv));

  const double log_need = static_cast<double>(m) * std::log2(2.0 * static_cast<double>(m));
  if (log_need > static_cast<double>(q))
    throw parameter_error(fmt::format("build_lcm_extremal: window constraint M*log2(2M) <= Q violated (M={}, Q={})", m, q));
  if (q > min_x)
    throw parameter_error(fmt::format("build_lcm_extremal: window constraint Q <= min X_i violated (Q={}, min X={})", q, min_x));

  std::vector<std::int64_t> primes;
  for (auto p : primes_in(std::max<std::int64_t>(q, 2), 2 * q)) {
    if (static_cast<std::int64_t>(primes.size()) == m) break;
    primes.push_back(p);
  }
  if (static_cast<std::int64_t>(primes.size()) < m)
    throw construction_error(fmt::format("build_lcm_extremal: only {} primes in [{}, {}], need M={}", primes.size(), q,
                                         2 * q, m));

  std::vector<IntegerSet> sets;
  std::vector<std::vector<std::int64_t>> blocks;
  for (auto x : scales) {
    std::vector<std::int64_t> elems;
    std::vector<std::int64_t> sizes;
    for (auto p : primes) {
      sizes.push_back(multiples_in_window(x, 2 * x, p));
      const std::int64_t first = (x + p - 1) / p * p;
      for (std::int64_t v = first; v <= 2 * x; v += p) elems.push_back(v);
    }
    sets.emplace_back(x, std::move(elems));
    blocks.push_back(std::move(sizes));
  }

  ExactInt lhs = ExactInt(1) << static_cast<unsigned>(k + 1);
  for (auto x : scales) lhs *= to_exact(x);
  ExactInt qpow;
  mpz_pow_ui(qpow.get_mpz_t(), to_exact(q).get_mpz_t(), static_cast<unsigned long>(k - 1));
  const bool budget_ok = lhs <= to_exact(budget) * qpow;

  LcmRecipe recipe{k,
                   scales,
                   budget,
                   delta,
                   c,
                   big_c,
                   m,
                   q,
                   std::move(primes),
                   std::move(blocks),
                   static_cast<double>(q) / log_need,
                   static_cast<double>(q) / (8.0 * static_cast<double>(k) * static_cast<double>(m) * static_cast<double>(m)),
                   budget_ok};
  LcmInstance inst(std::move(sets), budget);
  return {std::move(inst), std::move(recipe)};
}

TupleCensus good_tuple_census(const LcmRecipe& recipe, const LcmInstance& inst) {
  // Inclusion-exclusion over subsets of the primes; a subset contributes while its
  // product still has multiples in every window.
  std::int64_t limit = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : inst.sets()) limit = std::min(limit, s.window_hi());
  ExactInt good = 0;
  const auto& ps = recipe.primes;
  auto dfs = [&](auto&& self, std::size_t start, std::int64_t product, int depth) -> void {
    for (std::size_t j = start; j < ps.size(); ++j) {
      if (product > limit / ps[j]) break;
      const std::int64_t next = product * ps[j];
      ExactInt term = 1;
      for (const auto& s : inst.sets()) term *= static_cast<unsigned long>(count_in_set_divisible(s, next));
      if (depth % 2 == 0) good += term;
      else good -= term;
      if (term != 0) self(self, j + 1, next, depth + 1);
    }
  };
  dfs(dfs, 0, 1, 0);
  return TupleCensus::make(tuple_space_size(inst.sets()), std::move(good));
}

ExactInt good_tuple_lower_bound(const LcmRecipe& recipe, const LcmInstance& inst) {
  const auto& ps = recipe.primes;
  ExactInt bound = 0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    ExactInt term = 1;
    for (const auto& s : inst.sets()) term *= static_cast<unsigned long>(count_in_set_divisible(s, ps[j]));
    bound += term;
    for (std::size_t l = j + 1; l < ps.size(); ++l) {
      ExactInt pair = 1;
      for (const auto& s : inst.sets()) {
        const ExactInt prod = to_exact(ps[j]) * to_exact(ps[l]);
        pair *= prod > to_exact(s.window_hi()) ? 0ul
                                                : static_cast<unsigned long>(count_in_set_divisible(s, ps[j] * ps[l]));
      }
      bound -= pair;
    }
  }
  return bound;
}

TupleList sample_good_tuples(const LcmRecipe& recipe, const LcmInstance& inst, std::size_t count,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TupleList out(inst.k());
  if (recipe.primes.empty()) return out;
  std::vector<std::int64_t> tuple(inst.k());
  for (std::size_t n = 0; n < count; ++n) {
    const auto p = recipe.primes[rng() % recipe.primes.size()];
    bool ok = true;
    for (std::size_t i = 0; i < inst.k(); ++i) {
      const auto& s = inst.set(i);
      const std::int64_t first = (s.window_lo() + p - 1) / p;
      const std::int64_t last = s.window_hi() / p;
      if (last < first) {
        ok = false;
        break;
      }
      tuple[i] = p * (first + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(last - first + 1)));
    }
    if (ok) out.push_back(tuple);
  }
  return out;
}

bool good_tuple_lcm_bound_holds(const LcmRecipe& recipe, std::span<const std::int64_t> tuple) {
  ExactInt qpow;
  mpz_pow_ui(qpow.get_mpz_t(), to_exact(recipe.q).get_mpz_t(), static_cast<unsigned long>(recipe.k - 1));
  ExactInt rhs = ExactInt(1) << static_cast<unsigned>(recipe.k + 1);
  for (auto x : recipe.scales) rhs *= to_exact(x);
  return lcm_tuple(tuple) * qpow <= rhs;
}

}  // namespace gcdlab
