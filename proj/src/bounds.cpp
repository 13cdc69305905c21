#include "gcdlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"

namespace gcdlab {

namespace {

double sum_log(std::span<const std::int64_t> xs) {
  double s = 0;
  for (auto x : xs) s += std::log(static_cast<double>(x));
  return s;
}

void require_scales(std::size_t k, std::span<const std::int64_t> scales, const char* what) {
  if (scales.size() != k) throw usage_error(std::string(what) + ": expected k scales");
  for (auto x : scales)
    if (x < 1) throw parameter_error(std::string(what) + ": scales must be >= 1");
}

double log_delta(const Rational& delta, const char* what) {
  if (delta <= 0 || delta > 1) throw parameter_error(std::string(what) + ": delta must lie in (0, 1]");
  return log_of(delta);
}

void require_eps(double eps, bool allow_zero, const char* what) {
  if (!(eps >= 0 && eps < 1) || (!allow_zero && eps == 0))
    throw parameter_error(std::string(what) + ": eps out of range");
}

double tail_exponent(std::size_t k, double eps) { return 1.0 + eps / static_cast<double>(k + 1); }

long double integer_tail(long double n, long double s) {
  return std::pow(n + 1, -s) + std::pow(n + 1, 1 - s) / (s - 1);
}

std::string real17(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

double LogReal::value() const { return std::exp(log); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "?";
}

double main_explicit_delta_exponent(std::size_t k, double eps) {
  const double kk = static_cast<double>(k);
  return -(kk + eps / (kk - 1)) / (kk - 1);
}

LogReal rhs_thm_main_explicit(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                              const Rational& delta, double eps, std::int64_t n_small_primes,
                              std::optional<double> log2_c_k) {
  if (k < 3) throw not_applicable("rhs_thm_main_explicit: requires k >= 3");
  require_scales(k, scales, "rhs_thm_main_explicit");
  require_eps(eps, false, "rhs_thm_main_explicit");
  if (n_small_primes < 0) throw usage_error("rhs_thm_main_explicit: negative small-prime count");
  const double lc = log2_c_k.value_or(4.0 * static_cast<double>(k)) * std::log(2.0);
  const double kk = static_cast<double>(k);
  return {lc * static_cast<double>(1 + n_small_primes) +
          main_explicit_delta_exponent(k, eps) * log_delta(delta, "rhs_thm_main_explicit") + sum_log(scales) -
          kk * std::log(static_cast<double>(threshold))};
}

LogReal rhs_thm_main_simplified(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                                const Rational& delta, double eps) {
  require_scales(k, scales, "rhs_thm_main_simplified");
  const double kk = static_cast<double>(k);
  return {-(kk / (kk - 1) + eps) * log_delta(delta, "rhs_thm_main_simplified") + sum_log(scales) -
          kk * std::log(static_cast<double>(threshold))};
}

LogReal rhs_thm_hybrid(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                       const Rational& delta, double eps) {
  if (k < 2) throw parameter_error("rhs_thm_hybrid: requires k >= 2");
  require_scales(k, scales, "rhs_thm_hybrid");
  const double kk = static_cast<double>(k);
  return {-(kk / (kk - 1)) * log_delta(delta, "rhs_thm_hybrid") + sum_log(scales) -
          (kk - eps) * std::log(static_cast<double>(threshold))};
}

LogReal rhs_thm_lcm(std::size_t k, std::span<const std::int64_t> scales, std::int64_t budget, const Rational& delta,
                    double eps) {
  if (k < 2) throw parameter_error("rhs_thm_lcm: requires k >= 2");
  require_scales(k, scales, "rhs_thm_lcm");
  if (budget < *std::max_element(scales.begin(), scales.end()))
    throw parameter_error("rhs_thm_lcm: requires L >= max X_i");
  const double kk = static_cast<double>(k);
  return {-(kk / (kk - 1)) * log_delta(delta, "rhs_thm_lcm") +
          (kk / (kk - 1) + eps) * std::log(static_cast<double>(budget)) - sum_log(scales) / (kk - 1)};
}

LogReal rhs_cor_lcm2(std::span<const std::int64_t> scales, std::int64_t budget, const Rational& delta, double eps) {
  if (scales.size() != 2) throw not_applicable("rhs_cor_lcm2: requires k = 2");
  require_scales(2, scales, "rhs_cor_lcm2");
  if (budget < std::max(scales[0], scales[1])) throw parameter_error("rhs_cor_lcm2: requires L >= max X_i");
  return {-(2 + eps) * log_delta(delta, "rhs_cor_lcm2") + 2 * std::log(static_cast<double>(budget)) -
          sum_log(scales)};
}

LogReal rhs_trivial_gcd(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                        const Rational& delta) {
  require_scales(k, scales, "rhs_trivial_gcd");
  return {-log_delta(delta, "rhs_trivial_gcd") + sum_log(scales) -
          static_cast<double>(k - 1) * std::log(static_cast<double>(threshold))};
}

double trivial_gcd_explicit_constant(std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::pow(2.0, kk) * kk / (kk - 1);
}

LogReal rhs_trivial_lcm(std::size_t k, std::int64_t budget, const Rational& delta) {
  if (budget < 1) throw parameter_error("rhs_trivial_lcm: requires L >= 1");
  const double ll = std::log(static_cast<double>(budget));
  const double power = std::ldexp(1.0, static_cast<int>(k)) - 1;
  // log L = 0 makes the bound 0; its log is -inf.
  const double lpow = ll > 0 ? power * std::log(ll) : -std::numeric_limits<double>::infinity();
  return {-log_delta(delta, "rhs_trivial_lcm") + ll + lpow};
}

LogReal rhs_swise(std::size_t k, std::size_t s, std::span<const std::int64_t> scales, std::int64_t threshold,
                  const Rational& delta, double eps) {
  if (s < 2 || s > k) throw parameter_error("rhs_swise: requires 2 <= s <= k");
  require_scales(k, scales, "rhs_swise");
  const double kk = static_cast<double>(k), ss = static_cast<double>(s);
  return {-(kk / (ss - 1) + kk * eps / ss) * log_delta(delta, "rhs_swise") + sum_log(scales) -
          kk * std::log(static_cast<double>(threshold))};
}

std::int64_t small_prime_count(std::span<const IntegerSet> sets, std::int64_t p0) {
  if (p0 < 2) throw usage_error("small_prime_count: requires p0 >= 2");
  std::int64_t top = 0;
  for (const auto& s : sets)
    if (!s.empty()) top = std::max(top, s.max());
  std::set<std::int64_t> found;
  auto note = [&](std::int64_t p) {
    if (p <= p0) found.insert(p);
  };
  if (top <= 50'000'000) {
    const SieveTable sieve(std::max<std::int64_t>(top, 2));
    for (const auto& s : sets)
      for (auto a : s)
        for (std::int64_t n = a; n > 1;) {
          const std::int64_t p = sieve.smallest_factor(n);
          note(p);
          while (n % p == 0) n /= p;
        }
  } else {
    for (const auto& s : sets)
      for (auto a : s)
        for (const auto& [p, e] : factorize(a)) note(p);
  }
  return static_cast<std::int64_t>(found.size());
}

std::int64_t default_p0(std::size_t k, double eps, double tail_threshold) {
  if (k < 2) throw parameter_error("default_p0: requires k >= 2");
  require_eps(eps, false, "default_p0");
  if (!(tail_threshold > 0 && tail_threshold < 1)) throw parameter_error("default_p0: tail threshold must lie in (0, 1)");
  const long double s = tail_exponent(k, eps);
  const std::int64_t hard_cap = std::int64_t{1} << 62;
  if (integer_tail(static_cast<long double>(hard_cap), s) > tail_threshold)
    throw parameter_error("default_p0: p0 exceeds 2^62 for these parameters");
  std::int64_t lo = 1, hi = hard_cap;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (integer_tail(static_cast<long double>(mid), s) <= tail_threshold) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

double prime_tail_estimate(std::size_t k, double eps, std::int64_t p0, std::int64_t limit) {
  const long double s = tail_exponent(k, eps);
  long double total = 0;
  if (p0 < limit)
    for (auto p : primes_in(std::max<std::int64_t>(p0 + 1, 2), limit)) total += std::pow(static_cast<long double>(p), -s);
  total += integer_tail(static_cast<long double>(std::max(p0, limit)), s);
  return static_cast<double>(total);
}

BoundReport compare(std::string bound, const TupleCensus& census, std::optional<LogReal> rhs,
                    const BoundParams& params, std::vector<std::pair<std::string, std::string>> echo) {
  BoundReport r;
  r.bound = std::move(bound);
  r.params = std::move(echo);
  r.lhs = census.total;
  r.log_lhs = log_of(census.total);
  r.implied_constant = params.implied_constant;
  if (rhs) {
    r.log_rhs = rhs->log;
    r.log_ratio = r.log_lhs - std::log(params.implied_constant) - rhs->log;
    r.verdict = *r.log_ratio <= kLogTolerance ? Verdict::holds : Verdict::violated;
  }
  return r;
}

bool main_beats_hybrid(const Rational& delta, std::int64_t threshold) { return delta * to_exact(threshold) > 1; }

std::string bound_csv_header() { return "bound,params,lhs,log_lhs,log_rhs,implied_constant,log_ratio,verdict,flags"; }

std::string bound_csv_row(const BoundReport& r) {
  std::string params;
  for (const auto& [k, v] : r.params) params += (params.empty() ? "" : "|") + k + "=" + v;
  std::string flags;
  for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.bound, params, to_string(r.lhs), real17(r.log_lhs),
                     r.log_rhs ? real17(*r.log_rhs) : "", real17(r.implied_constant),
                     r.log_ratio ? real17(*r.log_ratio) : "", to_string(r.verdict), flags);
}

}  // namespace gcdlab
