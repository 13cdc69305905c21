#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcdlab/counting.hpp"
#include "gcdlab/exact.hpp"

namespace gcdlab {

// A positive real carried by its natural logarithm; values span hundreds of decades.
struct LogReal {
  double log;
  double value() const;
};

inline constexpr double kLogTolerance = 1e-9;

struct BoundParams {
  double eps = 0.5;
  // log2 of the explicit constant; nullopt means 4k.
  std::optional<double> log2_c_k;
  std::int64_t p0 = 0;
  double implied_constant = 1.0;
};

enum class Verdict { holds, violated, not_applicable };
std::string to_string(Verdict v);

struct BoundReport {
  std::string bound;
  std::vector<std::pair<std::string, std::string>> params;
  ExactInt lhs;
  double log_lhs = 0;
  std::optional<double> log_rhs;
  double implied_constant = 1.0;
  std::optional<double> log_ratio;
  Verdict verdict = Verdict::not_applicable;
  std::vector<std::string> flags;
};

// Explicit main bound: C_k^{1+n_small} delta^{-(k+eps/(k-1))/(k-1)} prod X / D^k, C_k = 2^{4k}.
// Throws not_applicable for k < 3.
LogReal rhs_thm_main_explicit(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                              const Rational& delta, double eps, std::int64_t n_small_primes,
                              std::optional<double> log2_c_k = std::nullopt);
double main_explicit_delta_exponent(std::size_t k, double eps);

// delta^{-k/(k-1) - eps} prod X / D^k.
LogReal rhs_thm_main_simplified(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                                const Rational& delta, double eps);

// delta^{-k/(k-1)} prod X / D^{k - eps}.
LogReal rhs_thm_hybrid(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                       const Rational& delta, double eps);

// delta^{-k/(k-1)} L^{k/(k-1) + eps} / (prod X)^{1/(k-1)}.
LogReal rhs_thm_lcm(std::size_t k, std::span<const std::int64_t> scales, std::int64_t budget, const Rational& delta,
                    double eps);

// k = 2 only: delta^{-2-eps} L^2 / (X_1 X_2).
LogReal rhs_cor_lcm2(std::span<const std::int64_t> scales, std::int64_t budget, const Rational& delta, double eps);

// delta^{-1} prod X / D^{k-1}.
LogReal rhs_trivial_gcd(std::size_t k, std::span<const std::int64_t> scales, std::int64_t threshold,
                        const Rational& delta);
// Constant for which the trivial gcd bound is a true inequality: |A_{i,d}| <= 2X_i/d gives 2^k k/(k-1).
double trivial_gcd_explicit_constant(std::size_t k);

// delta^{-1} L (log L)^{2^k - 1}.
LogReal rhs_trivial_lcm(std::size_t k, std::int64_t budget, const Rational& delta);

// delta^{-k/(s-1) - k eps/s} prod X / D^k.
LogReal rhs_swise(std::size_t k, std::size_t s, std::span<const std::int64_t> scales, std::int64_t threshold,
                  const Rational& delta, double eps);

// Distinct primes p <= p0 dividing some element of some set.
std::int64_t small_prime_count(std::span<const IntegerSet> sets, std::int64_t p0);

// Smallest p0 with (p0+1)^{-s} + (p0+1)^{1-s}/(s-1) <= threshold, s = 1 + eps/(k+1).
std::int64_t default_p0(std::size_t k, double eps, double tail_threshold = 0.5);

// Independent tail estimate: direct sum over primes in (p0, limit] plus the integer tail beyond.
double prime_tail_estimate(std::size_t k, double eps, std::int64_t p0, std::int64_t limit = 10'000'000);

// holds iff lhs <= implied_constant * rhs (log-space, tolerance kLogTolerance). Nullopt rhs = not applicable.
BoundReport compare(std::string bound, const TupleCensus& census, std::optional<LogReal> rhs, const BoundParams& params,
                    std::vector<std::pair<std::string, std::string>> echo = {});

// Exponent-only comparison: the simplified main bound is smaller than the hybrid one iff delta * D > 1.
bool main_beats_hybrid(const Rational& delta, std::int64_t threshold);

std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace gcdlab
