#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gcdlab/errors.hpp"
#include "gcdlab/exact.hpp"
#include "gcdlab/set_model.hpp"

namespace gcdlab {

// Weights indexed by the integers of a dyadic window [scale, 2 scale]; zero off the given entries.
template <class Scalar>
class WeightedSequence {
 public:
  WeightedSequence(std::int64_t scale, const std::vector<std::pair<std::int64_t, Scalar>>& entries)
      : scale_(scale), values_(static_cast<std::size_t>(scale + 1), Scalar{}) {
    if (scale < 1) throw usage_error("WeightedSequence: scale must be >= 1");
    for (const auto& [n, v] : entries) {
      if (n < scale || n > 2 * scale)
        throw usage_error("WeightedSequence: index " + std::to_string(n) + " outside window");
      values_[static_cast<std::size_t>(n - scale)] = v;
    }
  }

  static WeightedSequence indicator(const IntegerSet& a) {
    std::vector<std::pair<std::int64_t, Scalar>> e;
    for (auto x : a) e.emplace_back(x, Scalar{1});
    return WeightedSequence(a.scale(), e);
  }

  std::int64_t scale() const { return scale_; }
  std::int64_t lo() const { return scale_; }
  std::int64_t hi() const { return 2 * scale_; }
  const Scalar& operator[](std::int64_t n) const { return values_[static_cast<std::size_t>(n - scale_)]; }

 private:
  std::int64_t scale_;
  std::vector<Scalar> values_;
};

namespace detail {

// Integer weights square-sum exactly; floating ones in double.
template <class Scalar>
struct SquareSum {
  using type = double;
  using inner = Scalar;
  static double norm(const Scalar& s) { return std::norm(std::complex<double>(s)); }
};
template <>
struct SquareSum<std::int64_t> {
  using type = ExactInt;
  using inner = __int128;
  static ExactInt norm(__int128 s) {
    const ExactInt v = to_exact(s);
    return v * v;
  }
};
template <class T>
struct SquareSum<std::complex<T>> {
  using type = double;
  using inner = std::complex<T>;
  static double norm(const std::complex<T>& s) { return std::norm(s); }
};

}  // namespace detail

template <class Scalar>
using square_sum_t = typename detail::SquareSum<Scalar>::type;

// sum_{D <= d <= 2D} |sum_{n in window, d | n} xi_n|^2.
template <class Scalar>
square_sum_t<Scalar> sieve_lhs(const WeightedSequence<Scalar>& xi, std::int64_t d_scale) {
  using T = detail::SquareSum<Scalar>;
  if (d_scale < 1) throw usage_error("sieve_lhs: D must be >= 1");
  square_sum_t<Scalar> total{};
  for (std::int64_t d = d_scale; d <= 2 * d_scale; ++d) {
    typename T::inner s{};
    for (std::int64_t n = (xi.lo() + d - 1) / d * d; n <= xi.hi(); n += d) s += static_cast<typename T::inner>(xi[n]);
    total += T::norm(s);
  }
  return total;
}

// sum_{D <= d <= 2D} |sum_{n in window, n | d} xi_n|^2.
template <class Scalar>
square_sum_t<Scalar> dual_sieve_lhs(const WeightedSequence<Scalar>& xi, std::int64_t d_scale) {
  using T = detail::SquareSum<Scalar>;
  if (d_scale < 1) throw usage_error("dual_sieve_lhs: D must be >= 1");
  std::vector<typename T::inner> sums(static_cast<std::size_t>(d_scale + 1), typename T::inner{});
  for (std::int64_t n = xi.lo(); n <= xi.hi(); ++n) {
    if (xi[n] == Scalar{}) continue;
    for (std::int64_t d = (d_scale + n - 1) / n * n; d <= 2 * d_scale; d += n)
      sums[static_cast<std::size_t>(d - d_scale)] += static_cast<typename T::inner>(xi[n]);
  }
  square_sum_t<Scalar> total{};
  for (const auto& s : sums) total += T::norm(s);
  return total;
}

// sum_n |xi_n|^2.
template <class Scalar>
square_sum_t<Scalar> mass(const WeightedSequence<Scalar>& xi) {
  using T = detail::SquareSum<Scalar>;
  square_sum_t<Scalar> total{};
  for (std::int64_t n = xi.lo(); n <= xi.hi(); ++n) total += T::norm(static_cast<typename T::inner>(xi[n]));
  return total;
}

// X D^{eps-1} + D.
double sieve_scale(double x, double d, double eps);
// D X^{eps-1} + X.
double dual_scale(double x, double d, double eps);
// D where the two terms of sieve_scale meet: X^{1/(2-eps)}.
double sieve_crossover(double x, double eps);

struct GcdFormExact {
  Rational form;
  // row[d - D] = C(d) = sum_{d2 in [D, 2D]} gcd(d, d2)/(d d2).
  std::vector<Rational> row;
};

// sum_{d1, d2} gcd(d1, d2)/(d1 d2) |eta_{d1}| |eta_{d2}| for integer eta on [D, 2D].
GcdFormExact gcd_quadratic_form(const WeightedSequence<std::int64_t>& eta);
// Same form for real weights, via gcd(a, b) = sum_{e | a, e | b} phi(e).
double gcd_quadratic_form(const WeightedSequence<double>& eta);
// C(d1) for d1 in [D, 2D], computed through the phi identity in binary64.
std::vector<double> gcd_form_row(std::int64_t d_scale);

struct BlockBounds {
  std::int64_t delta;
  std::int64_t linf;
  ExactInt l1;
  ExactInt l2;
  double linf_scale;  // X / Delta
  double l1_scale;    // |A| X^eta
  double l2_scale;    // X Delta^{eta-1} |A|
  bool l2_valid;      // X >= Delta^{2-eta}
};

// L-infinity, L1 and L2 of d -> |A_d| over the closed window [Delta, 2 Delta].
BlockBounds block_bounds(const IntegerSet& a, std::int64_t delta, double eta_exp);

enum class SieveForm { direct, dual };
std::string to_string(SieveForm f);

struct SieveReport {
  SieveForm form;
  std::int64_t x;
  std::int64_t d;
  double eps;
  std::size_t sequence;
  ExactInt lhs;
  ExactInt mass;
  double scale;
  double ratio;  // lhs / (scale * mass)
};

struct SieveSweepConfig {
  SieveForm form = SieveForm::direct;
  int log2_lo = 8;
  int log2_hi = 14;
  double eps = 0.5;
  std::size_t sequences = 20;
  double density = 0.5;
  std::uint64_t seed = 1;
};

struct SieveSweepPoint {
  std::int64_t y;
  double max_ratio;
  double mean_ratio;
};

struct SieveSweep {
  SieveSweepConfig config;
  std::vector<SieveReport> rows;
  std::vector<SieveSweepPoint> points;
  double max_ratio;
  // Mean over consecutive points of mean_ratio(2Y)/mean_ratio(Y).
  double mean_doubling;
};

// Direct form: xi on n ~ Y, d ~ floor(sqrt(Y)). Dual form: xi on n ~ floor(sqrt(Y)), d ~ Y.
SieveSweep sieve_sweep(const SieveSweepConfig& cfg, unsigned workers = 1);

std::string sieve_csv_header();
std::string sieve_csv_row(const SieveReport& r);

}  // namespace gcdlab
