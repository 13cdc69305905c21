#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gcdlab/counting.hpp"
#include "gcdlab/exact.hpp"
#include "gcdlab/kernel.hpp"

namespace gcdlab {

// Finitely supported probability measure on Z^k with exact weights summing to 1.
class FiniteMeasure {
 public:
  FiniteMeasure(std::size_t k, std::map<LatticePoint, Rational> weights);

  // Normalizes nonnegative counts into a measure.
  static FiniteMeasure from_counts(std::size_t k, const std::map<LatticePoint, ExactInt>& counts);

  std::size_t k() const { return k_; }
  const std::map<LatticePoint, Rational>& weights() const { return weights_; }
  Rational operator()(const LatticePoint& t) const;

  friend bool operator==(const FiniteMeasure&, const FiniteMeasure&) = default;

 private:
  std::size_t k_;
  std::map<LatticePoint, Rational> weights_;
};

inline constexpr double kNormTolerance = 1e-12;

// Nonnegative finitely supported sequence with unit l^{q'} norm.
class WeightSequence {
 public:
  WeightSequence(std::map<std::int64_t, double> values, double q_prime);
  // Rescales arbitrary nonnegative values to unit norm.
  static WeightSequence normalized(std::map<std::int64_t, double> raw, double q_prime);

  double operator()(std::int64_t t) const;
  double q_prime() const { return q_prime_; }
  const std::map<std::int64_t, double>& values() const { return values_; }

 private:
  std::map<std::int64_t, double> values_;
  double q_prime_;
};

struct ConcentrationParams {
  double lambda;
  double c;
  double q;
  double q_prime;
  double lambda_k;
  double eta;
};

double default_lambda_k(std::size_t k);
double eta_of(std::size_t k, double q);
// q = (k + eps/(k-1))/(k-1); lambda defaults to lambda(k), c to 1.
ConcentrationParams q_of(std::size_t k, double eps);

// (1/k)(1 - lambda_k)^{k-1}.
double c_floor(std::size_t k, double lambda_k);

struct HypothesisCheck {
  bool pass;
  std::optional<LatticePoint> first_violation;
  // Support point needing the largest c, and that c (infinite when an x factor vanishes).
  std::optional<LatticePoint> binding_point;
  double required_c;
};

// mu(t) <= c lambda^{||t||} prod_i x_i(t_i) on the support of mu.
HypothesisCheck check_hypothesis(const FiniteMeasure& mu, std::span<const WeightSequence> xs, double lambda, double c);

bool in_concentration_set(const LatticePoint& t, std::int64_t m);

struct CenterResult {
  std::int64_t m;
  Rational outside_mass;
};

// m minimizing the mass outside S_m, ties to the smallest m.
CenterResult best_center(const FiniteMeasure& mu);

// Distribution of p-adic valuation vectors over the given qualifying tuples.
FiniteMeasure localize_at_prime(const GcdInstance& inst, const TupleList& omega, std::int64_t p);

// Same measure, counting each valuation cell with the fast gcd counter.
FiniteMeasure localize_at_prime_fast(const GcdInstance& inst, std::int64_t p, CountOptions opts = {});

// Checks mu_p against c = 2^{-2k [p <= p0]}, lambda = p^{-1/q}, x_i(t) = alpha_{i,t}^{1/q'}.
HypothesisCheck measure_constraint_check(const GcdInstance& inst, const FiniteMeasure& mu_p, std::int64_t p,
                                         const ConcentrationParams& params, std::int64_t p0);

// a_i / N squarefree and pairwise coprime. Throws usage_error when N does not divide every a_i.
bool purity_check(std::span<const std::int64_t> tuple, std::int64_t n);

struct StructureProfile {
  ExactInt n;
  // (p, m_p) for every prime with m_p != 0.
  std::vector<std::pair<std::int64_t, std::int64_t>> centers;
  Rational pure_fraction;
  std::int64_t primes_scanned = 0;
};

StructureProfile structure_scan(const GcdInstance& inst, const TupleList& omega);

struct DominatedTrial {
  std::uint64_t seed;
  double lambda;
  double c;
  double eps;
  bool accepted;
  bool violation;
};

struct DominatedSearch {
  std::size_t k;
  double floor;
  std::vector<DominatedTrial> trials;
  std::size_t accepted = 0;
  std::size_t violations = 0;
  std::optional<double> min_accepted_c;
};

// Samples xs, lambda <= lambda(k), c in [floor/2, 1], then the largest measure under the
// envelope c lambda^{||t||} prod x on ||t||_inf <= 6 with random shape; rejects total mass < 1.
std::optional<FiniteMeasure> sample_dominated_measure(std::size_t k, std::uint64_t seed, DominatedTrial& trial,
                                                      std::vector<WeightSequence>* xs_out = nullptr);

DominatedSearch dominated_measure_search(std::size_t k, std::size_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace gcdlab
