#include "gcdlab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "gcdlab/errors.hpp"
#include "gcdlab/set_model.hpp"

namespace gcdlab {

namespace {

CenterResult best_center_from(const FiniteMeasure& mu, std::optional<std::int64_t> m_floor) {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [t, w] : mu.weights())
    for (auto c : t.coords()) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  lo -= 1;
  hi += 1;
  if (m_floor) lo = std::max(lo, *m_floor);
  CenterResult best{lo, Rational(2)};
  for (std::int64_t m = lo; m <= hi; ++m) {
    Rational inside = 0;
    for (const auto& [t, w] : mu.weights())
      if (in_concentration_set(t, m)) inside += w;
    Rational outside = 1 - inside;
    if (outside < best.outside_mass) best = {m, outside};
  }
  return best;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

// Odometer step over prod [lo_i, hi_i]; false once every position wrapped.
bool advance(std::vector<std::int64_t>& t, const std::vector<std::pair<std::int64_t, std::int64_t>>& spans) {
  for (std::size_t pos = t.size(); pos-- > 0;) {
    if (++t[pos] <= spans[pos].second) return true;
    t[pos] = spans[pos].first;
  }
  return false;
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::size_t k, std::map<LatticePoint, Rational> weights) : k_(k) {
  Rational total = 0;
  for (auto& [t, w] : weights) {
    if (t.dim() != k) throw usage_error("FiniteMeasure: point dimension differs from k");
    if (w < 0) throw usage_error("FiniteMeasure: negative weight");
    if (w == 0) continue;
    total += w;
    weights_.emplace(t, w);
  }
  if (total != 1) throw usage_error("FiniteMeasure: weights sum to " + to_string(total) + ", not 1");
}

FiniteMeasure FiniteMeasure::from_counts(std::size_t k, const std::map<LatticePoint, ExactInt>& counts) {
  ExactInt total = 0;
  for (const auto& [t, c] : counts) total += c;
  if (total == 0) throw usage_error("FiniteMeasure: counts are all zero");
  std::map<LatticePoint, Rational> w;
  for (const auto& [t, c] : counts) {
    Rational r(c, total);
    r.canonicalize();
    w.emplace(t, r);
  }
  return FiniteMeasure(k, std::move(w));
}

Rational FiniteMeasure::operator()(const LatticePoint& t) const {
  auto it = weights_.find(t);
  return it == weights_.end() ? Rational(0) : it->second;
}

WeightSequence::WeightSequence(std::map<std::int64_t, double> values, double q_prime) : q_prime_(q_prime) {
  if (!(q_prime > 1)) throw usage_error("WeightSequence: exponent q' must exceed 1");
  double s = 0;
  for (const auto& [t, v] : values) {
    if (!(v >= 0) || !std::isfinite(v)) throw usage_error("WeightSequence: values must be finite and nonnegative");
    if (v == 0) continue;
    s += std::pow(v, q_prime);
    values_.emplace(t, v);
  }
  const double norm = std::pow(s, 1.0 / q_prime);
  if (!(std::fabs(norm - 1.0) <= kNormTolerance))
    throw usage_error(fmt::format("WeightSequence: l^q' norm is {:.17g}, not 1", norm));
}

WeightSequence WeightSequence::normalized(std::map<std::int64_t, double> raw, double q_prime) {
  if (!(q_prime > 1)) throw usage_error("WeightSequence: exponent q' must exceed 1");
  double s = 0;
  for (const auto& [t, v] : raw) s += std::pow(v, q_prime);
  if (!(s > 0)) throw usage_error("WeightSequence: cannot normalize the zero sequence");
  const double norm = std::pow(s, 1.0 / q_prime);
  for (auto& [t, v] : raw) v /= norm;
  return WeightSequence(std::move(raw), q_prime);
}

double WeightSequence::operator()(std::int64_t t) const {
  auto it = values_.find(t);
  return it == values_.end() ? 0.0 : it->second;
}

double default_lambda_k(std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::pow(2.0, -(kk - 1) / (kk + 1));
}

double eta_of(std::size_t k, double q) {
  const double kk = static_cast<double>(k);
  return std::min({kk + q - 2, kk * (q - 1), 2 * q - 1, q + 1});
}

ConcentrationParams q_of(std::size_t k, double eps) {
  if (k < 3) throw not_applicable("q_of: requires k >= 3");
  if (!(eps > 0 && eps < 1)) throw parameter_error("q_of: eps must lie in (0, 1)");
  const double kk = static_cast<double>(k);
  const double q = (kk + eps / (kk - 1)) / (kk - 1);
  const double eta = eta_of(k, q);
  if (q > 2 || q <= kk / (kk - 1)) throw std::logic_error("q_of: q outside (k/(k-1), 2]");
  if (std::fabs(eta - kk * (q - 1)) > 1e-15) throw std::logic_error("q_of: eta differs from k(q-1)");
  const double lk = default_lambda_k(k);
  return ConcentrationParams{lk, 1.0, q, q / (q - 1), lk, eta};
}

double c_floor(std::size_t k, double lambda_k) {
  if (!(lambda_k > 0 && lambda_k < 1)) throw usage_error("c_floor: lambda_k must lie in (0, 1)");
  return std::pow(1 - lambda_k, static_cast<double>(k) - 1) / static_cast<double>(k);
}

HypothesisCheck check_hypothesis(const FiniteMeasure& mu, std::span<const WeightSequence> xs, double lambda,
                                 double c) {
  if (xs.size() != mu.k()) throw usage_error("check_hypothesis: need one weight sequence per coordinate");
  if (!(lambda > 0 && lambda < 1)) throw usage_error("check_hypothesis: lambda must lie in (0, 1)");
  HypothesisCheck out{true, std::nullopt, std::nullopt, 0.0};
  for (const auto& [t, w] : mu.weights()) {
    double env = std::pow(lambda, static_cast<double>(gcd_norm(t)));
    for (std::size_t i = 0; i < xs.size(); ++i) env *= xs[i](t[i]);
    const double mass = to_double(w);
    const double need = env > 0 ? mass / env : std::numeric_limits<double>::infinity();
    if (!out.binding_point || need > out.required_c) {
      out.binding_point = t;
      out.required_c = need;
    }
    if (out.pass && need > c * (1 + kNormTolerance)) {
      out.pass = false;
      out.first_violation = t;
    }
  }
  return out;
}

bool in_concentration_set(const LatticePoint& t, std::int64_t m) {
  std::int64_t above = 0;
  for (auto c : t.coords()) {
    if (c == m) continue;
    if (c != m + 1) return false;
    ++above;
  }
  return above <= 1;
}

CenterResult best_center(const FiniteMeasure& mu) { return best_center_from(mu, std::nullopt); }

FiniteMeasure localize_at_prime(const GcdInstance& inst, const TupleList& omega, std::int64_t p) {
  if (omega.size() == 0) throw usage_error("localize_at_prime: qualifying set is empty");
  if (!is_prime(p)) throw usage_error("localize_at_prime: p must be prime");
  std::map<LatticePoint, ExactInt> counts;
  std::vector<std::int64_t> v(inst.k());
  for (std::size_t n = 0; n < omega.size(); ++n) {
    const auto t = omega[n];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = p_adic_valuation(t[i], p);
    counts[LatticePoint(v)] += 1;
  }
  return FiniteMeasure::from_counts(inst.k(), counts);
}

FiniteMeasure localize_at_prime_fast(const GcdInstance& inst, std::int64_t p, CountOptions opts) {
  if (!is_prime(p)) throw usage_error("localize_at_prime_fast: p must be prime");
  std::vector<std::vector<ValuationSlice>> slices;
  for (const auto& s : inst.sets()) slices.push_back(valuation_slices(s, p));
  const std::size_t k = inst.k();
  std::map<LatticePoint, ExactInt> counts;
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  for (const auto& sl : slices) spans.emplace_back(0, static_cast<std::int64_t>(sl.size()) - 1);
  std::vector<std::int64_t> idx(k, 0);
  std::vector<std::int64_t> v(k);
  do {
    std::vector<IntegerSet> cell;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& sl = slices[i][static_cast<std::size_t>(idx[i])];
      cell.emplace_back(inst.set(i).scale(), sl.members);
      v[i] = sl.t;
    }
    const auto census = count_gcd_fast(GcdInstance(std::move(cell), inst.threshold()), opts);
    if (census.qualifying > 0) counts[LatticePoint(v)] = census.qualifying;
  } while (advance(idx, spans));
  if (counts.empty()) throw usage_error("localize_at_prime_fast: qualifying set is empty");
  return FiniteMeasure::from_counts(k, counts);
}

HypothesisCheck measure_constraint_check(const GcdInstance& inst, const FiniteMeasure& mu_p, std::int64_t p,
                                         const ConcentrationParams& params, std::int64_t p0) {
  std::vector<WeightSequence> xs;
  for (const auto& s : inst.sets()) {
    std::map<std::int64_t, double> raw;
    for (const auto& sl : valuation_slices(s, p)) raw[sl.t] = std::pow(to_double(sl.alpha), 1.0 / params.q_prime);
    xs.push_back(WeightSequence::normalized(std::move(raw), params.q_prime));
  }
  const double lambda = std::pow(static_cast<double>(p), -1.0 / params.q);
  const double c = p <= p0 ? std::ldexp(1.0, -2 * static_cast<int>(inst.k())) : 1.0;
  return check_hypothesis(mu_p, xs, lambda, c);
}

bool purity_check(std::span<const std::int64_t> tuple, std::int64_t n) {
  if (n < 1) throw usage_error("purity_check: N must be positive");
  std::vector<std::int64_t> reduced;
  for (auto a : tuple) {
    if (a % n != 0) throw usage_error(fmt::format("purity_check: N={} does not divide {}", n, a));
    reduced.push_back(a / n);
  }
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    if (!is_squarefree(reduced[i])) return false;
    for (std::size_t j = i + 1; j < reduced.size(); ++j)
      if (std::gcd(reduced[i], reduced[j]) != 1) return false;
  }
  return true;
}

StructureProfile structure_scan(const GcdInstance& inst, const TupleList& omega) {
  StructureProfile out{1, {}, Rational(0), 0};
  if (omega.size() == 0) return out;
  const std::size_t k = inst.k();
  std::int64_t top = 2;
  for (const auto& s : inst.sets())
    if (!s.empty()) top = std::max(top, s.max());
  const SieveTable sieve(top);

  // (p, coordinate, exponent) triples of one tuple, grouped by p.
  std::vector<std::tuple<std::int64_t, std::size_t, std::int64_t>> facts;
  auto factor_tuple = [&](std::span<const std::int64_t> t) {
    facts.clear();
    for (std::size_t i = 0; i < k; ++i)
      for (std::int64_t n = t[i]; n > 1;) {
        const std::int64_t p = sieve.smallest_factor(n);
        std::int64_t e = 0;
        while (n % p == 0) n /= p, ++e;
        facts.emplace_back(p, i, e);
      }
    std::sort(facts.begin(), facts.end());
  };
  auto for_each_prime_vector = [&](auto&& fn) {
    std::vector<std::int64_t> v(k);
    for (std::size_t a = 0; a < facts.size();) {
      std::fill(v.begin(), v.end(), 0);
      const std::int64_t p = std::get<0>(facts[a]);
      std::size_t b = a;
      for (; b < facts.size() && std::get<0>(facts[b]) == p; ++b) v[std::get<1>(facts[b])] = std::get<2>(facts[b]);
      fn(p, LatticePoint(v));
      a = b;
    }
  };

  std::unordered_map<std::int64_t, std::map<LatticePoint, ExactInt>> per_prime;
  for (std::size_t n = 0; n < omega.size(); ++n) {
    factor_tuple(omega[n]);
    for_each_prime_vector([&](std::int64_t p, LatticePoint v) { per_prime[p][std::move(v)] += 1; });
  }

  const ExactInt total = static_cast<unsigned long>(omega.size());
  std::unordered_map<std::int64_t, std::int64_t> centers;
  std::vector<std::int64_t> primes;
  for (auto& [p, counts] : per_prime) {
    ExactInt seen = 0;
    for (const auto& [t, c] : counts) seen += c;
    if (seen < total) counts[LatticePoint(std::vector<std::int64_t>(k, 0))] += total - seen;
    const auto center = best_center_from(FiniteMeasure::from_counts(k, counts), std::int64_t{0});
    centers[p] = center.m;
    if (center.m != 0) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  out.primes_scanned = static_cast<std::int64_t>(per_prime.size());
  for (auto p : primes) {
    const auto m = centers[p];
    out.centers.emplace_back(p, m);
    ExactInt pk;
    mpz_pow_ui(pk.get_mpz_t(), to_exact(p).get_mpz_t(), static_cast<unsigned long>(m));
    out.n *= pk;
  }

  std::int64_t pure = 0;
  for (std::size_t n = 0; n < omega.size(); ++n) {
    factor_tuple(omega[n]);
    bool ok = true;
    std::size_t nonzero_seen = 0;
    for_each_prime_vector([&](std::int64_t p, const LatticePoint& v) {
      const auto m = centers[p];
      if (m != 0) ++nonzero_seen;
      if (!in_concentration_set(v, m)) ok = false;
    });
    if (ok && nonzero_seen == primes.size()) ++pure;
  }
  out.pure_fraction = ratio(to_exact(pure), total);
  out.pure_fraction.canonicalize();
  return out;
}

std::optional<FiniteMeasure> sample_dominated_measure(std::size_t k, std::uint64_t seed, DominatedTrial& trial,
                                                      std::vector<WeightSequence>* xs_out) {
  if (k < 3) throw not_applicable("sample_dominated_measure: requires k >= 3");
  std::mt19937_64 rng(seed);
  trial = DominatedTrial{seed, 0, 0, 0, false, false};
  trial.eps = uniform(rng, 0.05, 0.95);
  const auto params = q_of(k, trial.eps);
  const double floor = c_floor(k, params.lambda_k);
  trial.lambda = params.lambda_k * uniform(rng, 0.05, 1.0);
  trial.c = uniform(rng, floor / 2, 1.0);

  constexpr std::int64_t kRadius = 6;
  std::vector<WeightSequence> xs;
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  const std::int64_t base = uniform_int(rng, -kRadius, kRadius);
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t lo = std::clamp<std::int64_t>(base + uniform_int(rng, -1, 1), -kRadius, kRadius);
    const std::int64_t hi = std::min<std::int64_t>(lo + uniform_int(rng, 0, 4), kRadius);
    std::map<std::int64_t, double> raw;
    for (std::int64_t t = lo; t <= hi; ++t) raw[t] = uniform(rng, 0.05, 1.0);
    xs.push_back(WeightSequence::normalized(std::move(raw), params.q_prime));
    spans.emplace_back(lo, hi);
  }

  // Envelope b(t) times a random shape u(t), scaled so the largest u touches the envelope.
  std::vector<std::pair<LatticePoint, double>> raw;
  std::vector<std::int64_t> t(k);
  for (std::size_t i = 0; i < k; ++i) t[i] = spans[i].first;
  double u_max = 0;
  do {
    double env = trial.c * std::pow(trial.lambda, static_cast<double>(gcd_norm(t)));
    for (std::size_t i = 0; i < k; ++i) env *= xs[i](t[i]);
    const double u = uniform(rng, 0.5, 1.0);
    u_max = std::max(u_max, u);
    raw.emplace_back(LatticePoint(t), env * u);
  } while (advance(t, spans));
  Rational mass_total = 0;
  std::vector<Rational> scaled;
  for (const auto& [pt, w] : raw) {
    scaled.emplace_back(w / u_max);
    mass_total += scaled.back();
  }
  if (xs_out) *xs_out = xs;
  if (mass_total < 1) return std::nullopt;
  std::map<LatticePoint, Rational> weights;
  for (std::size_t n = 0; n < raw.size(); ++n) weights.emplace(raw[n].first, scaled[n] / mass_total);
  FiniteMeasure mu(k, std::move(weights));
  if (!check_hypothesis(mu, xs, trial.lambda, trial.c).pass) return std::nullopt;
  trial.accepted = true;
  trial.violation = trial.c < floor;
  return mu;
}

DominatedSearch dominated_measure_search(std::size_t k, std::size_t trials, std::uint64_t seed, unsigned workers) {
  DominatedSearch out{k, c_floor(k, default_lambda_k(k)), std::vector<DominatedTrial>(trials), 0, 0, std::nullopt};
  auto job = [&](unsigned w) {
    for (std::size_t i = w; i < trials; i += workers) sample_dominated_measure(k, seed + i, out.trials[i]);
  };
  workers = std::max(1u, workers);
  if (workers == 1) job(0);
  else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& t : out.trials) {
    if (!t.accepted) continue;
    ++out.accepted;
    if (t.violation) ++out.violations;
    out.min_accepted_c = out.min_accepted_c ? std::min(*out.min_accepted_c, t.c) : t.c;
  }
  return out;
}

}  // namespace gcdlab
