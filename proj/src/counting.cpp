#include "gcdlab/counting.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"

namespace gcdlab {

namespace {

void require_nonempty(std::span<const IntegerSet> sets, const char* what) {
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (sets[i].empty())
      throw usage_error(std::string(what) + ": set " + std::to_string(i + 1) + " is empty (delta undefined)");
}

void require_within_cap(std::span<const IntegerSet> sets, std::int64_t cap, const char* what) {
  const ExactInt size = tuple_space_size(sets);
  if (size > to_exact(cap))
    throw cap_exceeded(std::string(what) + ": " + size.get_str() + " tuples exceeds cap " + std::to_string(cap));
}

// Odometer over prod A_i in lexicographic order.
template <class Visit>
void for_each_tuple(std::span<const IntegerSet> sets, Visit&& visit) {
  const std::size_t k = sets.size();
  std::vector<std::size_t> idx(k, 0);
  std::vector<std::int64_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = sets[i][0];
  while (true) {
    visit(std::span<const std::int64_t>(cur));
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < sets[pos].size()) {
        cur[pos] = sets[pos][idx[pos]];
        break;
      }
      idx[pos] = 0;
      cur[pos] = sets[pos][0];
      if (pos == 0) return;
    }
  }
}

TupleCensus brute_census(std::span<const IntegerSet> sets, const TuplePredicate& qualifies, std::int64_t cap,
                         const char* what) {
  require_nonempty(sets, what);
  require_within_cap(sets, cap, what);
  std::int64_t hits = 0;
  for_each_tuple(sets, [&](std::span<const std::int64_t> t) { hits += qualifies(t) ? 1 : 0; });
  return TupleCensus::make(tuple_space_size(sets), to_exact(hits));
}

template <class Acc>
Acc from_int(std::int64_t v) {
  if constexpr (std::is_same_v<Acc, ExactInt>) return to_exact(v);
  else return static_cast<Acc>(v);
}

template <class Acc>
ExactInt to_exact_acc(const Acc& v) {
  if constexpr (std::is_same_v<Acc, ExactInt>) return v;
  else return to_exact(static_cast<__int128>(v));
}

// N_d = prod_i |A_{i,d}| for d in [lo, hi].
template <class Acc>
std::vector<Acc> divisible_counts(const std::vector<MultiplicityTable>& tables, std::int64_t lo, std::int64_t hi) {
  std::vector<Acc> n(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo + 1, 0)));
  for (std::int64_t d = lo; d <= hi; ++d) {
    Acc prod = from_int<Acc>(1);
    for (const auto& t : tables) {
      const auto c = t[d];
      if (c == 0) {
        prod = from_int<Acc>(0);
        break;
      }
      prod *= from_int<Acc>(c);
    }
    n[static_cast<std::size_t>(d - lo)] = prod;
  }
  return n;
}

struct GcdSpectrumPlan {
  std::int64_t lo;
  std::int64_t hi;
  std::vector<MultiplicityTable> tables;
  std::vector<std::int8_t> mu;
};

GcdSpectrumPlan plan_gcd_spectrum(const GcdInstance& inst) {
  require_nonempty(inst.sets(), "count_gcd_fast");
  // A common divisor is at most the smallest of the set maxima.
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : inst.sets()) hi = std::min(hi, s.max());
  GcdSpectrumPlan plan{inst.threshold(), hi, {}, {}};
  if (hi < plan.lo) return plan;
  plan.tables.reserve(inst.k());
  for (const auto& s : inst.sets()) plan.tables.push_back(multiplicity_table(s, hi));
  plan.mu = mobius_table(hi / plan.lo);
  return plan;
}

bool fits_int128_fast_path(const ExactInt& total, std::int64_t terms) {
  // Every partial sum is bounded by terms * total.
  return total * to_exact(terms + 1) < (ExactInt(1) << 125);
}

// Visits (g, M_g) for g in [lo, hi], M_g = sum_m mu(m) N_{gm}, over a slice of g.
template <class Acc, class Sink>
void gcd_spectrum_range(const GcdSpectrumPlan& plan, const std::vector<Acc>& n, std::int64_t g_begin,
                        std::int64_t g_end, Sink&& sink) {
  for (std::int64_t g = g_begin; g < g_end; ++g) {
    Acc m_g = from_int<Acc>(0);
    const std::int64_t m_max = plan.hi / g;
    for (std::int64_t m = 1; m <= m_max; ++m) {
      const int mu = plan.mu[static_cast<std::size_t>(m)];
      if (mu == 0) continue;
      const Acc& term = n[static_cast<std::size_t>(g * m - plan.lo)];
      if (mu > 0) m_g += term;
      else m_g -= term;
    }
    if (m_g < from_int<Acc>(0))
      throw std::logic_error("count_gcd_fast: negative exact-gcd count at g=" + std::to_string(g));
    sink(g, m_g);
  }
}

template <class Acc>
ExactInt gcd_qualifying(const GcdSpectrumPlan& plan, unsigned workers) {
  if (plan.hi < plan.lo) return 0;
  const auto n = divisible_counts<Acc>(plan.tables, plan.lo, plan.hi);
  workers = std::max(1u, workers);
  const std::int64_t span = plan.hi - plan.lo + 1;
  std::vector<Acc> partial(workers, from_int<Acc>(0));
  auto job = [&](unsigned w) {
    // Interleaved g slices balance the harmonic cost of small g.
    Acc acc = from_int<Acc>(0);
    for (std::int64_t g = plan.lo + w; g <= plan.hi; g += workers)
      gcd_spectrum_range<Acc>(plan, n, g, g + 1, [&](std::int64_t, const Acc& m) { acc += m; });
    partial[w] = acc;
  };
  if (workers == 1 || span < 1024) {
    for (unsigned w = 0; w < workers; ++w) job(w);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& t : pool) t.join();
  }
  ExactInt total = 0;
  for (const auto& p : partial) total += to_exact_acc(p);
  return total;
}

template <class V>
V v_from(std::int64_t x) {
  if constexpr (std::is_same_v<V, ExactInt>) return to_exact(x);
  else return static_cast<V>(x);
}

// F(l) for l <= L by sieving multiples, then in-place Moebius inversion over the
// divisor lattice (one difference pass per prime).
template <class V>
std::pair<std::vector<V>, std::vector<V>> build_lcm_lattice(const LcmInstance& inst) {
  const auto budget = inst.budget();
  const auto n = static_cast<std::size_t>(budget) + 1;
  std::vector<V> f(n, v_from<V>(0));
  std::vector<std::uint32_t> cnt(n, 0);
  for (std::size_t i = 0; i < inst.k(); ++i) {
    std::fill(cnt.begin(), cnt.end(), 0u);
    for (auto a : inst.set(i))
      for (std::int64_t l = a; l <= budget; l += a) ++cnt[static_cast<std::size_t>(l)];
    for (std::size_t l = 1; l < n; ++l) {
      if (i == 0) f[l] = v_from<V>(cnt[l]);
      else if (cnt[l] == 0) f[l] = v_from<V>(0);
      else if (f[l] != v_from<V>(0)) f[l] *= v_from<V>(cnt[l]);
    }
  }
  std::vector<V> g = f;
  for (auto p : primes_in(2, std::max<std::int64_t>(budget, 2))) {
    if (p > budget) break;
    for (std::int64_t j = budget / p; j >= 1; --j) g[static_cast<std::size_t>(j * p)] -= g[static_cast<std::size_t>(j)];
  }
  return {std::move(f), std::move(g)};
}

template <class V>
ExactInt sum_range(const std::vector<V>& v) {
  ExactInt s = 0;
  if constexpr (std::is_same_v<V, ExactInt>) {
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
  } else {
    __int128 acc = 0;
    for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
    s = to_exact(acc);
  }
  return s;
}

void check_lcm_budget(const LcmInstance& inst, std::int64_t budget_cap, const char* what) {
  if (inst.budget() > budget_cap)
    throw cap_exceeded(std::string(what) + ": budget L=" + std::to_string(inst.budget()) + " exceeds cap " +
                       std::to_string(budget_cap));
}

bool lcm_int64_safe(const LcmInstance& inst) {
  // |F|, |G| and every partial inversion are bounded by L * prod |A_i|.
  return tuple_space_size(inst.sets()) * to_exact(inst.budget() + 1) < (ExactInt(1) << 62);
}

}  // namespace

ExactInt tuple_space_size(std::span<const IntegerSet> sets) {
  ExactInt size = 1;
  for (const auto& s : sets) size *= static_cast<unsigned long>(s.size());
  return size;
}

GcdInstance::GcdInstance(std::vector<IntegerSet> sets, std::int64_t threshold)
    : sets_(std::move(sets)), threshold_(threshold) {
  if (sets_.size() < 2) throw parameter_error("GcdInstance: dimension k must be >= 2");
  if (threshold_ < 1) throw parameter_error("GcdInstance: threshold D must be >= 1");
  if (threshold_ > min_scale())
    throw parameter_error("GcdInstance: threshold D=" + std::to_string(threshold_) + " exceeds min X_i=" +
                          std::to_string(min_scale()) + " (requires D <= min(X_1, ..., X_k))");
}

std::int64_t GcdInstance::min_scale() const {
  std::int64_t m = sets_.front().scale();
  for (const auto& s : sets_) m = std::min(m, s.scale());
  return m;
}

std::vector<std::int64_t> GcdInstance::scales() const {
  std::vector<std::int64_t> out;
  for (const auto& s : sets_) out.push_back(s.scale());
  return out;
}

LcmInstance::LcmInstance(std::vector<IntegerSet> sets, std::int64_t budget) : sets_(std::move(sets)), budget_(budget) {
  if (sets_.size() < 2) throw parameter_error("LcmInstance: dimension k must be >= 2");
  std::int64_t max_scale = 0;
  for (const auto& s : sets_) max_scale = std::max(max_scale, s.scale());
  if (budget_ < max_scale)
    throw parameter_error("LcmInstance: budget L=" + std::to_string(budget_) + " is below max X_i=" +
                          std::to_string(max_scale) + " (requires L >= max(X_1, ..., X_k))");
}

std::vector<std::int64_t> LcmInstance::scales() const {
  std::vector<std::int64_t> out;
  for (const auto& s : sets_) out.push_back(s.scale());
  return out;
}

TupleCensus TupleCensus::make(ExactInt total, ExactInt qualifying) {
  if (qualifying < 0 || qualifying > total) throw std::logic_error("TupleCensus: qualifying count outside [0, total]");
  Rational delta = total == 0 ? Rational(0) : Rational(qualifying, total);
  delta.canonicalize();
  return TupleCensus{std::move(total), std::move(qualifying), std::move(delta)};
}

ExactInt LcmLattice::at(const Storage& s, std::int64_t l) {
  return std::visit(
      [l](const auto& v) -> ExactInt {
        if (l < 1 || l >= static_cast<std::int64_t>(v.size())) return 0;
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::vector<ExactInt>>) return v[static_cast<std::size_t>(l)];
        else return to_exact(v[static_cast<std::size_t>(l)]);
      },
      s);
}

TuplePredicate gcd_at_least(std::int64_t threshold) {
  return [threshold](std::span<const std::int64_t> t) { return gcd_tuple(t) >= threshold; };
}

TuplePredicate lcm_within(std::int64_t budget) {
  return [budget](std::span<const std::int64_t> t) { return lcm_at_most(t, budget); };
}

TuplePredicate swise_gcd_at_least(std::int64_t threshold, int s) {
  return [threshold, s](std::span<const std::int64_t> t) {
    const auto k = static_cast<int>(t.size());
    if (s < 2 || s > k) throw usage_error("swise predicate: need 2 <= s <= k");
    // Walk all s-subsets via a selection mask in lexicographic order.
    std::vector<char> pick(static_cast<std::size_t>(k), 0);
    std::fill(pick.begin(), pick.begin() + s, 1);
    std::vector<std::int64_t> sub(static_cast<std::size_t>(s));
    do {
      std::size_t j = 0;
      for (int i = 0; i < k; ++i)
        if (pick[static_cast<std::size_t>(i)]) sub[j++] = t[static_cast<std::size_t>(i)];
      if (gcd_tuple(sub) < threshold) return false;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return true;
  };
}

TupleCensus count_gcd_bruteforce(const GcdInstance& inst, std::int64_t cap) {
  return brute_census(inst.sets(), gcd_at_least(inst.threshold()), cap, "count_gcd_bruteforce");
}

TupleCensus count_gcd_fast(const GcdInstance& inst, CountOptions opts) {
  const auto plan = plan_gcd_spectrum(inst);
  const ExactInt total = tuple_space_size(inst.sets());
  ExactInt qualifying = fits_int128_fast_path(total, plan.hi) ? gcd_qualifying<__int128>(plan, opts.workers)
                                                              : gcd_qualifying<ExactInt>(plan, opts.workers);
  return TupleCensus::make(total, std::move(qualifying));
}

std::vector<ExactInt> exact_gcd_counts(const GcdInstance& inst) {
  const auto plan = plan_gcd_spectrum(inst);
  std::vector<ExactInt> out;
  if (plan.hi < plan.lo) return out;
  const auto n = divisible_counts<ExactInt>(plan.tables, plan.lo, plan.hi);
  gcd_spectrum_range<ExactInt>(plan, n, plan.lo, plan.hi + 1,
                               [&](std::int64_t, const ExactInt& m) { out.push_back(m); });
  return out;
}

TupleCensus count_lcm_bruteforce(const LcmInstance& inst, std::int64_t cap) {
  return brute_census(inst.sets(), lcm_within(inst.budget()), cap, "count_lcm_bruteforce");
}

std::pair<TupleCensus, LcmLattice> count_lcm_fast(const LcmInstance& inst, std::int64_t budget_cap) {
  require_nonempty(inst.sets(), "count_lcm_fast");
  check_lcm_budget(inst, budget_cap, "count_lcm_fast");
  const ExactInt total = tuple_space_size(inst.sets());
  auto finish = [&](auto f, auto g) {
    for (std::size_t l = 1; l < g.size(); ++l)
      if (g[l] < 0) throw std::logic_error("count_lcm_fast: negative exact-lcm count at l=" + std::to_string(l));
    ExactInt qualifying = sum_range(g);
    return std::pair{TupleCensus::make(total, std::move(qualifying)),
                     LcmLattice(inst.budget(), std::move(f), std::move(g))};
  };
  if (lcm_int64_safe(inst)) {
    auto [f, g] = build_lcm_lattice<std::int64_t>(inst);
    return finish(std::move(f), std::move(g));
  }
  auto [f, g] = build_lcm_lattice<ExactInt>(inst);
  return finish(std::move(f), std::move(g));
}

ExactInt multiplicity_weighted_sum(const LcmInstance& inst, std::int64_t budget_cap) {
  require_nonempty(inst.sets(), "multiplicity_weighted_sum");
  check_lcm_budget(inst, budget_cap, "multiplicity_weighted_sum");
  if (lcm_int64_safe(inst)) return sum_range(build_lcm_lattice<std::int64_t>(inst).first);
  return sum_range(build_lcm_lattice<ExactInt>(inst).first);
}

std::vector<DyadicBlock> dyadic_blocks(const GcdInstance& inst) {
  require_nonempty(inst.sets(), "dyadic_blocks");
  const std::int64_t d0 = inst.threshold();
  const std::int64_t top = 2 * inst.min_scale();
  std::vector<DyadicBlock> blocks;
  if (d0 > top) return blocks;
  std::int64_t j_max = 0;
  while ((d0 << (j_max + 1)) <= top) ++j_max;
  const std::int64_t d_end = (d0 << (j_max + 1)) - 1;
  std::vector<MultiplicityTable> tables;
  for (const auto& s : inst.sets()) tables.push_back(multiplicity_table(s, d_end));
  const auto n = divisible_counts<ExactInt>(tables, d0, d_end);
  for (std::int64_t j = 0; j <= j_max; ++j) {
    const std::int64_t lo = d0 << j;
    ExactInt s = 0;
    for (std::int64_t d = lo; d < 2 * lo; ++d) s += n[static_cast<std::size_t>(d - d0)];
    blocks.push_back(DyadicBlock{lo, std::move(s)});
  }
  return blocks;
}

TupleCensus count_swise_bruteforce(const GcdInstance& inst, int s, std::int64_t cap) {
  if (s < 2 || s > static_cast<int>(inst.k())) throw usage_error("count_swise_bruteforce: need 2 <= s <= k");
  return brute_census(inst.sets(), swise_gcd_at_least(inst.threshold(), s), cap, "count_swise_bruteforce");
}

TupleCensus project_census(const GcdInstance& inst, const TuplePredicate& qualifies,
                           std::span<const std::size_t> indices, std::int64_t cap) {
  if (indices.empty()) throw usage_error("project_census: index subset must be nonempty");
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end() || idx.back() >= inst.k())
    throw usage_error("project_census: indices must be distinct and < k");

  const auto omega = enumerate_tuples(inst.sets(), qualifies, cap);
  const std::size_t r = idx.size();
  std::vector<std::int64_t> proj;
  proj.reserve(omega.size() * r);
  for (std::size_t t = 0; t < omega.size(); ++t)
    for (auto i : idx) proj.push_back(omega[t][i]);

  // Sorted-unique pass over fixed-width rows.
  std::vector<std::size_t> order(omega.size());
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return std::span<const std::int64_t>(proj.data() + i * r, r); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::int64_t distinct = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || !std::ranges::equal(row(order[i]), row(order[i - 1]))) ++distinct;
  }

  ExactInt total = 1;
  for (auto i : idx) total *= static_cast<unsigned long>(inst.set(i).size());
  return TupleCensus::make(total, to_exact(distinct));
}

TupleList enumerate_tuples(std::span<const IntegerSet> sets, const TuplePredicate& qualifies, std::int64_t cap) {
  require_nonempty(sets, "enumerate_tuples");
  require_within_cap(sets, cap, "enumerate_tuples");
  TupleList out(sets.size());
  for_each_tuple(sets, [&](std::span<const std::int64_t> t) {
    if (qualifies(t)) out.push_back(t);
  });
  return out;
}

void for_each_gcd_qualifying(const GcdInstance& inst, const std::function<void(std::span<const std::int64_t>)>& visit,
                             std::int64_t cap) {
  require_nonempty(inst.sets(), "for_each_gcd_qualifying");
  require_within_cap(std::span<const IntegerSet>(inst.sets()).first(inst.k() - 1), cap, "for_each_gcd_qualifying");
  const std::size_t k = inst.k();
  const std::int64_t threshold = inst.threshold();
  std::vector<std::int64_t> cur(k);
  std::vector<std::int64_t> prefix_gcd(k + 1, 0);
  // Depth-first: prefix_gcd[i] is the gcd of cur[0..i).
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      visit(std::span<const std::int64_t>(cur));
      return;
    }
    for (auto a : inst.set(depth)) {
      const std::int64_t g = std::gcd(prefix_gcd[depth], a);
      if (g < threshold) continue;
      cur[depth] = a;
      prefix_gcd[depth + 1] = g;
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
}

}  // namespace gcdlab
