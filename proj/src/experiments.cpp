#include "gcdlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "gcdlab/errors.hpp"

namespace gcdlab {

namespace {

using Clock = std::chrono::steady_clock;

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw usage_error(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <class T>
void take_opt(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  take(j, key, v);
  dst = v;
}

// Scalar or list.
template <class T>
void take_list(const json& j, const char* key, std::vector<T>& dst) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  try {
    dst = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
  } catch (const json::exception&) {
    throw usage_error(std::string("config: field '") + key + "' has the wrong type");
  }
}

void take_delta_list(const json& j, std::vector<std::string>& dst) {
  if (!j.contains("delta")) return;
  dst.clear();
  auto one = [&](const json& v) {
    if (v.is_string()) dst.push_back(v.get<std::string>());
    else if (v.is_number()) dst.push_back(real17(v.get<double>()));
    else throw usage_error("config: delta entries must be strings or numbers");
  };
  if (j.at("delta").is_array())
    for (const auto& v : j.at("delta")) one(v);
  else
    one(j.at("delta"));
}

std::string join(const std::vector<std::int64_t>& xs, const char* sep = ";") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
  return s;
}

std::vector<std::int64_t> broadcast_scales(const ExperimentConfig& cfg) {
  if (cfg.scales.empty()) throw usage_error("config: X is required");
  if (cfg.scales.size() == 1) return std::vector<std::int64_t>(cfg.k, cfg.scales.front());
  if (cfg.scales.size() != cfg.k) throw usage_error("config: X must have one entry or k entries");
  return cfg.scales;
}

std::uint64_t require_seed(const ExperimentConfig& cfg, const char* what) {
  if (!cfg.seed) throw usage_error(std::string(what) + ": --seed is required for randomized runs");
  return *cfg.seed;
}

double implied_for(const ExperimentConfig& cfg, std::size_t k) {
  return cfg.implied_constant.value_or(std::ldexp(1.0, static_cast<int>(k)));
}

std::int64_t p0_for(const ExperimentConfig& cfg, std::size_t k, bool& defaulted) {
  defaulted = !cfg.p0.has_value();
  return cfg.p0 ? *cfg.p0 : default_p0(k, cfg.eps);
}

struct Context {
  const ExperimentConfig& cfg;
  RunReport& report;
  json results = json::array();
  json summary = json::object();
  std::map<std::string, std::size_t> table_index;
  std::map<std::pair<std::string, std::string>, std::size_t> plot_index;

  CsvTable& table(const std::string& name, const std::string& header) {
    auto it = table_index.find(name);
    if (it != table_index.end()) return report.tables[it->second];
    table_index[name] = report.tables.size();
    report.tables.push_back(CsvTable{name, header, {}});
    return report.tables.back();
  }
  void plot(const std::string& axis, const std::string& group, double x, double y) {
    const auto key = std::make_pair(axis, group);
    auto it = plot_index.find(key);
    if (it == plot_index.end()) {
      it = plot_index.emplace(key, report.plots.size()).first;
      report.plots.push_back(PlotSeries{axis, group, {}});
    }
    report.plots[it->second].points.emplace_back(x, y);
  }
};

struct NamedInstance {
  std::string label;
  AnyInstance inst;
  json recipe;
  std::optional<LcmRecipe> lcm_recipe;
  std::optional<GcdRecipe> gcd_recipe;
};

std::vector<NamedInstance> gather_instances(const ExperimentConfig& cfg) {
  std::vector<NamedInstance> out;
  if (cfg.instance_path) {
    out.push_back({*cfg.instance_path, load_instance(*cfg.instance_path), nullptr, {}, {}});
    return out;
  }
  const auto& c = cfg.construction;
  if (c == "random_gcd" || c == "random_lcm") {
    std::mt19937_64 rng(require_seed(cfg, "random instances"));
    for (std::size_t n = 0; n < cfg.random_count; ++n) {
      const std::string label = fmt::format("random#{}", n);
      if (c == "random_gcd")
        out.push_back({label, random_gcd_instance(rng, cfg.k, cfg.random_max_scale, cfg.random_max_size), nullptr, {}, {}});
      else
        out.push_back({label, random_lcm_instance(rng, cfg.k, cfg.random_max_scale, cfg.random_max_size), nullptr, {}, {}});
    }
    return out;
  }
  const auto xs = broadcast_scales(cfg);
  if (c == "gcd_extremal") {
    for (auto x : xs)
      if (x != xs.front()) throw usage_error("gcd_extremal: all X must be equal");
    for (const auto& ds : cfg.deltas)
      for (auto d : cfg.thresholds) {
        auto [inst, recipe] = build_gcd_extremal(cfg.k, xs.front(), d, parse_rational(ds));
        out.push_back({fmt::format("D={},delta={}", d, ds), std::move(inst), to_json(recipe), {}, recipe});
      }
    return out;
  }
  if (c == "gcd_multiples") {
    for (auto d : cfg.thresholds) {
      auto [inst, recipe] = build_gcd_extremal_delta1(cfg.k, xs, d);
      out.push_back({fmt::format("D={}", d), std::move(inst), to_json(recipe), {}, recipe});
    }
    return out;
  }
  if (c == "lcm_extremal") {
    if (cfg.budgets.empty()) throw usage_error("lcm_extremal: L is required");
    for (const auto& ds : cfg.deltas)
      for (auto l : cfg.budgets) {
        auto [inst, recipe] = build_lcm_extremal(cfg.k, xs, l, parse_rational(ds), cfg.c_small, cfg.c_large);
        out.push_back({fmt::format("L={},delta={}", l, ds), std::move(inst), to_json(recipe), recipe, {}});
      }
    return out;
  }
  throw usage_error("config: unknown construction '" + c + "'");
}

std::string census_row(std::size_t idx, const std::string& label, const std::string& kind, std::size_t k,
                       const std::vector<std::int64_t>& xs, std::int64_t param, const std::string& method,
                       const TupleCensus& c) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", idx, label, kind, k, join(xs), param, method,
                     to_string(c.total), to_string(c.qualifying), to_string(c.delta), real17(to_double(c.delta)));
}

constexpr const char* kCensusHeader = "index,label,kind,k,X,param,method,total,qualifying,delta,delta_real";

void run_census(Context& ctx) {
  const auto& cfg = ctx.cfg;
  auto& tab = ctx.table("census", kCensusHeader);
  const auto instances = gather_instances(cfg);
  const bool fast = cfg.counter == "fast" || cfg.counter == "both";
  const bool brute = cfg.counter == "brute" || cfg.counter == "both";
  if (!fast && !brute) throw usage_error("config: counter must be fast, brute or both");
  std::size_t mismatches = 0;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const auto& ni = instances[n];
    json point{{"index", n}, {"label", ni.label}};
    std::optional<TupleCensus> f, b;
    if (const auto* g = std::get_if<GcdInstance>(&ni.inst)) {
      point["instance"] = json{{"kind", "gcd"}, {"k", g->k()}, {"X", g->scales()}, {"D", g->threshold()}};
      if (fast) f = count_gcd_fast(*g, CountOptions{cfg.workers});
      if (brute) b = count_gcd_bruteforce(*g, cfg.bruteforce_cap);
      for (auto* c : {&f, &b})
        if (*c)
          tab.rows.push_back(census_row(n, ni.label, "gcd", g->k(), g->scales(), g->threshold(), c == &f ? "fast" : "brute", **c));
    } else {
      const auto& l = std::get<LcmInstance>(ni.inst);
      point["instance"] = json{{"kind", "lcm"}, {"k", l.k()}, {"X", l.scales()}, {"L", l.budget()}};
      if (fast) f = count_lcm_fast(l, cfg.lcm_budget_cap).first;
      if (brute) b = count_lcm_bruteforce(l, cfg.bruteforce_cap);
      for (auto* c : {&f, &b})
        if (*c)
          tab.rows.push_back(census_row(n, ni.label, "lcm", l.k(), l.scales(), l.budget(), c == &f ? "fast" : "brute", **c));
    }
    if (!ni.recipe.is_null()) point["recipe"] = ni.recipe;
    if (f) point["fast"] = to_json(*f);
    if (b) point["brute"] = to_json(*b);
    if (f && b && !(*f == *b)) ++mismatches;
    ctx.results.push_back(point);
  }
  ctx.summary["instances"] = instances.size();
  if (fast && brute) ctx.summary["fast_brute_mismatches"] = mismatches;
}

void run_construct(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto instances = gather_instances(cfg);
  std::size_t sample_failures = 0;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const auto& ni = instances[n];
    json point{{"index", n}, {"label", ni.label}, {"recipe", ni.recipe}};
    if (ni.gcd_recipe) {
      const auto& g = std::get<GcdInstance>(ni.inst);
      const auto& r = *ni.gcd_recipe;
      const ExactInt total = tuple_space_size(g.sets());
      const auto census = count_gcd_fast(g, CountOptions{cfg.workers});
      point["census"] = to_json(census);
      const double log2_prod = log_of(total) / std::log(2.0);
      ctx.table("construct_gcd", "index,k,X,D,delta,D0,set_size,total,qualifying,delta_hat,log2_prod")
          .rows.push_back(fmt::format("{},{},{},{},{},{},{},{},{},{},{}", n, r.k, join(r.scales), r.threshold,
                                      to_string(r.target_delta), r.d0, g.set(0).size(), to_string(census.total),
                                      to_string(census.qualifying), real17(to_double(census.delta)),
                                      real17(log2_prod)));
      ctx.plot("log2_D:log2_prod", "delta=" + to_string(r.target_delta), std::log2(static_cast<double>(r.threshold)),
               log2_prod);
    } else if (ni.lcm_recipe) {
      const auto& l = std::get<LcmInstance>(ni.inst);
      const auto& r = *ni.lcm_recipe;
      const auto good = good_tuple_census(r, l);
      const auto lower = good_tuple_lower_bound(r, l);
      const auto sample = sample_good_tuples(r, l, cfg.samples, cfg.seed.value_or(1) + n);
      std::size_t ok_budget = 0, ok_bound = 0;
      for (std::size_t t = 0; t < sample.size(); ++t) {
        ok_budget += lcm_at_most(sample[t], r.budget) ? 1 : 0;
        ok_bound += good_tuple_lcm_bound_holds(r, sample[t]) ? 1 : 0;
      }
      sample_failures += (sample.size() - ok_budget) + (sample.size() - ok_bound);
      const double log_prod = log_of(good.total);
      point["good"] = to_json(good);
      point["good_lower_bound"] = to_string(lower);
      point["sampled"] = sample.size();
      point["sampled_lcm_within_L"] = ok_budget;
      point["sampled_lcm_bound"] = ok_bound;
      ctx.table("construct_lcm",
                "index,k,X,L,delta,M,Q,primes,total,good,good_density,good_lower_bound,sampled,sampled_lcm_within_L,"
                "budget_ok,log_margin,overlap_margin,log_prod")
          .rows.push_back(fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", n, r.k, join(r.scales),
                                      r.budget, to_string(r.target_delta), r.m, r.q, join(r.primes),
                                      to_string(good.total), to_string(good.qualifying),
                                      real17(to_double(good.delta)), to_string(lower), sample.size(), ok_budget,
                                      r.budget_ok ? 1 : 0, real17(r.log_margin), real17(r.overlap_margin),
                                      real17(log_prod)));
      ctx.plot("log_L:log_prod", "delta=" + to_string(r.target_delta), std::log(static_cast<double>(r.budget)),
               log_prod);
    } else {
      throw usage_error("construct: needs a construction (gcd_extremal, gcd_multiples or lcm_extremal)");
    }
    const auto file = fmt::format("instance_{}.json", n);
    point["instance_file"] = file;
    ctx.report.instances.emplace_back(file, ni.gcd_recipe ? instance_to_json(*ni.gcd_recipe)
                                                          : instance_to_json(*ni.lcm_recipe));
    ctx.results.push_back(point);
  }
  for (const auto& p : ctx.report.plots)
    if (auto s = least_squares_slope(p.points)) ctx.summary["slope:" + p.axis + ":" + p.group] = real17(*s);
  ctx.summary["sample_failures"] = sample_failures;
}

std::vector<BoundReport> gcd_bound_reports(const ExperimentConfig& cfg, const GcdInstance& g, const TupleCensus& c) {
  const std::size_t k = g.k();
  const auto xs = g.scales();
  const auto d = g.threshold();
  std::vector<std::pair<std::string, std::string>> echo{{"k", std::to_string(k)}, {"X", join(xs)},
                                                        {"D", std::to_string(d)}, {"eps", real17(cfg.eps)}};
  std::vector<BoundReport> out;
  const bool empty = c.qualifying == 0;
  auto add = [&](std::string name, auto&& rhs_fn, double implied, std::vector<std::string> flags = {}) {
    BoundParams bp;
    bp.eps = cfg.eps;
    bp.implied_constant = implied;
    std::optional<LogReal> rhs;
    if (!empty) {
      try {
        rhs = rhs_fn();
      } catch (const not_applicable&) {
        flags.push_back("not_applicable");
      }
    } else {
      flags.push_back("empty_qualifying_set");
    }
    auto r = compare(std::move(name), c, rhs, bp, echo);
    r.flags = std::move(flags);
    out.push_back(std::move(r));
  };
  if (k >= 3) {
    bool defaulted = false;
    const auto p0 = p0_for(cfg, k, defaulted);
    const auto n_small = small_prime_count(g.sets(), p0);
    std::vector<std::string> flags{fmt::format("p0={}", p0), fmt::format("n_small_primes={}", n_small)};
    if (defaulted) flags.push_back("p0_ignores_implied_constant");
    add("main_explicit", [&] { return rhs_thm_main_explicit(k, xs, d, c.delta, cfg.eps, n_small); }, 1.0, flags);
  } else {
    add("main_explicit", [&]() -> LogReal { throw not_applicable("k < 3"); }, 1.0);
  }
  add("main_simplified", [&] { return rhs_thm_main_simplified(k, xs, d, c.delta, cfg.eps); }, implied_for(cfg, k));
  add("hybrid", [&] { return rhs_thm_hybrid(k, xs, d, c.delta, cfg.eps); }, implied_for(cfg, k),
      {main_beats_hybrid(c.delta, d) ? "main_beats_hybrid" : "hybrid_beats_main"});
  add("trivial_gcd", [&] { return rhs_trivial_gcd(k, xs, d, c.delta); }, trivial_gcd_explicit_constant(k));
  return out;
}

std::vector<BoundReport> lcm_bound_reports(const ExperimentConfig& cfg, const LcmInstance& l, const TupleCensus& c) {
  const std::size_t k = l.k();
  const auto xs = l.scales();
  std::vector<std::pair<std::string, std::string>> echo{
      {"k", std::to_string(k)}, {"X", join(xs)}, {"L", std::to_string(l.budget())}, {"eps", real17(cfg.eps)}};
  std::vector<BoundReport> out;
  const bool empty = c.qualifying == 0;
  auto add = [&](std::string name, auto&& rhs_fn, double implied) {
    BoundParams bp;
    bp.eps = cfg.eps;
    bp.implied_constant = implied;
    std::optional<LogReal> rhs;
    std::vector<std::string> flags;
    if (empty) flags.push_back("empty_qualifying_set");
    else {
      try {
        rhs = rhs_fn();
      } catch (const not_applicable&) {
        flags.push_back("not_applicable");
      }
    }
    auto r = compare(std::move(name), c, rhs, bp, echo);
    r.flags = std::move(flags);
    out.push_back(std::move(r));
  };
  add("lcm", [&] { return rhs_thm_lcm(k, xs, l.budget(), c.delta, cfg.eps); }, implied_for(cfg, k));
  add("lcm_two_dim", [&] { return rhs_cor_lcm2(xs, l.budget(), c.delta, cfg.eps); }, implied_for(cfg, k));
  add("trivial_lcm", [&] { return rhs_trivial_lcm(k, l.budget(), c.delta); }, implied_for(cfg, k));
  return out;
}

void run_verify(Context& ctx) {
  const auto& cfg = ctx.cfg;
  auto& tab = ctx.table("bounds", "index,label," + bound_csv_header());
  const auto instances = gather_instances(cfg);
  std::size_t violated = 0, chain_failures = 0;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const auto& ni = instances[n];
    json point{{"index", n}, {"label", ni.label}};
    std::vector<BoundReport> reports;
    if (const auto* g = std::get_if<GcdInstance>(&ni.inst)) {
      const auto c = count_gcd_fast(*g, CountOptions{cfg.workers});
      point["census"] = to_json(c);
      reports = gcd_bound_reports(cfg, *g, c);
      ExactInt blocks = 0;
      for (const auto& b : dyadic_blocks(*g)) blocks += b.value;
      const bool chain = c.delta * Rational(c.total) <= Rational(blocks);
      point["chain_dyadic_blocks"] = json{{"sum", to_string(blocks)}, {"holds", chain}};
      chain_failures += chain ? 0 : 1;
    } else {
      const auto& l = std::get<LcmInstance>(ni.inst);
      const auto c = count_lcm_fast(l, cfg.lcm_budget_cap).first;
      point["census"] = to_json(c);
      reports = lcm_bound_reports(cfg, l, c);
      const auto fsum = multiplicity_weighted_sum(l, cfg.lcm_budget_cap);
      const bool chain = c.delta * Rational(c.total) <= Rational(fsum);
      point["chain_multiplicity_sum"] = json{{"sum", to_string(fsum)}, {"holds", chain}};
      chain_failures += chain ? 0 : 1;
    }
    json arr = json::array();
    for (const auto& r : reports) {
      arr.push_back(to_json(r));
      tab.rows.push_back(fmt::format("{},{},{}", n, ni.label, bound_csv_row(r)));
      violated += r.verdict == Verdict::violated ? 1 : 0;
    }
    point["bounds"] = arr;
    ctx.results.push_back(point);
  }
  ctx.summary["violated"] = violated;
  ctx.summary["chain_failures"] = chain_failures;
  if (cfg.strict && (violated > 0 || chain_failures > 0)) ctx.report.exit_code = 4;
}

void run_sieve_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto seed = require_seed(cfg, "sieve-sweep");
  auto& tab = ctx.table("sieve", sieve_csv_header());
  for (const auto& name : cfg.sieve_forms) {
    SieveSweepConfig sc;
    if (name == "direct") sc.form = SieveForm::direct;
    else if (name == "dual") sc.form = SieveForm::dual;
    else throw usage_error("config: sieve form must be direct or dual");
    sc.log2_lo = cfg.log2_lo;
    sc.log2_hi = cfg.log2_hi;
    sc.eps = cfg.eps;
    sc.sequences = cfg.sequences;
    sc.density = cfg.density;
    sc.seed = seed;
    const auto sweep = sieve_sweep(sc, cfg.workers);
    for (const auto& r : sweep.rows) tab.rows.push_back(sieve_csv_row(r));
    json pts = json::array();
    for (const auto& p : sweep.points) {
      pts.push_back(json{{"Y", p.y}, {"max_ratio", real17(p.max_ratio)}, {"mean_ratio", real17(p.mean_ratio)}});
      ctx.plot("log2_Y:mean_ratio", name, std::log2(static_cast<double>(p.y)), p.mean_ratio);
    }
    ctx.results.push_back(json{{"form", name}, {"points", pts}});
    ctx.summary[name] = json{{"max_ratio", real17(sweep.max_ratio)}, {"mean_doubling", real17(sweep.mean_doubling)}};
  }
}

void run_concentrate(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto seed = require_seed(cfg, "concentrate");
  // Dominated-measure search.
  auto& trials_tab = ctx.table("dominated_trials", "k,seed,eps,lambda,c,accepted,violation");
  json search = json::array();
  for (auto k : cfg.search_dims) {
    const auto s = dominated_measure_search(k, cfg.trials, seed, cfg.workers);
    for (const auto& t : s.trials)
      trials_tab.rows.push_back(fmt::format("{},{},{},{},{},{},{}", k, t.seed, real17(t.eps), real17(t.lambda),
                                            real17(t.c), t.accepted ? 1 : 0, t.violation ? 1 : 0));
    search.push_back(json{{"k", k},
                          {"trials", s.trials.size()},
                          {"accepted", s.accepted},
                          {"violations", s.violations},
                          {"c_floor", real17(s.floor)},
                          {"min_accepted_c", s.min_accepted_c ? json(real17(*s.min_accepted_c)) : json(nullptr)}});
  }
  ctx.summary["dominated_search"] = search;

  // Localization of each instance at the configured primes.
  auto& loc_tab = ctx.table("localization", "index,p,lambda,center,outside_mass,outside_real,constraint_pass");
  const auto instances = gather_instances(cfg);
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const auto* g = std::get_if<GcdInstance>(&instances[n].inst);
    if (!g) throw usage_error("concentrate: localization needs a gcd instance");
    const auto params = q_of(g->k(), cfg.eps);
    bool defaulted = false;
    const auto p0 = p0_for(cfg, g->k(), defaulted);
    json point{{"index", n}, {"label", instances[n].label}, {"q", real17(params.q)}, {"eta", real17(params.eta)}};
    json locs = json::array();
    for (auto p : cfg.primes) {
      const auto mu = localize_at_prime_fast(*g, p, CountOptions{cfg.workers});
      const auto center = best_center(mu);
      const double lambda = std::pow(static_cast<double>(p), -1.0 / params.q);
      const auto check = measure_constraint_check(*g, mu, p, params, p0);
      const double outside = to_double(center.outside_mass);
      loc_tab.rows.push_back(fmt::format("{},{},{},{},{},{},{}", n, p, real17(lambda), center.m,
                                         to_string(center.outside_mass), real17(outside), check.pass ? 1 : 0));
      locs.push_back(json{{"p", p},
                          {"lambda", real17(lambda)},
                          {"center", center.m},
                          {"outside_mass", to_string(center.outside_mass)},
                          {"constraint_pass", check.pass},
                          {"measure", to_json(mu)}});
      if (outside > 0) ctx.plot("log_lambda:log_outside", instances[n].label, std::log(lambda), std::log(outside));
    }
    point["localization"] = locs;
    if (cfg.structure) {
      try {
        TupleList omega(g->k());
        for_each_gcd_qualifying(*g, [&](std::span<const std::int64_t> t) { omega.push_back(t); }, cfg.bruteforce_cap);
        const auto prof = structure_scan(*g, omega);
        point["structure"] = to_json(prof);
      } catch (const cap_exceeded& e) {
        point["structure"] = json{{"skipped", e.what()}};
      }
    }
    ctx.results.push_back(point);
  }
  for (const auto& p : ctx.report.plots)
    if (auto s = least_squares_slope(p.points)) ctx.summary["slope:" + p.axis + ":" + p.group] = real17(*s);
}

void run_swise(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto instances = gather_instances(cfg);
  auto& tab = ctx.table("swise", "index,s,subset,total,qualifying,projected,projected_total,projection_inequality");
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const auto* g = std::get_if<GcdInstance>(&instances[n].inst);
    if (!g) throw usage_error("swise: needs a gcd instance");
    const auto s = cfg.s;
    const auto census = count_swise_bruteforce(*g, s, cfg.bruteforce_cap);
    json point{{"index", n}, {"label", instances[n].label}, {"s", s}, {"census", to_json(census)}};
    json projs = json::array();
    std::vector<char> pick(g->k(), 0);
    std::fill(pick.begin(), pick.begin() + s, 1);
    const auto pred = swise_gcd_at_least(g->threshold(), s);
    do {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < pick.size(); ++i)
        if (pick[i]) idx.push_back(i);
      const auto proj = project_census(*g, pred, idx, cfg.bruteforce_cap);
      ExactInt rest = 1;
      for (std::size_t i = 0; i < pick.size(); ++i)
        if (!pick[i]) rest *= static_cast<unsigned long>(g->set(i).size());
      const bool ineq = proj.qualifying * rest >= census.qualifying;
      std::vector<std::int64_t> one_based;
      for (auto i : idx) one_based.push_back(static_cast<std::int64_t>(i + 1));
      tab.rows.push_back(fmt::format("{},{},{},{},{},{},{},{}", n, s, join(one_based), to_string(census.total),
                                     to_string(census.qualifying), to_string(proj.qualifying), to_string(proj.total),
                                     ineq ? 1 : 0));
      projs.push_back(json{{"subset", one_based}, {"census", to_json(proj)}, {"projection_inequality", ineq}});
    } while (std::prev_permutation(pick.begin(), pick.end()));
    point["projections"] = projs;
    if (census.qualifying > 0) {
      BoundParams bp;
      bp.eps = cfg.eps;
      bp.implied_constant = implied_for(cfg, g->k());
      const auto xs = g->scales();
      const auto r = compare("swise", census,
                             rhs_swise(g->k(), static_cast<std::size_t>(s), xs, g->threshold(), census.delta, cfg.eps),
                             bp, {{"s", std::to_string(s)}});
      point["bound"] = to_json(r);
      if (cfg.strict && r.verdict == Verdict::violated) ctx.report.exit_code = 4;
    }
    ctx.results.push_back(point);
  }
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string CsvTable::text() const {
  std::string s = header + "\n";
  for (const auto& r : rows) s += r + "\n";
  return s;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw usage_error("config: top level must be an object");
  take(j, "command", c.command);
  take_opt(j, "instance", c.instance_path);
  take(j, "construction", c.construction);
  take(j, "k", c.k);
  take_list(j, "X", c.scales);
  take_list(j, "D", c.thresholds);
  take_list(j, "L", c.budgets);
  take_delta_list(j, c.deltas);
  take_list(j, "p", c.primes);
  take_opt(j, "c_k", c.c_small);
  take_opt(j, "C_k", c.c_large);
  take_opt(j, "p0", c.p0);
  take(j, "eps", c.eps);
  take_opt(j, "implied_constant", c.implied_constant);
  take(j, "counter", c.counter);
  take(j, "s", c.s);
  take_list(j, "sieve_forms", c.sieve_forms);
  take(j, "log2_lo", c.log2_lo);
  take(j, "log2_hi", c.log2_hi);
  take(j, "sequences", c.sequences);
  take(j, "density", c.density);
  take_list(j, "search_dims", c.search_dims);
  take(j, "trials", c.trials);
  take(j, "structure", c.structure);
  take(j, "random_count", c.random_count);
  take(j, "random_max_scale", c.random_max_scale);
  take(j, "random_max_size", c.random_max_size);
  take(j, "samples", c.samples);
  take_opt(j, "seed", c.seed);
  take(j, "out", c.out_dir);
  take(j, "workers", c.workers);
  take(j, "strict", c.strict);
  take(j, "bruteforce_cap", c.bruteforce_cap);
  take(j, "lcm_budget_cap", c.lcm_budget_cap);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  // Output directory and worker count do not change results and stay out of the echo.
  return json{{"command", c.command},
              {"instance", opt(c.instance_path)},
              {"construction", c.construction},
              {"k", c.k},
              {"X", c.scales},
              {"D", c.thresholds},
              {"L", c.budgets},
              {"delta", c.deltas},
              {"p", c.primes},
              {"c_k", opt(c.c_small)},
              {"C_k", opt(c.c_large)},
              {"p0", opt(c.p0)},
              {"eps", c.eps},
              {"implied_constant", opt(c.implied_constant)},
              {"counter", c.counter},
              {"s", c.s},
              {"sieve_forms", c.sieve_forms},
              {"log2_lo", c.log2_lo},
              {"log2_hi", c.log2_hi},
              {"sequences", c.sequences},
              {"density", c.density},
              {"search_dims", c.search_dims},
              {"trials", c.trials},
              {"structure", c.structure},
              {"random_count", c.random_count},
              {"random_max_scale", c.random_max_scale},
              {"random_max_size", c.random_max_size},
              {"samples", c.samples},
              {"seed", opt(c.seed)},
              {"strict", c.strict},
              {"bruteforce_cap", c.bruteforce_cap},
              {"lcm_budget_cap", c.lcm_budget_cap}};
}

RunReport run(const ExperimentConfig& cfg) {
  RunReport report;
  Context ctx{cfg, report, json::array(), json::object(), {}, {}};
  const auto start = Clock::now();
  if (cfg.k < 2) throw parameter_error("config: k must be >= 2");
  if (cfg.command == "census") run_census(ctx);
  else if (cfg.command == "construct") run_construct(ctx);
  else if (cfg.command == "verify") run_verify(ctx);
  else if (cfg.command == "sieve-sweep") run_sieve_sweep(ctx);
  else if (cfg.command == "concentrate") run_concentrate(ctx);
  else if (cfg.command == "swise") run_swise(ctx);
  else throw usage_error("config: unknown command '" + cfg.command + "'");
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();

  report.doc = json{{"tool", "gcdlab"},
                    {"version", kToolVersion},
                    {"command", cfg.command},
                    {"config", config_to_json(cfg)},
                    {"results", ctx.results},
                    {"summary", ctx.summary},
                    {"exit_code", report.exit_code},
                    {"timing", json{{"wall_seconds", wall}}},
                    {"timestamp", iso_timestamp()}};
  report.doc["determinism_hash"] = determinism_hash(report);
  return report;
}

std::string determinism_hash(const RunReport& report) {
  json stable = report.doc;
  stable.erase("timing");
  stable.erase("timestamp");
  stable.erase("determinism_hash");
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  feed(stable.dump());
  for (const auto& t : report.tables) feed(t.name + "\n" + t.text());
  return fmt::format("fnv1a64:{:016x}", h);
}

std::optional<double> least_squares_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) mx += x, my += y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

std::string emit_plotdata(const RunReport& report, const std::string& axis) {
  std::string out = "group,x,y\n";
  std::vector<const PlotSeries*> found;
  for (const auto& p : report.plots)
    if (p.axis == axis) found.push_back(&p);
  if (found.empty()) throw usage_error("emit_plotdata: report has no axis '" + axis + "'");
  for (const auto* p : found)
    for (const auto& [x, y] : p->points) out += fmt::format("{},{},{}\n", p->group, real17(x), real17(y));
  for (const auto* p : found)
    if (auto s = least_squares_slope(p->points)) out += fmt::format("#slope,{},{}\n", p->group, real17(*s));
  return out;
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw usage_error("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.json", report.doc.dump(1) + "\n");
  for (const auto& t : report.tables) write(t.name + ".csv", t.text());
  for (const auto& [name, j] : report.instances) write(name, j.dump(1) + "\n");
  std::set<std::string> axes;
  for (const auto& p : report.plots) axes.insert(p.axis);
  for (const auto& a : axes) {
    std::string file = "plot_" + a + ".csv";
    std::replace(file.begin(), file.end(), ':', '_');
    write(file, emit_plotdata(report, a));
  }
}

namespace {

std::vector<IntegerSet> random_sets(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale,
                                    std::int64_t max_size) {
  std::vector<IntegerSet> sets;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t x = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_scale));
    const std::int64_t cap = std::min(max_size, x + 1);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap));
    std::vector<std::int64_t> window(static_cast<std::size_t>(x + 1));
    std::iota(window.begin(), window.end(), x);
    // Partial Fisher-Yates for the first n entries.
    for (std::int64_t j = 0; j < n; ++j) {
      const auto r = j + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x + 1 - j));
      std::swap(window[static_cast<std::size_t>(j)], window[static_cast<std::size_t>(r)]);
    }
    window.resize(static_cast<std::size_t>(n));
    sets.emplace_back(x, std::move(window));
  }
  return sets;
}

std::int64_t log_uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const double u = std::generate_canonical<double, 53>(rng);
  const auto v = static_cast<std::int64_t>(std::floor(std::exp(std::log(static_cast<double>(lo)) +
                                                               u * std::log(static_cast<double>(hi + 1) / lo))));
  return std::clamp(v, lo, hi);
}

}  // namespace

GcdInstance random_gcd_instance(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale, std::int64_t max_size) {
  auto sets = random_sets(rng, k, max_scale, max_size);
  std::int64_t min_x = sets.front().scale();
  for (const auto& s : sets) min_x = std::min(min_x, s.scale());
  const auto d = log_uniform(rng, 1, min_x);
  return GcdInstance(std::move(sets), d);
}

LcmInstance random_lcm_instance(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale, std::int64_t max_size) {
  auto sets = random_sets(rng, k, max_scale, max_size);
  std::int64_t max_x = 1;
  for (const auto& s : sets) max_x = std::max(max_x, s.scale());
  const auto l = log_uniform(rng, max_x, 4 * max_x * max_x);
  return LcmInstance(std::move(sets), l);
}

std::string default_out_dir() {
  if (const char* env = std::getenv("GCDLAB_OUT_DIR"); env && *env) return env;
  return "gcdlab-out";
}

}  // namespace gcdlab
