// Command-line driver: gcdlab <command> [options].

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcdlab/errors.hpp"
#include "gcdlab/experiments.hpp"

namespace {

using gcdlab::ExperimentConfig;
using gcdlab::json;

struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  bool strict = false;

  std::optional<std::string> instance;
  std::optional<std::string> construction;
  std::optional<std::size_t> k;
  std::vector<std::int64_t> scales, thresholds, budgets, primes;
  std::vector<std::string> deltas, forms;
  std::vector<std::size_t> dims;
  std::optional<double> eps, c_small, c_large, implied, density;
  std::optional<std::int64_t> p0, brute_cap, lcm_cap;
  std::optional<std::string> counter;
  std::optional<int> s, log2_lo, log2_hi;
  std::optional<std::size_t> sequences, trials, random_count, samples;
  std::optional<std::int64_t> random_max_scale, random_max_size;
  bool no_structure = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  app->add_option("--seed", f.seed, "RNG seed (required for randomized runs)");
  app->add_option("--workers", f.workers, "worker threads");
  app->add_option("--out", f.out, "output directory (default $GCDLAB_OUT_DIR or ./gcdlab-out)");
  app->add_flag("--strict", f.strict, "exit 4 when any bound verdict is violated");
}

void add_instance(CLI::App* app, Flags& f) {
  app->add_option("--instance", f.instance, "instance JSON file");
  app->add_option("--construction", f.construction,
                  "gcd_extremal | gcd_multiples | lcm_extremal | random_gcd | random_lcm");
  app->add_option("-k,--k", f.k, "dimension");
  app->add_option("-X,--X", f.scales, "scale(s) X_i")->delimiter(',');
  app->add_option("-D,--D", f.thresholds, "gcd threshold(s)")->delimiter(',');
  app->add_option("-L,--L", f.budgets, "lcm budget(s)")->delimiter(',');
  app->add_option("--delta", f.deltas, "target proportion(s), e.g. 1/100")->delimiter(',');
  app->add_option("--eps", f.eps, "epsilon");
  app->add_option("--c-k", f.c_small, "lcm construction constant c_k");
  app->add_option("--C-k", f.c_large, "lcm construction constant C_k");
  app->add_option("--p0", f.p0, "small-prime cutoff");
  app->add_option("--implied-constant", f.implied, "constant for bounds without an explicit one (default 2^k)");
  app->add_option("--random-count", f.random_count, "number of random instances");
  app->add_option("--random-max-scale", f.random_max_scale, "largest X_i of random instances");
  app->add_option("--random-max-size", f.random_max_size, "largest |A_i| of random instances");
  app->add_option("--bruteforce-cap", f.brute_cap, "tuple cap for exhaustive enumeration");
  app->add_option("--lcm-budget-cap", f.lcm_cap, "cap on L for the lattice counter");
}

void apply(const Flags& f, ExperimentConfig& c) {
  if (f.seed) c.seed = f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.out) c.out_dir = *f.out;
  if (f.strict) c.strict = true;
  if (f.instance) c.instance_path = f.instance;
  if (f.construction) c.construction = *f.construction;
  if (f.k) c.k = *f.k;
  if (!f.scales.empty()) c.scales = f.scales;
  if (!f.thresholds.empty()) c.thresholds = f.thresholds;
  if (!f.budgets.empty()) c.budgets = f.budgets;
  if (!f.deltas.empty()) c.deltas = f.deltas;
  if (!f.primes.empty()) c.primes = f.primes;
  if (!f.forms.empty()) c.sieve_forms = f.forms;
  if (!f.dims.empty()) c.search_dims = f.dims;
  if (f.eps) c.eps = *f.eps;
  if (f.c_small) c.c_small = f.c_small;
  if (f.c_large) c.c_large = f.c_large;
  if (f.implied) c.implied_constant = f.implied;
  if (f.density) c.density = *f.density;
  if (f.p0) c.p0 = f.p0;
  if (f.brute_cap) c.bruteforce_cap = *f.brute_cap;
  if (f.lcm_cap) c.lcm_budget_cap = *f.lcm_cap;
  if (f.counter) c.counter = *f.counter;
  if (f.s) c.s = *f.s;
  if (f.log2_lo) c.log2_lo = *f.log2_lo;
  if (f.log2_hi) c.log2_hi = *f.log2_hi;
  if (f.sequences) c.sequences = *f.sequences;
  if (f.trials) c.trials = *f.trials;
  if (f.random_count) c.random_count = *f.random_count;
  if (f.random_max_scale) c.random_max_scale = *f.random_max_scale;
  if (f.random_max_size) c.random_max_size = *f.random_max_size;
  if (f.samples) c.samples = *f.samples;
  if (f.no_structure) c.structure = false;
}

int fail(const std::string& type, const std::string& message, int code) {
  std::cerr << json{{"error", json{{"type", type}, {"message", message}}}, {"exit_code", code}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact census and bound-verification toolkit for gcd/lcm tuple problems"};
  app.require_subcommand(1);
  Flags f;

  auto* construct = app.add_subcommand("construct", "build extremal instances and measure them");
  auto* census = app.add_subcommand("census", "count qualifying tuples");
  auto* verify = app.add_subcommand("verify", "compare censuses against every applicable bound");
  auto* sieve = app.add_subcommand("sieve-sweep", "sweep the divisor-structured quadratic forms");
  auto* concentrate = app.add_subcommand("concentrate", "dominated-measure search and p-adic localization");
  auto* swise = app.add_subcommand("swise", "s-wise gcd census with projections");
  for (auto* sc : {construct, census, verify, sieve, concentrate, swise}) add_common(sc, f);
  for (auto* sc : {construct, census, verify, concentrate, swise}) add_instance(sc, f);
  construct->add_option("--samples", f.samples, "sampled good tuples per lcm instance");
  census->add_option("--counter", f.counter, "fast | brute | both");
  sieve->add_option("--eps", f.eps, "epsilon");
  sieve->add_option("--forms", f.forms, "direct and/or dual")->delimiter(',');
  sieve->add_option("--log2-lo", f.log2_lo, "smallest log2 scale");
  sieve->add_option("--log2-hi", f.log2_hi, "largest log2 scale");
  sieve->add_option("--sequences", f.sequences, "random sequences per scale");
  sieve->add_option("--density", f.density, "probability of a 1 in each sequence");
  concentrate->add_option("--p", f.primes, "primes to localize at")->delimiter(',');
  concentrate->add_option("--search-dims", f.dims, "dimensions for the dominated-measure search")->delimiter(',');
  concentrate->add_option("--trials", f.trials, "trials per dimension");
  concentrate->add_flag("--no-structure", f.no_structure, "skip the structure scan");
  swise->add_option("-s,--s", f.s, "subset size s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what(), 2);
  }

  try {
    ExperimentConfig cfg;
    if (f.config_path) {
      std::ifstream in(*f.config_path);
      if (!in) throw gcdlab::usage_error("cannot open config " + *f.config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw gcdlab::usage_error(std::string("config: ") + e.what());
      }
      cfg = gcdlab::config_from_json(j);
    }
    apply(f, cfg);
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.out_dir.empty()) cfg.out_dir = gcdlab::default_out_dir();

    const auto report = gcdlab::run(cfg);
    gcdlab::write_report(report, cfg.out_dir);
    std::cout << json{{"command", cfg.command},
                      {"out", cfg.out_dir},
                      {"summary", report.doc["summary"]},
                      {"determinism_hash", report.doc["determinism_hash"]}}
                     .dump(1)
              << '\n';
    return report.exit_code;
  } catch (const gcdlab::cap_exceeded& e) {
    return fail("cap_exceeded", e.what(), 3);
  } catch (const gcdlab::usage_error& e) {
    return fail("usage_error", e.what(), 2);
  } catch (const gcdlab::parameter_error& e) {
    return fail("parameter_error", e.what(), 2);
  } catch (const gcdlab::parse_error& e) {
    return fail("parse_error", e.what(), 2);
  } catch (const gcdlab::construction_error& e) {
    return fail("construction_error", e.what(), 2);
  } catch (const gcdlab::not_applicable& e) {
    return fail("not_applicable", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal_error", e.what(), 1);
  }
}
