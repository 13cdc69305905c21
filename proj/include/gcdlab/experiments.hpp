#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcdlab/serialize.hpp"

namespace gcdlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::string command;

  // Instance source: a file, or a named construction with inline parameters.
  std::optional<std::string> instance_path;
  std::string construction = "gcd_extremal";  // gcd_extremal | gcd_multiples | lcm_extremal | random_gcd | random_lcm
  std::size_t k = 3;
  std::vector<std::int64_t> scales{1000};
  std::vector<std::int64_t> thresholds{100};
  std::vector<std::int64_t> budgets;
  std::vector<std::string> deltas{"1/100"};
  std::vector<std::int64_t> primes{13, 17, 23, 31, 41};

  std::optional<double> c_small;
  std::optional<double> c_large;
  std::optional<std::int64_t> p0;
  double eps = 0.5;
  // Constant multiplying every bound stated with an unspecified implied constant; nullopt = 2^k.
  std::optional<double> implied_constant;

  std::string counter = "fast";  // fast | brute | both
  int s = 2;

  std::vector<std::string> sieve_forms{"direct", "dual"};
  int log2_lo = 8;
  int log2_hi = 14;
  std::size_t sequences = 20;
  double density = 0.5;

  std::vector<std::size_t> search_dims{3, 4};
  std::size_t trials = 1000;
  bool structure = true;

  std::size_t random_count = 10;
  std::int64_t random_max_scale = 500;
  std::int64_t random_max_size = 25;
  std::size_t samples = 1000;

  std::optional<std::uint64_t> seed;
  std::string out_dir;
  unsigned workers = 1;
  bool strict = false;
  std::int64_t bruteforce_cap = kDefaultBruteforceCap;
  std::int64_t lcm_budget_cap = kLcmBudgetCap;
};

ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});
json config_to_json(const ExperimentConfig& cfg);

struct CsvTable {
  std::string name;
  std::string header;
  std::vector<std::string> rows;
  std::string text() const;
};

struct PlotSeries {
  std::string axis;
  std::string group;
  std::vector<std::pair<double, double>> points;
};

struct RunReport {
  json doc;
  std::vector<CsvTable> tables;
  std::vector<PlotSeries> plots;
  // Instance files in recipe form, by file name.
  std::vector<std::pair<std::string, json>> instances;
  int exit_code = 0;
};

RunReport run(const ExperimentConfig& cfg);

// Writes report.json, one CSV per table and one plot_<axis>.csv per plot axis.
void write_report(const RunReport& report, const std::filesystem::path& dir);

// group,x,y rows then "#slope,<group>,<value>" for every group with >= 2 points.
std::string emit_plotdata(const RunReport& report, const std::string& axis);

std::optional<double> least_squares_slope(const std::vector<std::pair<double, double>>& pts);

// FNV-1a over the report JSON (timing and timestamp removed) and every CSV table.
std::string determinism_hash(const RunReport& report);

// Random instances: k sets with X_i <= max_scale, 1 <= |A_i| <= max_size.
GcdInstance random_gcd_instance(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale, std::int64_t max_size);
LcmInstance random_lcm_instance(std::mt19937_64& rng, std::size_t k, std::int64_t max_scale, std::int64_t max_size);

std::string default_out_dir();

}  // namespace gcdlab
