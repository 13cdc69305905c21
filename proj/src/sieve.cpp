#include "gcdlab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "gcdlab/kernel.hpp"

namespace gcdlab {

double sieve_scale(double x, double d, double eps) { return x * std::pow(d, eps - 1) + d; }

double dual_scale(double x, double d, double eps) { return d * std::pow(x, eps - 1) + x; }

double sieve_crossover(double x, double eps) { return std::pow(x, 1.0 / (2.0 - eps)); }

GcdFormExact gcd_quadratic_form(const WeightedSequence<std::int64_t>& eta) {
  const std::int64_t lo = eta.lo(), hi = eta.hi();
  GcdFormExact out{Rational(0), {}};
  // form = sum_e phi(e) (sum_{e | d} |eta_d| / d)^2.
  for (std::int64_t e = 1; e <= hi; ++e) {
    Rational s = 0;
    for (std::int64_t d = (lo + e - 1) / e * e; d <= hi; d += e) {
      const std::int64_t w = eta[d] < 0 ? -eta[d] : eta[d];
      if (w) s += ratio(to_exact(w), to_exact(d));
    }
    if (s != 0) out.form += Rational(to_exact(euler_phi(e))) * s * s;
  }
  out.form.canonicalize();
  for (std::int64_t d1 = lo; d1 <= hi; ++d1) {
    Rational c = 0;
    for (std::int64_t d2 = lo; d2 <= hi; ++d2) c += ratio(to_exact(std::gcd(d1, d2)), to_exact(d1) * to_exact(d2));
    c.canonicalize();
    out.row.push_back(c);
  }
  return out;
}

double gcd_quadratic_form(const WeightedSequence<double>& eta) {
  const std::int64_t lo = eta.lo(), hi = eta.hi();
  double form = 0;
  for (std::int64_t e = 1; e <= hi; ++e) {
    double s = 0;
    for (std::int64_t d = (lo + e - 1) / e * e; d <= hi; d += e) s += std::fabs(eta[d]) / static_cast<double>(d);
    form += static_cast<double>(euler_phi(e)) * s * s;
  }
  return form;
}

std::vector<double> gcd_form_row(std::int64_t d_scale) {
  const std::int64_t lo = d_scale, hi = 2 * d_scale;
  // h[e] = sum_{d2 in window, e | d2} 1/d2.
  std::vector<double> h(static_cast<std::size_t>(hi + 1), 0.0);
  for (std::int64_t e = 1; e <= hi; ++e)
    for (std::int64_t d = (lo + e - 1) / e * e; d <= hi; d += e) h[static_cast<std::size_t>(e)] += 1.0 / static_cast<double>(d);
  std::vector<double> row;
  for (std::int64_t d1 = lo; d1 <= hi; ++d1) {
    double c = 0;
    for (auto e : divisor_list(d1)) c += static_cast<double>(euler_phi(e)) * h[static_cast<std::size_t>(e)];
    row.push_back(c / static_cast<double>(d1));
  }
  return row;
}

BlockBounds block_bounds(const IntegerSet& a, std::int64_t delta, double eta_exp) {
  if (delta < 1 || delta > 2 * a.scale()) throw usage_error("block_bounds: requires 1 <= Delta <= 2X");
  const auto table = multiplicity_table(a, 2 * delta);
  BlockBounds b{delta, 0, 0, 0, 0, 0, 0, false};
  for (std::int64_t d = delta; d <= 2 * delta; ++d) {
    const std::int64_t c = table[d];
    b.linf = std::max(b.linf, c);
    b.l1 += to_exact(c);
    b.l2 += to_exact(c) * to_exact(c);
  }
  const double x = static_cast<double>(a.scale()), dl = static_cast<double>(delta), n = static_cast<double>(a.size());
  b.linf_scale = x / dl;
  b.l1_scale = n * std::pow(x, eta_exp);
  b.l2_scale = x * std::pow(dl, eta_exp - 1) * n;
  b.l2_valid = x >= std::pow(dl, 2 - eta_exp);
  return b;
}

std::string to_string(SieveForm f) { return f == SieveForm::direct ? "direct" : "dual"; }

SieveSweep sieve_sweep(const SieveSweepConfig& cfg, unsigned workers) {
  if (cfg.log2_lo < 2 || cfg.log2_hi < cfg.log2_lo || cfg.log2_hi > 30)
    throw parameter_error("sieve_sweep: scale exponents out of range");
  if (!(cfg.density > 0 && cfg.density <= 1)) throw parameter_error("sieve_sweep: density must lie in (0, 1]");
  if (cfg.sequences == 0) throw parameter_error("sieve_sweep: need at least one sequence");
  const std::size_t n_points = static_cast<std::size_t>(cfg.log2_hi - cfg.log2_lo + 1);
  std::vector<SieveReport> rows(n_points * cfg.sequences);

  auto job = [&](std::size_t task) {
    const std::size_t point = task / cfg.sequences, seq = task % cfg.sequences;
    const std::int64_t y = std::int64_t{1} << (cfg.log2_lo + static_cast<int>(point));
    const std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(y)));
    const std::int64_t x = cfg.form == SieveForm::direct ? y : root;
    const std::int64_t d = cfg.form == SieveForm::direct ? root : y;
    // One stream per (point, sequence) keeps results independent of scheduling.
    std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ull * (task + 1)));
    std::bernoulli_distribution coin(cfg.density);
    std::vector<std::pair<std::int64_t, std::int64_t>> entries;
    for (std::int64_t n = x; n <= 2 * x; ++n)
      if (coin(rng)) entries.emplace_back(n, 1);
    if (entries.empty()) entries.emplace_back(x, 1);
    const WeightedSequence<std::int64_t> xi(x, entries);
    SieveReport r{cfg.form, x, d, cfg.eps, seq, 0, mass(xi), 0, 0};
    if (cfg.form == SieveForm::direct) {
      r.lhs = sieve_lhs(xi, d);
      r.scale = sieve_scale(static_cast<double>(x), static_cast<double>(d), cfg.eps);
    } else {
      r.lhs = dual_sieve_lhs(xi, d);
      r.scale = dual_scale(static_cast<double>(x), static_cast<double>(d), cfg.eps);
    }
    r.ratio = r.lhs.get_d() / (r.scale * r.mass.get_d());
    rows[task] = std::move(r);
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t t = 0; t < rows.size(); ++t) job(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < rows.size(); t += workers) job(t);
      });
    for (auto& th : pool) th.join();
  }

  SieveSweep out{cfg, std::move(rows), {}, 0, 0};
  for (std::size_t p = 0; p < n_points; ++p) {
    SieveSweepPoint pt{std::int64_t{1} << (cfg.log2_lo + static_cast<int>(p)), 0, 0};
    for (std::size_t s = 0; s < cfg.sequences; ++s) {
      const double r = out.rows[p * cfg.sequences + s].ratio;
      pt.max_ratio = std::max(pt.max_ratio, r);
      pt.mean_ratio += r;
    }
    pt.mean_ratio /= static_cast<double>(cfg.sequences);
    out.max_ratio = std::max(out.max_ratio, pt.max_ratio);
    out.points.push_back(pt);
  }
  if (out.points.size() > 1) {
    double s = 0;
    for (std::size_t p = 1; p < out.points.size(); ++p) s += out.points[p].mean_ratio / out.points[p - 1].mean_ratio;
    out.mean_doubling = s / static_cast<double>(out.points.size() - 1);
  }
  return out;
}

std::string sieve_csv_header() { return "form,X,D,eps,sequence,lhs,mass,scale,ratio"; }

std::string sieve_csv_row(const SieveReport& r) {
  return fmt::format("{},{},{},{:.17g},{},{},{},{:.17g},{:.17g}", to_string(r.form), r.x, r.d, r.eps, r.sequence,
                     to_string(r.lhs), to_string(r.mass), r.scale, r.ratio);
}

}  // namespace gcdlab
