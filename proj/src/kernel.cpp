#include "gcdlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gcdlab/errors.hpp"

namespace gcdlab {

namespace {

void require_positive(std::span<const std::int64_t> values, const char* what) {
  if (values.empty()) throw usage_error(std::string(what) + ": empty sequence");
  for (auto v : values)
    if (v <= 0) throw usage_error(std::string(what) + ": entries must be positive, got " + std::to_string(v));
}

void require_positive(std::span<const ExactInt> values, const char* what) {
  if (values.empty()) throw usage_error(std::string(what) + ": empty sequence");
  for (const auto& v : values)
    if (v <= 0) throw usage_error(std::string(what) + ": entries must be positive, got " + v.get_str());
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::int64_t gcd_tuple(std::span<const std::int64_t> values) {
  require_positive(values, "gcd_tuple");
  std::int64_t g = 0;
  for (auto v : values) {
    g = std::gcd(g, v);
    if (g == 1) break;
  }
  return g;
}

ExactInt gcd_tuple(std::span<const ExactInt> values) {
  require_positive(values, "gcd_tuple");
  ExactInt g = 0;
  for (const auto& v : values) g = gcd(g, v);
  return g;
}

ExactInt lcm_tuple(std::span<const std::int64_t> values) {
  require_positive(values, "lcm_tuple");
  ExactInt l = 1;
  for (auto v : values) l = lcm(l, to_exact(v));
  return l;
}

ExactInt lcm_tuple(std::span<const ExactInt> values) {
  require_positive(values, "lcm_tuple");
  ExactInt l = 1;
  for (const auto& v : values) l = lcm(l, v);
  return l;
}

bool lcm_at_most(std::span<const std::int64_t> values, std::int64_t bound) {
  require_positive(values, "lcm_at_most");
  __int128 l = 1;
  for (auto v : values) {
    const auto g = std::gcd(static_cast<std::int64_t>(l), v);
    l = l / g * v;
    if (l > bound) return false;
  }
  return true;
}

int mobius(std::int64_t n) {
  if (n <= 0) throw usage_error("mobius: n must be >= 1, got " + std::to_string(n));
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::vector<std::int8_t> mobius_table(std::int64_t n) {
  const SieveTable table(std::max<std::int64_t>(n, 1));
  auto mu = table.mobius_values();
  return std::vector<std::int8_t>(mu.begin(), mu.begin() + std::max<std::int64_t>(n, 0) + 1);
}

SieveTable::SieveTable(std::int64_t limit) : limit_(limit) {
  if (limit < 1) throw usage_error("SieveTable: limit must be >= 1");
  if (limit > (std::int64_t{1} << 31) - 1) throw usage_error("SieveTable: limit exceeds 2^31 - 1");
  const auto n = static_cast<std::size_t>(limit);
  spf_.assign(n + 1, 0);
  mu_.assign(n + 1, 0);
  mu_[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::int32_t>(i);
      mu_[i] = -1;
      primes_.push_back(static_cast<std::int64_t>(i));
    }
    for (auto p : primes_) {
      const auto ip = i * static_cast<std::size_t>(p);
      if (p > spf_[i] || ip > n) break;
      spf_[ip] = static_cast<std::int32_t>(p);
      mu_[ip] = (static_cast<std::size_t>(p) == static_cast<std::size_t>(spf_[i])) ? 0 : static_cast<std::int8_t>(-mu_[i]);
    }
  }
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  if (lo > hi) return out;
  if (lo < 2) throw usage_error("primes_in: lo must be >= 2, got " + std::to_string(lo));

  const std::int64_t root = isqrt(hi);
  std::vector<std::int64_t> base;
  if (root >= 2) base = SieveTable(root).primes();

  constexpr std::int64_t kSegment = 1 << 18;
  std::vector<char> composite;
  for (std::int64_t seg_lo = lo; seg_lo <= hi; seg_lo += kSegment) {
    const std::int64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    composite.assign(static_cast<std::size_t>(seg_hi - seg_lo + 1), 0);
    for (auto p : base) {
      if (p * p > seg_hi) break;
      std::int64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::int64_t m = start; m <= seg_hi; m += p) composite[static_cast<std::size_t>(m - seg_lo)] = 1;
    }
    for (std::int64_t v = seg_lo; v <= seg_hi; ++v)
      if (!composite[static_cast<std::size_t>(v - seg_lo)]) out.push_back(v);
  }
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  const auto un = static_cast<std::uint64_t>(n);
  std::uint64_t d = un - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, un);
    if (x == 1 || x == un - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, un);
      if (x == un - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int p_adic_valuation(std::int64_t n, std::int64_t p) {
  if (n <= 0) throw usage_error("p_adic_valuation: n must be >= 1, got " + std::to_string(n));
  if (!is_prime(p)) throw usage_error("p_adic_valuation: " + std::to_string(p) + " is not prime");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n <= 0) throw usage_error("factorize: n must be >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_squarefree(std::int64_t n) { return mobius(n) != 0; }

std::vector<std::int64_t> divisor_list(std::int64_t n) {
  if (n <= 0) throw usage_error("divisor_list: n must be >= 1");
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::int64_t divisor_count(std::int64_t n) {
  std::int64_t t = 1;
  for (auto [p, e] : factorize(n)) t *= e + 1;
  return t;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

LatticePoint::LatticePoint(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw usage_error("LatticePoint: dimension must be >= 2");
}

LatticePoint LatticePoint::shifted(std::int64_t c) const {
  auto out = coords_;
  for (auto& x : out) x += c;
  return LatticePoint(std::move(out));
}

LatticePoint LatticePoint::diagonal(std::size_t k, std::int64_t m) {
  return LatticePoint(std::vector<std::int64_t>(k, m));
}

LatticePoint LatticePoint::diagonal_plus_unit(std::size_t k, std::int64_t m, std::size_t j) {
  std::vector<std::int64_t> c(k, m);
  c.at(j) += 1;
  return LatticePoint(std::move(c));
}

std::int64_t gcd_norm(std::span<const std::int64_t> t) {
  if (t.size() < 2) throw usage_error("gcd_norm: dimension must be >= 2");
  const auto lo = *std::min_element(t.begin(), t.end());
  std::int64_t sum = 0;
  for (auto x : t) sum += x - lo;
  return sum;
}

std::int64_t gcd_norm(const LatticePoint& t) { return gcd_norm(std::span<const std::int64_t>(t.coords())); }

}  // namespace gcdlab
