#include "gcdlab/set_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gcdlab/errors.hpp"
#include "gcdlab/kernel.hpp"

namespace gcdlab {

IntegerSet::IntegerSet(std::int64_t scale, std::vector<std::int64_t> elements, EmptyPolicy policy)
    : scale_(scale), elements_(std::move(elements)) {
  if (scale_ < 1) throw usage_error("IntegerSet: scale X must be positive, got " + std::to_string(scale_));
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty() && policy == EmptyPolicy::reject) throw usage_error("IntegerSet: empty set not allowed here");
  for (auto a : elements_) {
    if (a < scale_ || a > 2 * scale_)
      throw usage_error("IntegerSet: element " + std::to_string(a) + " outside window [" + std::to_string(scale_) +
                        ", " + std::to_string(2 * scale_) + "]");
  }
}

IntegerSet IntegerSet::full_window(std::int64_t scale) { return multiples_in(scale, 1); }

bool IntegerSet::contains(std::int64_t a) const { return std::binary_search(elements_.begin(), elements_.end(), a); }

IntegerSet multiples_in(std::int64_t scale, std::int64_t d) {
  if (d < 1) throw usage_error("multiples_in: d must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t m = (scale + d - 1) / d * d; m <= 2 * scale; m += d) out.push_back(m);
  return IntegerSet(scale, std::move(out), EmptyPolicy::allow);
}

MultiplicityTable multiplicity_table(const IntegerSet& a, std::int64_t d_max) {
  if (d_max < 1) throw usage_error("multiplicity_table: d_max must be positive");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(d_max) + 1, 0);
  if (a.empty()) return MultiplicityTable(0, std::move(counts));

  const std::int64_t lo = a.min();
  const std::int64_t hi = a.max();
  const std::int64_t width = hi - lo + 1;
  const std::int64_t top = std::min(d_max, hi);
  // Sieve over multiples when the window is dense enough, otherwise enumerate divisors.
  const double sieve_cost = static_cast<double>(width) * std::log(static_cast<double>(top) + 1.0) + static_cast<double>(top);
  const double divisor_cost = static_cast<double>(a.size()) * std::sqrt(static_cast<double>(hi));
  if (sieve_cost <= divisor_cost && width <= (std::int64_t{1} << 31)) {
    std::vector<char> member(static_cast<std::size_t>(width), 0);
    for (auto x : a) member[static_cast<std::size_t>(x - lo)] = 1;
    for (std::int64_t d = 1; d <= top; ++d) {
      std::int64_t c = 0;
      for (std::int64_t m = (lo + d - 1) / d * d; m <= hi; m += d) c += member[static_cast<std::size_t>(m - lo)];
      counts[static_cast<std::size_t>(d)] = c;
    }
  } else {
    for (auto x : a)
      for (auto d : divisor_list(x))
        if (d <= d_max) ++counts[static_cast<std::size_t>(d)];
  }
  return MultiplicityTable(static_cast<std::int64_t>(a.size()), std::move(counts));
}

std::vector<ValuationSlice> valuation_slices(const IntegerSet& a, std::int64_t p) {
  if (!is_prime(p)) throw usage_error("valuation_slices: " + std::to_string(p) + " is not prime");
  std::vector<ValuationSlice> slices;
  for (auto x : a) {
    const int t = p_adic_valuation(x, p);
    auto it = std::find_if(slices.begin(), slices.end(), [t](const ValuationSlice& s) { return s.t == t; });
    if (it == slices.end()) {
      slices.push_back(ValuationSlice{p, t, a.scale(), {}, Rational(0)});
      it = std::prev(slices.end());
    }
    it->members.push_back(x);
  }
  std::sort(slices.begin(), slices.end(), [](const auto& l, const auto& r) { return l.t < r.t; });
  for (auto& s : slices) {
    s.alpha = ratio(ExactInt(static_cast<unsigned long>(s.members.size())), ExactInt(static_cast<unsigned long>(a.size())));
    s.alpha.canonicalize();
  }
  return slices;
}

IntegerSet prime_removed(const ValuationSlice& slice) {
  std::int64_t pt = 1;
  for (int i = 0; i < slice.t; ++i) pt *= slice.p;
  const std::int64_t scale = (slice.parent_scale + pt - 1) / pt;
  std::vector<std::int64_t> out;
  out.reserve(slice.members.size());
  for (auto x : slice.members) {
    if (x % pt) throw usage_error("prime_removed: member " + std::to_string(x) + " not divisible by p^t");
    out.push_back(x / pt);
  }
  return IntegerSet(scale, std::move(out), EmptyPolicy::allow);
}

std::int64_t divisor_count_in_set(const IntegerSet& a, std::int64_t l) {
  if (l < 1) throw usage_error("divisor_count_in_set: l must be positive");
  std::int64_t c = 0;
  for (auto x : a) {
    if (x > l) break;
    if (l % x == 0) ++c;
  }
  return c;
}

void write_set_text(std::ostream& out, const IntegerSet& a) {
  out << "X " << a.scale() << '\n';
  for (auto x : a) out << x << '\n';
}

IntegerSet read_set_text(std::istream& in) {
  std::string line;
  std::int64_t scale = 0;
  bool have_header = false;
  std::vector<std::int64_t> elems;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag >> scale) || tag != "X") throw parse_error("set text: expected header 'X <value>' on line " + std::to_string(lineno));
      have_header = true;
      continue;
    }
    std::int64_t v = 0;
    if (!(ls >> v)) throw parse_error("set text: malformed element on line " + std::to_string(lineno));
    elems.push_back(v);
  }
  if (!have_header) throw parse_error("set text: missing header");
  try {
    return IntegerSet(scale, std::move(elems), EmptyPolicy::allow);
  } catch (const usage_error& e) {
    throw parse_error(std::string("set text: ") + e.what());
  }
}

}  // namespace gcdlab
