#include "gcdlab/serialize.hpp"

#include <fstream>

#include <fmt/format.h>

#include "gcdlab/errors.hpp"

namespace gcdlab {

namespace {

json sets_json(const std::vector<IntegerSet>& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(std::vector<std::int64_t>(s.begin(), s.end()));
  return out;
}

json scales_json(const std::vector<std::int64_t>& xs) { return json(xs); }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw parse_error(std::string("instance: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw parse_error(std::string("instance: field '") + key + "' has the wrong type");
  }
}

Rational rational_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(to_exact(v.get<std::int64_t>()));
  throw parse_error(std::string("instance: field '") + key + "' must be a rational string");
}

}  // namespace

std::string real17(double v) { return fmt::format("{:.17g}", v); }

json instance_to_json(const GcdInstance& inst) {
  return json{{"kind", "gcd"}, {"k", inst.k()}, {"X", scales_json(inst.scales())}, {"D", inst.threshold()},
              {"sets", sets_json(inst.sets())}};
}

json instance_to_json(const LcmInstance& inst) {
  return json{{"kind", "lcm"}, {"k", inst.k()}, {"X", scales_json(inst.scales())}, {"L", inst.budget()},
              {"sets", sets_json(inst.sets())}};
}

json instance_to_json(const GcdRecipe& r) {
  return json{{"kind", "gcd"}, {"k", r.k}, {"X", scales_json(r.scales)}, {"D", r.threshold}, {"recipe", to_json(r)}};
}

json instance_to_json(const LcmRecipe& r) {
  return json{{"kind", "lcm"}, {"k", r.k}, {"X", scales_json(r.scales)}, {"L", r.budget}, {"recipe", to_json(r)}};
}

AnyInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("instance: top level must be an object");
  const auto kind = field<std::string>(j, "kind");
  if (kind != "gcd" && kind != "lcm") throw parse_error("instance: kind must be \"gcd\" or \"lcm\"");
  const auto k = field<std::size_t>(j, "k");
  const auto xs = field<std::vector<std::int64_t>>(j, "X");
  if (xs.size() != k) throw parse_error(fmt::format("instance: X has {} entries, expected k={}", xs.size(), k));
  try {
    if (j.contains("recipe")) {
      const auto& r = j.at("recipe");
      const auto type = field<std::string>(r, "type");
      if (kind == "gcd" && type == "gcd_extremal") {
        for (auto x : xs)
          if (x != xs.front()) throw parse_error("instance: gcd_extremal recipe needs identical X");
        return build_gcd_extremal(k, xs.front(), field<std::int64_t>(j, "D"), rational_field(r, "delta")).first;
      }
      if (kind == "gcd" && type == "gcd_multiples") return build_gcd_extremal_delta1(k, xs, field<std::int64_t>(j, "D")).first;
      if (kind == "lcm" && type == "lcm_extremal")
        return build_lcm_extremal(k, xs, field<std::int64_t>(j, "L"), rational_field(r, "delta"),
                                  field<double>(r, "c_k"), field<double>(r, "C_k"))
            .first;
      throw parse_error("instance: unknown recipe type '" + type + "' for kind " + kind);
    }
    const auto raw = field<std::vector<std::vector<std::int64_t>>>(j, "sets");
    if (raw.size() != k) throw parse_error(fmt::format("instance: sets has {} entries, expected k={}", raw.size(), k));
    std::vector<IntegerSet> sets;
    for (std::size_t i = 0; i < k; ++i) {
      for (auto a : raw[i])
        if (a < xs[i] || a > 2 * xs[i])
          throw parse_error(fmt::format("instance: set {} element {} outside window [{}, {}]", i + 1, a, xs[i], 2 * xs[i]));
      sets.emplace_back(xs[i], raw[i]);
    }
    if (kind == "gcd") return GcdInstance(std::move(sets), field<std::int64_t>(j, "D"));
    return LcmInstance(std::move(sets), field<std::int64_t>(j, "L"));
  } catch (const parse_error&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("instance: ") + e.what());
  } catch (const construction_error& e) {
    throw parse_error(std::string("instance: ") + e.what());
  }
}

AnyInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("instance: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error("instance: " + path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("instance: cannot write " + path.string());
  out << j.dump(1) << '\n';
}

json to_json(const TupleCensus& c) {
  return json{{"total", to_string(c.total)},
              {"qualifying", to_string(c.qualifying)},
              {"delta", to_string(c.delta)},
              {"delta_real", real17(to_double(c.delta))}};
}

json to_json(const GcdRecipe& r) {
  return json{{"type", r.target_delta == 1 && r.d0 == r.threshold ? "gcd_multiples" : "gcd_extremal"},
              {"delta", to_string(r.target_delta)},
              {"D0", r.d0}};
}

json to_json(const LcmRecipe& r) {
  return json{{"type", "lcm_extremal"},
              {"delta", to_string(r.target_delta)},
              {"c_k", r.c_const},
              {"C_k", r.big_c_const},
              {"M", r.m},
              {"Q", r.q},
              {"primes", r.primes},
              {"block_sizes", r.block_sizes},
              {"log_margin", real17(r.log_margin)},
              {"overlap_margin", real17(r.overlap_margin)},
              {"budget_ok", r.budget_ok}};
}

json to_json(const BoundReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return json{{"bound", r.bound},
              {"params", params},
              {"lhs", to_string(r.lhs)},
              {"log_lhs", real17(r.log_lhs)},
              {"log_rhs", r.log_rhs ? json(real17(*r.log_rhs)) : json(nullptr)},
              {"implied_constant", real17(r.implied_constant)},
              {"log_ratio", r.log_ratio ? json(real17(*r.log_ratio)) : json(nullptr)},
              {"verdict", to_string(r.verdict)},
              {"flags", r.flags}};
}

json to_json(const FiniteMeasure& mu) {
  json pts = json::array();
  for (const auto& [t, w] : mu.weights())
    pts.push_back(json{{"t", t.coords()}, {"num", w.get_num().get_str()}, {"den", w.get_den().get_str()}});
  return json{{"k", mu.k()}, {"weights", pts}};
}

FiniteMeasure measure_from_json(const json& j) {
  try {
    const auto k = j.at("k").get<std::size_t>();
    std::map<LatticePoint, Rational> w;
    for (const auto& p : j.at("weights")) {
      Rational r(ExactInt(p.at("num").get<std::string>()), ExactInt(p.at("den").get<std::string>()));
      r.canonicalize();
      w.emplace(LatticePoint(p.at("t").get<std::vector<std::int64_t>>()), r);
    }
    return FiniteMeasure(k, std::move(w));
  } catch (const json::exception& e) {
    throw parse_error(std::string("measure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("measure: ") + e.what());
  }
}

json to_json(const SieveReport& r) {
  return json{{"form", to_string(r.form)}, {"X", r.x},           {"D", r.d},
              {"eps", real17(r.eps)},      {"sequence", r.sequence}, {"lhs", to_string(r.lhs)},
              {"mass", to_string(r.mass)}, {"scale", real17(r.scale)}, {"ratio", real17(r.ratio)}};
}

json to_json(const BlockBounds& b) {
  return json{{"Delta", b.delta},
              {"linf", b.linf},
              {"l1", to_string(b.l1)},
              {"l2", to_string(b.l2)},
              {"linf_scale", real17(b.linf_scale)},
              {"l1_scale", real17(b.l1_scale)},
              {"l2_scale", real17(b.l2_scale)},
              {"l2_valid", b.l2_valid}};
}

json to_json(const StructureProfile& s) {
  json centers = json::array();
  for (const auto& [p, m] : s.centers) centers.push_back(json{{"p", p}, {"m", m}});
  return json{{"N", to_string(s.n)},
              {"centers", centers},
              {"pure_fraction", to_string(s.pure_fraction)},
              {"pure_fraction_real", real17(to_double(s.pure_fraction))},
              {"primes_scanned", s.primes_scanned}};
}

}  // namespace gcdlab
