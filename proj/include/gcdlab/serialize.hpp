#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "gcdlab/bounds.hpp"
#include "gcdlab/concentration.hpp"
#include "gcdlab/constructions.hpp"
#include "gcdlab/counting.hpp"
#include "gcdlab/sieve.hpp"

namespace gcdlab {

using json = nlohmann::ordered_json;
using AnyInstance = std::variant<GcdInstance, LcmInstance>;

// {kind, k, X, D|L, sets}.
json instance_to_json(const GcdInstance& inst);
json instance_to_json(const LcmInstance& inst);
// Recipe form: {kind, k, X, D|L, recipe}; the sets are regenerated on load.
json instance_to_json(const GcdRecipe& recipe);
json instance_to_json(const LcmRecipe& recipe);

// Re-validates window membership and the D / L hypotheses; every failure is a parse_error.
AnyInstance instance_from_json(const json& j);
AnyInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const json& j);

json to_json(const TupleCensus& c);
json to_json(const GcdRecipe& r);
json to_json(const LcmRecipe& r);
json to_json(const BoundReport& r);
json to_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(const json& j);
json to_json(const SieveReport& r);
json to_json(const BlockBounds& b);
json to_json(const StructureProfile& s);

// Shortest round-tripping text for a double is not stable across libraries; reals are
// written with 17 significant digits.
std::string real17(double v);

}  // namespace gcdlab
