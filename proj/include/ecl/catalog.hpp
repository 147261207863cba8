#pragma once

// Versioned JSON persistence shared by every command: concept catalogs
// (with an optional construction context that witness-block entries need),
// witness pools, and distributions.  All rationals travel as "p/q"
// strings; malformed files raise SchemaError.

#include "ecl/concepts.hpp"
#include "ecl/construction.hpp"
#include "ecl/pac.hpp"
#include "ecl/pi01.hpp"
#include "ecl/vc.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace ecl {

inline constexpr const char* kCatalogSchema = "ecl/catalog/v1";
inline constexpr const char* kPoolSchema = "ecl/pool/v1";
inline constexpr const char* kDistSchema = "ecl/dist/v1";
inline constexpr const char* kReportSchema = "ecl/report/v1";

struct CatalogFile {
    ConceptClass cls;
    std::optional<ConstructionContext> construction;
};

nlohmann::json concept_to_json(const Concept& c);
// Standalone descriptor load; witness_block entries need the context.
Concept concept_from_json(const nlohmann::json& j, const Box& box,
                          const std::optional<ConstructionContext>& ctx = std::nullopt);

nlohmann::json catalog_to_json(const ConceptClass& cls,
                               const std::optional<ConstructionContext>& ctx = std::nullopt);
CatalogFile catalog_from_json(const nlohmann::json& j);

nlohmann::json pool_to_json(const WitnessPool& pool);
WitnessPool pool_from_json(const nlohmann::json& j);

nlohmann::json dist_to_json(const Distribution& d);
Distribution dist_from_json(const nlohmann::json& j);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);
CatalogFile load_catalog(const std::string& path);
WitnessPool load_pool(const std::string& path);
Distribution load_distribution(const std::string& path);

}  // namespace ecl
