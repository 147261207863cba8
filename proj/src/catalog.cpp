#include "ecl/catalog.hpp"

#include "ecl/errors.hpp"

#include <fstream>
#include <sstream>

namespace ecl {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(std::string(where) + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_string())
        throw SchemaError(std::string(where) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

Rational require_rational(const json& j, const char* key, const char* where) {
    try {
        return parse_rational(require_string(j, key, where));
    } catch (const DomainError& e) {
        throw SchemaError(std::string(where) + ": field '" + key + "': " + e.what());
    }
}

std::uint64_t require_natural(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number_unsigned())
        throw SchemaError(std::string(where) + ": field '" + key +
                          "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

void check_schema(const json& j, const char* tag, const char* where) {
    if (require_string(j, "schema", where) != tag)
        throw SchemaError(std::string(where) + ": expected schema '" + tag + "'");
}

RationalHalfspace halfspace_from_json(const json& j, const char* where) {
    if (j.contains("kind") && j.at("kind") != "halfspace")
        throw SchemaError(std::string(where) + ": expected a halfspace descriptor");
    RationalHalfspace h;
    const json& coeffs = require(j, "a", where);
    if (!coeffs.is_array() || coeffs.empty())
        throw SchemaError(std::string(where) + ": field 'a' must be a nonempty array");
    for (const json& c : coeffs) {
        if (!c.is_string())
            throw SchemaError(std::string(where) + ": coefficients must be rational strings");
        h.a.push_back(parse_rational(c.get<std::string>()));
    }
    h.b = require_rational(j, "b", where);
    if (j.contains("closed")) {
        if (!j.at("closed").is_boolean())
            throw SchemaError(std::string(where) + ": field 'closed' must be boolean");
        h.closed = j.at("closed").get<bool>();
    }
    const std::uint64_t d = require_natural(j, "d", where);
    if (d != h.a.size())
        throw SchemaError(std::string(where) + ": dimension " + std::to_string(d) +
                          " does not match " + std::to_string(h.a.size()) + " coefficients");
    return h;
}

PointGen point_from_json(const json& v, const char* where) {
    if (!v.is_string())
        throw SchemaError(std::string(where) + ": points must be generator strings");
    try {
        return PointGen::parse(v.get<std::string>());
    } catch (const DomainError& e) {
        throw SchemaError(std::string(where) + ": " + e.what());
    }
}

Concept concept_from_json_impl(const json& j, const Box& box,
                               const std::optional<ConstructionContext>& ctx,
                               WitnessBlockFactory* factory) {
    const char* where = "concept";
    if (!j.is_object()) throw SchemaError("concept descriptors must be objects");
    const std::string kind = require_string(j, "kind", where);
    try {
        if (kind == "full") return full_concept();
        if (kind == "empty") return empty_concept();
        if (kind == "formula") {
            const Formula f = Formula::parse(require_string(j, "expr", where));
            if (j.contains("vars") && require_natural(j, "vars", where) < f.num_vars())
                throw SchemaError("formula: declared vars below the highest index used");
            return formula_tree(f);
        }
        if (kind == "interval") {
            RationalInterval interval{require_rational(j, "lo", where),
                                      require_rational(j, "hi", where)};
            return interval_tree(interval, box);
        }
        if (kind == "halfspace") return halfspace_tree(halfspace_from_json(j, where), box);
        if (kind == "dgon") {
            const json& sides = require(j, "halfspaces", where);
            if (!sides.is_array() || sides.empty())
                throw SchemaError("dgon: field 'halfspaces' must be a nonempty array");
            DGon g;
            for (const json& s : sides) g.sides.push_back(halfspace_from_json(s, "dgon side"));
            return dgon_tree(g, box);
        }
        if (kind == "paths") {
            const json& pts = require(j, "points", where);
            if (!pts.is_array()) throw SchemaError("paths: field 'points' must be an array");
            std::vector<PointGen> points;
            for (const json& p : pts) points.push_back(point_from_json(p, "paths"));
            std::optional<std::uint32_t> trunc;
            if (j.contains("trunc"))
                trunc = static_cast<std::uint32_t>(require_natural(j, "trunc", where));
            return paths_concept(std::move(points), trunc);
        }
        if (kind == "witness_block") {
            if (!ctx)
                throw SchemaError(
                    "witness_block concepts need a catalog-level construction context");
            const std::uint64_t t = require_natural(j, "t", where);
            const std::uint64_t k = require_natural(j, "k", where);
            const std::uint64_t jmask = require_natural(j, "jmask", where);
            const Stage emit = static_cast<Stage>(require_natural(j, "emit_stage", where));
            if (factory) return factory->make(t, k, jmask, emit);
            auto pred = std::make_shared<const PiThreePredicate>(
                PiThreePredicate::parse(ctx->predicate_spec, ctx->n));
            return witness_block_concept(std::move(pred), t, k, jmask, emit,
                                         ctx->oracle_budget);
        }
    } catch (const DomainError& e) {
        throw SchemaError(std::string("concept '") + kind + "': " + e.what());
    }
    throw SchemaError("unknown concept kind '" + kind + "'");
}

}  // namespace

json concept_to_json(const Concept& c) {
    if (!c.rule()) throw DomainError("cannot serialize a null concept");
    return c.rule()->to_json();
}

Concept concept_from_json(const json& j, const Box& box,
                          const std::optional<ConstructionContext>& ctx) {
    return concept_from_json_impl(j, box, ctx, nullptr);
}

json catalog_to_json(const ConceptClass& cls, const std::optional<ConstructionContext>& ctx) {
    json j;
    j["schema"] = kCatalogSchema;
    j["box"] = {{"lo", rational_str(cls.box().lo)}, {"hi", rational_str(cls.box().hi)}};
    j["effectivity"] = cls.effectivity() == Effectivity::Effective ? "effective" : "weak";
    if (ctx) {
        j["construction"] = {{"pred", ctx->predicate_spec},
                             {"n", ctx->n},
                             {"horizon", ctx->horizon},
                             {"oracle_budget", ctx->oracle_budget}};
    }
    json concepts = json::array();
    for (const Concept& c : cls.concepts()) concepts.push_back(concept_to_json(c));
    j["concepts"] = std::move(concepts);
    return j;
}

CatalogFile catalog_from_json(const json& j) {
    const char* where = "catalog";
    if (!j.is_object()) throw SchemaError("catalog must be a JSON object");
    check_schema(j, kCatalogSchema, where);
    Box box;
    if (j.contains("box")) {
        const json& b = j.at("box");
        try {
            box = make_box(require_rational(b, "lo", "catalog box"),
                           require_rational(b, "hi", "catalog box"));
        } catch (const DomainError& e) {
            throw SchemaError(std::string("catalog box: ") + e.what());
        }
    }
    Effectivity eff = Effectivity::Effective;
    if (j.contains("effectivity")) {
        const std::string text = require_string(j, "effectivity", where);
        if (text == "effective") {
            eff = Effectivity::Effective;
        } else if (text == "weak") {
            eff = Effectivity::Weak;
        } else {
            throw SchemaError("catalog: effectivity must be 'effective' or 'weak'");
        }
    }
    CatalogFile file;
    std::optional<WitnessBlockFactory> factory;
    if (j.contains("construction")) {
        const json& c = j.at("construction");
        ConstructionContext ctx;
        ctx.predicate_spec = require_string(c, "pred", "construction context");
        ctx.n = require_natural(c, "n", "construction context");
        ctx.horizon = static_cast<Stage>(require_natural(c, "horizon", "construction context"));
        ctx.oracle_budget = static_cast<unsigned>(
            require_natural(c, "oracle_budget", "construction context"));
        try {
            auto pred = std::make_shared<const PiThreePredicate>(
                PiThreePredicate::parse(ctx.predicate_spec, ctx.n));
            factory.emplace(std::move(pred), ctx.oracle_budget);
        } catch (const DomainError& e) {
            throw SchemaError(std::string("construction context: ") + e.what());
        }
        file.construction = std::move(ctx);
    }
    const json& concepts = require(j, "concepts", where);
    if (!concepts.is_array()) throw SchemaError("catalog: field 'concepts' must be an array");
    std::vector<Concept> loaded;
    loaded.reserve(concepts.size());
    for (const json& c : concepts)
        loaded.push_back(concept_from_json_impl(c, box, file.construction,
                                                factory ? &*factory : nullptr));
    file.cls = ConceptClass(std::move(loaded), eff, box);
    return file;
}

json pool_to_json(const WitnessPool& pool) {
    json j;
    j["schema"] = kPoolSchema;
    j["precision"] = pool.precision;
    json points = json::array();
    for (const PointGen& p : pool.points) points.push_back(p.description());
    j["points"] = std::move(points);
    return j;
}

WitnessPool pool_from_json(const json& j) {
    const char* where = "pool";
    if (!j.is_object()) throw SchemaError("pool must be a JSON object");
    check_schema(j, kPoolSchema, where);
    const unsigned precision = static_cast<unsigned>(require_natural(j, "precision", where));
    const json& pts = require(j, "points", where);
    if (!pts.is_array()) throw SchemaError("pool: field 'points' must be an array");
    std::vector<PointGen> points;
    for (const json& p : pts) points.push_back(point_from_json(p, where));
    try {
        return WitnessPool(std::move(points), precision);
    } catch (const DomainError& e) {
        throw SchemaError(std::string("pool: ") + e.what());
    }
}

json dist_to_json(const Distribution& d) {
    json j;
    j["schema"] = kDistSchema;
    if (d.kind() == Distribution::Kind::FiniteSupport) {
        j["kind"] = "finite";
        json atoms = json::array();
        for (const PointGen& a : d.atoms()) atoms.push_back(a.description());
        json weights = json::array();
        for (const Rational& w : d.weights()) weights.push_back(rational_str(w));
        j["atoms"] = std::move(atoms);
        j["weights"] = std::move(weights);
    } else {
        j["kind"] = "product_bernoulli";
        j["p"] = rational_str(d.bernoulli_p());
        j["precision"] = d.precision();
    }
    return j;
}

Distribution dist_from_json(const json& j) {
    const char* where = "distribution";
    if (!j.is_object()) throw SchemaError("distribution must be a JSON object");
    check_schema(j, kDistSchema, where);
    const std::string kind = require_string(j, "kind", where);
    try {
        if (kind == "finite") {
            const json& atoms = require(j, "atoms", where);
            const json& weights = require(j, "weights", where);
            if (!atoms.is_array() || !weights.is_array())
                throw SchemaError("distribution: atoms/weights must be arrays");
            std::vector<PointGen> pts;
            for (const json& a : atoms) pts.push_back(point_from_json(a, where));
            std::vector<Rational> ws;
            for (const json& w : weights) {
                if (!w.is_string())
                    throw SchemaError("distribution: weights must be rational strings");
                ws.push_back(parse_rational(w.get<std::string>()));
            }
            return Distribution::finite_support(std::move(pts), std::move(ws));
        }
        if (kind == "product_bernoulli") {
            const Rational p = require_rational(j, "p", where);
            const unsigned precision =
                static_cast<unsigned>(require_natural(j, "precision", where));
            return Distribution::product_bernoulli(p, precision);
        }
    } catch (const DomainError& e) {
        throw SchemaError(std::string("distribution: ") + e.what());
    }
    throw SchemaError("unknown distribution kind '" + kind + "'");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << j.dump(2) << "\n";
}

CatalogFile load_catalog(const std::string& path) { return catalog_from_json(load_json(path)); }

WitnessPool load_pool(const std::string& path) { return pool_from_json(load_json(path)); }

Distribution load_distribution(const std::string& path) {
    return dist_from_json(load_json(path));
}

}  // namespace ecl
