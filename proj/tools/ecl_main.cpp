// Command-line front end: every subcommand loads its inputs from the
// shared JSON formats, invokes one library operation, and prints one
// versioned report object to stdout.  Reports are byte-identical across
// runs and worker counts; --timing adds a wall-clock field and is the one
// deliberate exception.

#include "CLI11.hpp"

#include "ecl/catalog.hpp"
#include "ecl/concepts.hpp"
#include "ecl/construction.hpp"
#include "ecl/errors.hpp"
#include "ecl/pac.hpp"
#include "ecl/pi01.hpp"
#include "ecl/vc.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Exit codes: 0 ok, 64 usage, 65 bad input file, 70 undecided membership,
// 71 no consistent hypothesis, 72 approximation failure, 73 precision
// exhausted, 74 domain error, 1 unexpected.
constexpr int kExitUsage = 64;
constexpr int kExitSchema = 65;
constexpr int kExitUndecided = 70;
constexpr int kExitNoHypothesis = 71;
constexpr int kExitApproximation = 72;
constexpr int kExitPrecision = 73;
constexpr int kExitDomain = 74;

struct Output {
    bool timing = false;
    std::string out_path;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void emit_report(const Output& output, const std::string& command, json config, json payload) {
    json report;
    report["schema"] = ecl::kReportSchema;
    report["command"] = command;
    report["config"] = std::move(config);
    report["payload"] = std::move(payload);
    if (output.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - output.start;
        report["duration_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!output.out_path.empty()) {
        std::ofstream out(output.out_path);
        if (!out) throw ecl::DomainError("cannot write " + output.out_path);
        out << text;
    }
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) throw ecl::DomainError("empty index in list '" + text + "'");
        if (piece.find_first_not_of("0123456789") != std::string::npos)
            throw ecl::DomainError("bad index '" + piece + "'");
        out.push_back(std::stoull(piece));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ecl::DomainError("bad coefficient '" + piece + "'");
        }
    }
    if (out.empty()) throw ecl::DomainError("empty coefficient list");
    return out;
}

json verdict_entry(const ecl::Verdict v, unsigned decided_at) {
    return {{"verdict", ecl::verdict_str(v)}, {"decided_at", decided_at}};
}

std::string error_field(const ecl::TrialRecord& rec) {
    if (rec.error_exact) return ecl::rational_str(rec.error);
    std::ostringstream out;
    out << rec.error_estimate;
    return out.str();
}

// ---- encode ----------------------------------------------------------------

struct EncodeArgs {
    std::string class_path;
    std::size_t index = 0;
    std::vector<std::string> pairs;
    std::vector<std::string> points;
    unsigned bits = 16;
};

int run_encode(const EncodeArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    const ecl::Concept& chosen = catalog.cls.at(args.index);
    json decisions = json::array();
    for (const std::string& pair : args.pairs) {
        const auto at = pair.find('@');
        if (at == std::string::npos)
            throw ecl::DomainError("node/stage pair must look like 01@3, got '" + pair + "'");
        const ecl::BitWord node(pair.substr(0, at));
        const std::string stage_text = pair.substr(at + 1);
        if (stage_text.empty() || stage_text.find_first_not_of("0123456789") != std::string::npos)
            throw ecl::DomainError("bad stage in '" + pair + "'");
        const ecl::Stage stage = static_cast<ecl::Stage>(std::stoul(stage_text));
        const ecl::NodeStatus status = ecl::node_status(chosen.tree(), node, stage);
        decisions.push_back({{"node", node.str()},
                             {"stage", stage},
                             {"status", status == ecl::NodeStatus::Included ? "included"
                                                                            : "excluded"}});
    }
    json encodings = json::array();
    for (const std::string& text : args.points) {
        const ecl::PointGen p = ecl::PointGen::parse(text);
        encodings.push_back({{"point", p.description()},
                             {"canonical", p.canonical_key()},
                             {"prefix", p.prefix(args.bits).str()}});
    }
    json config{{"class", args.class_path}, {"index", args.index}, {"bits", args.bits}};
    json payload{{"concept", chosen.label()}, {"decisions", std::move(decisions)}};
    if (!encodings.empty()) payload["encodings"] = std::move(encodings);
    emit_report(output, "encode", std::move(config), std::move(payload));
    return 0;
}

// ---- shatter / vc ----------------------------------------------------------

struct ShatterArgs {
    std::string class_path;
    std::string pool_path;
    std::string subset_text;
    std::size_t prefix = 0;  // 0 -> emitted size
    unsigned budget = 64;
};

int run_shatter(const ShatterArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    const ecl::WitnessPool pool = ecl::load_pool(args.pool_path);
    std::vector<std::size_t> subset;
    if (args.subset_text.empty()) {
        for (std::size_t i = 0; i < pool.size(); ++i) subset.push_back(i);
    } else {
        subset = parse_index_list(args.subset_text);
    }
    const std::size_t prefix = args.prefix ? args.prefix : catalog.cls.emitted();
    const ecl::ShatterReport report =
        ecl::shatter_count(catalog.cls, prefix, pool, subset, args.budget);
    json traces = json::array();
    for (std::uint64_t t : report.traces) traces.push_back(t);
    json config{{"class", args.class_path},
                {"pool", args.pool_path},
                {"subset", report.subset},
                {"prefix", prefix},
                {"budget", args.budget}};
    json payload{{"realized", report.realized},
                 {"full", report.realized == (std::uint64_t{1} << report.subset.size())},
                 {"traces", std::move(traces)}};
    emit_report(output, "shatter", std::move(config), std::move(payload));
    return 0;
}

struct VcArgs {
    std::string class_path;
    std::string pool_path;
    std::size_t d = 0;
    std::size_t prefix = 0;
    unsigned budget = 64;
};

int run_vc(const VcArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    const ecl::WitnessPool pool = ecl::load_pool(args.pool_path);
    const std::size_t prefix = args.prefix ? args.prefix : catalog.cls.emitted();
    const ecl::VcSearchResult result =
        ecl::vc_lower_bound(catalog.cls, prefix, pool, args.d, args.budget);
    json config{{"class", args.class_path},
                {"pool", args.pool_path},
                {"d", args.d},
                {"prefix", prefix},
                {"budget", args.budget}};
    json payload{{"found", result.found},
                 {"witness", result.witness},
                 {"shatter_counts",
                  {{"best_realized", result.best_realized},
                   {"want", std::uint64_t{1} << args.d},
                   {"subsets_searched", result.subsets_searched}}}};
    emit_report(output, "vc", std::move(config), std::move(payload));
    return 0;
}

// ---- pac ---------------------------------------------------------------

struct PacArgs {
    std::string class_path;
    std::string dist_path;
    std::size_t target = 0;
    std::string eps = "1/5";
    std::string delta = "1/5";
    std::uint64_t d = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t prefix = 0;
    unsigned budget = 64;
    unsigned workers = 1;
    std::uint64_t mc_samples = 20000;
    std::string format = "json";
};

int run_pac(const PacArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    const ecl::Distribution dist = ecl::load_distribution(args.dist_path);
    const ecl::PacParams params{ecl::parse_rational(args.eps), ecl::parse_rational(args.delta)};
    const std::size_t prefix = args.prefix ? args.prefix : catalog.cls.emitted();
    const ecl::PacReport report =
        ecl::pac_experiment(catalog.cls, prefix, args.target, dist, params, args.d, args.trials,
                            args.seed, args.budget, args.workers, args.mc_samples);
    if (args.format == "csv") {
        std::ostringstream csv;
        csv << "trial,seed,hypothesis,success,aborted,error\n";
        for (const ecl::TrialRecord& rec : report.records)
            csv << rec.trial << "," << rec.seed << "," << rec.hypothesis << ","
                << (rec.success ? 1 : 0) << "," << (rec.aborted ? 1 : 0) << ","
                << error_field(rec) << "\n";
        std::cout << csv.str();
        if (!output.out_path.empty()) {
            std::ofstream out(output.out_path);
            if (!out) throw ecl::DomainError("cannot write " + output.out_path);
            out << csv.str();
        }
        return 0;
    }
    json trials = json::array();
    for (const ecl::TrialRecord& rec : report.records) {
        json t{{"trial", rec.trial},
               {"seed", rec.seed},
               {"hypothesis", rec.hypothesis},
               {"success", rec.success},
               {"aborted", rec.aborted},
               {"error", error_field(rec)}};
        trials.push_back(std::move(t));
    }
    json config{{"class", args.class_path},
                {"dist", args.dist_path},
                {"target", args.target},
                {"eps", ecl::rational_str(params.eps)},
                {"delta", ecl::rational_str(params.delta)},
                {"d", args.d},
                {"trials", args.trials},
                {"seed", args.seed},
                {"prefix", prefix},
                {"budget", args.budget},
                {"mc_samples", args.mc_samples}};
    json payload{{"success_rate", ecl::rational_str(report.success_rate)},
                 {"success_rate_value", report.success_rate.convert_to<double>()},
                 {"successes", report.successes},
                 {"aborted", report.aborted},
                 {"m_used", report.m_used},
                 {"trials", std::move(trials)}};
    emit_report(output, "pac", std::move(config), std::move(payload));
    return 0;
}

// ---- transversal -------------------------------------------------------

struct TransversalArgs {
    std::string mode = "check";
    std::string class_path;
    std::string dist_path;
    std::string eps = "1/4";
    std::vector<std::string> xs;
    std::vector<std::string> ys;
    unsigned budget = 64;
};

int run_transversal(const TransversalArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    const ecl::Distribution dist = ecl::load_distribution(args.dist_path);
    const ecl::Rational eps = ecl::parse_rational(args.eps);
    std::vector<ecl::PointGen> xs, ys;
    for (const std::string& text : args.xs) xs.push_back(ecl::PointGen::parse(text));
    for (const std::string& text : args.ys) ys.push_back(ecl::PointGen::parse(text));
    const std::vector<ecl::Concept>& concepts = catalog.cls.concepts();
    bool result = false;
    if (args.mode == "check") {
        result = ecl::transversal_check(xs, concepts, dist, eps, args.budget);
    } else if (args.mode == "q") {
        result = ecl::q_membership(xs, concepts, dist, eps, args.budget);
    } else if (args.mode == "j") {
        result = ecl::j_membership(xs, ys, concepts, dist, eps, args.budget);
    } else {
        throw ecl::DomainError("mode must be check, q, or j");
    }
    json config{{"mode", args.mode},
                {"class", args.class_path},
                {"dist", args.dist_path},
                {"eps", ecl::rational_str(eps)},
                {"x", args.xs},
                {"y", args.ys},
                {"budget", args.budget}};
    emit_report(output, "transversal", std::move(config), {{"result", result}});
    return 0;
}

// ---- rationalize ---------------------------------------------------------

struct RationalizeArgs {
    std::string a_text;
    double b = 0;
    std::string dist_path;
    std::string eps = "1/100";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

int run_rationalize(const RationalizeArgs& args, const Output& output) {
    const std::vector<double> a = parse_double_list(args.a_text);
    const ecl::Distribution dist = ecl::load_distribution(args.dist_path);
    const ecl::Rational eps = ecl::parse_rational(args.eps);
    const ecl::RationalizeReport report =
        ecl::rationalize_hyperplane(a, args.b, dist, eps, args.samples, args.seed, args.workers);
    json coeffs = json::array();
    for (const ecl::Rational& c : report.result.a) coeffs.push_back(ecl::rational_str(c));
    json config{{"a", args.a_text},
                {"b", args.b},
                {"dist", args.dist_path},
                {"eps", ecl::rational_str(eps)},
                {"samples", args.samples},
                {"seed", args.seed}};
    json payload{{"a", std::move(coeffs)},
                 {"b", ecl::rational_str(report.result.b)},
                 {"denominator_log2", report.denominator_log2},
                 {"estimate", report.estimate},
                 {"stderr_bound", report.stderr_bound},
                 {"samples", report.samples}};
    emit_report(output, "rationalize", std::move(config), std::move(payload));
    return 0;
}

// ---- construct -----------------------------------------------------------

struct ConstructArgs {
    std::string predicate = "builtin:true";
    std::uint64_t n = 0;
    std::optional<std::uint64_t> param;
    ecl::Stage horizon = 4;
    unsigned budget = 0;
    bool profile = false;
    std::string catalog_out;
};

std::string cache_key(const ConstructArgs& args, const std::string& spec) {
    std::string key = "construct-" + spec + "-n" + std::to_string(args.n) + "-h" +
                      std::to_string(args.horizon) + "-b" + std::to_string(args.budget) +
                      (args.profile ? "-p1" : "-p0");
    for (char& c : key)
        if (c == ':' || c == '/') c = '_';
    return key + ".json";
}

int run_construct(const ConstructArgs& args, const Output& output) {
    auto pred = std::make_shared<const ecl::PiThreePredicate>(
        ecl::PiThreePredicate::parse(args.predicate, args.n));
    // --param is sugar for builtin:NAME:PARAM
    if (args.param) {
        if (pred->param())
            throw ecl::DomainError("parameter given twice (inline and --param)");
        pred = std::make_shared<const ecl::PiThreePredicate>(
            ecl::PiThreePredicate::builtin(pred->name(), args.n, args.param));
    }

    json report_payload;
    json config{{"R", pred->spec_string()},
                {"n", args.n},
                {"horizon", args.horizon},
                {"budget", args.budget},
                {"profile", args.profile}};

    const char* cache_dir = std::getenv("ECL_CACHE_DIR");
    std::filesystem::path cache_path;
    if (cache_dir && *cache_dir) {
        cache_path = std::filesystem::path(cache_dir) / cache_key(args, pred->spec_string());
        if (std::filesystem::exists(cache_path)) {
            report_payload = ecl::load_json(cache_path.string());
        }
    }

    if (report_payload.is_null()) {
        const ecl::ConstructionRun run =
            ecl::run_construction(pred, args.horizon, args.budget);
        json treatments = json::array();
        for (const ecl::TreatmentRecord& r : run.treatments) {
            json t{{"t", r.t},
                   {"k", r.k},
                   {"emit_stage", r.emit_stage},
                   {"slot_lo", r.slot_lo},
                   {"slot_hi", r.slot_hi},
                   {"live_at_horizon", r.live_at_horizon}};
            if (r.trunc_stage) t["trunc_stage"] = *r.trunc_stage;
            json witnesses = json::array();
            for (const ecl::PointGen& w : r.witnesses) witnesses.push_back(w.description());
            t["witnesses"] = std::move(witnesses);
            treatments.push_back(std::move(t));
        }
        json stabilized;
        for (const auto& [t, stable] : run.stabilized) stabilized[std::to_string(t)] = stable;
        report_payload = {{"emitted", run.cls.emitted()},
                          {"treatments", std::move(treatments)},
                          {"stabilized", std::move(stabilized)},
                          {"witnesses_disjoint", ecl::verify_disjoint_witnesses(run.cls)},
                          {"prefix_agreement", ecl::verify_prefix_agreement(run.treatments)},
                          {"catalog", ecl::catalog_to_json(run.cls, run.context)}};
        if (args.profile) {
            json profile = json::array();
            for (const ecl::GrowthEntry& e : ecl::vc_growth_profile(run)) {
                profile.push_back({{"t", e.t},
                                   {"k", e.k},
                                   {"stabilized", e.stabilized},
                                   {"shattered", e.shattered}});
            }
            report_payload["profile"] = std::move(profile);
        }
        if (!cache_path.empty()) {
            std::filesystem::create_directories(cache_path.parent_path());
            ecl::save_json(cache_path.string(), report_payload);
        }
    }

    if (!args.catalog_out.empty())
        ecl::save_json(args.catalog_out, report_payload.at("catalog"));
    emit_report(output, "construct", std::move(config), std::move(report_payload));
    return 0;
}

// ---- replace ---------------------------------------------------------------

struct ReplaceArgs {
    std::string class_path;
    std::string indices_text;
    std::string point_text;
    std::string bits_text;
    unsigned precision = 48;
};

int run_replace(const ReplaceArgs& args, const Output& output) {
    const ecl::CatalogFile catalog = ecl::load_catalog(args.class_path);
    std::vector<ecl::Concept> concepts;
    if (args.indices_text.empty()) {
        concepts = catalog.cls.concepts();
    } else {
        for (std::size_t i : parse_index_list(args.indices_text))
            concepts.push_back(catalog.cls.at(i));
    }
    if (args.point_text.empty() == args.bits_text.empty())
        throw ecl::DomainError("give exactly one of --point and --bits");
    std::string source_desc;
    const ecl::ReplacementOutcome outcome = [&]() -> ecl::ReplacementOutcome {
        if (!args.point_text.empty()) {
            const ecl::PointGen y = ecl::PointGen::parse(args.point_text);
            source_desc = y.description();
            return ecl::computable_replacement(y, concepts, args.precision);
        }
        const ecl::ExternalBits y(args.bits_text);
        source_desc = y.display();
        return ecl::computable_replacement(y, concepts, args.precision);
    }();
    json agreements = json::array();
    for (const ecl::ReplacementEntry& e : outcome.agreements) {
        json entry = verdict_entry(e.verdict, e.decided_at);
        entry["concept"] = e.concept_label;
        agreements.push_back(std::move(entry));
    }
    json config{{"class", args.class_path},
                {"indices", args.indices_text},
                {"source", source_desc},
                {"precision", args.precision}};
    json payload{{"point", outcome.point.description()},
                 {"boundary_fallback", outcome.boundary_fallback},
                 {"agreements", std::move(agreements)}};
    emit_report(output, "replace", std::move(config), std::move(payload));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-c.e. concept classes: encoding, shattering, learning"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from a TOML/INI file (flags win)");

    Output output;
    app.add_flag("--timing", output.timing, "add wall-clock duration to the report");
    app.add_option("--out", output.out_path, "also write the report (or CSV) to this file");

    EncodeArgs encode_args;
    CLI::App* cmd_encode = app.add_subcommand("encode", "tree decisions for (node, stage) pairs");
    cmd_encode->add_option("--class", encode_args.class_path, "concept catalog")->required();
    cmd_encode->add_option("--index", encode_args.index, "concept slot (default 0)");
    cmd_encode->add_option("--pair", encode_args.pairs, "node@stage, e.g. 0110@4 (repeatable)");
    cmd_encode->add_option("--point", encode_args.points, "point generator to expand (repeatable)");
    cmd_encode->add_option("--bits", encode_args.bits, "prefix length for --point expansions");

    ShatterArgs shatter_args;
    CLI::App* cmd_shatter = app.add_subcommand("shatter", "trace count over a pool subset");
    cmd_shatter->add_option("--class", shatter_args.class_path, "concept catalog")->required();
    cmd_shatter->add_option("--pool", shatter_args.pool_path, "witness pool")->required();
    cmd_shatter->add_option("--subset", shatter_args.subset_text,
                            "comma-separated pool indices (default: all)");
    cmd_shatter->add_option("--prefix", shatter_args.prefix,
                            "concepts searched (default: whole catalog)");
    cmd_shatter->add_option("--budget", shatter_args.budget, "decision budget (default 64)");

    VcArgs vc_args;
    CLI::App* cmd_vc = app.add_subcommand("vc", "search for a shattered d-subset");
    cmd_vc->add_option("--class", vc_args.class_path, "concept catalog")->required();
    cmd_vc->add_option("--pool", vc_args.pool_path, "witness pool")->required();
    cmd_vc->add_option("--d", vc_args.d, "subset size to shatter")->required();
    cmd_vc->add_option("--prefix", vc_args.prefix, "concepts searched (default: whole catalog)");
    cmd_vc->add_option("--budget", vc_args.budget, "decision budget (default 64)");

    PacArgs pac_args;
    CLI::App* cmd_pac = app.add_subcommand("pac", "seeded (eps, delta) learning trials");
    cmd_pac->add_option("--class", pac_args.class_path, "concept catalog")->required();
    cmd_pac->add_option("--dist", pac_args.dist_path, "sampling distribution")->required();
    cmd_pac->add_option("--target", pac_args.target, "target concept slot")->required();
    cmd_pac->add_option("--eps", pac_args.eps, "accuracy, rational in (0,1/2)");
    cmd_pac->add_option("--delta", pac_args.delta, "confidence, rational in (0,1/2)");
    cmd_pac->add_option("--d", pac_args.d, "certified VC lower bound for sample sizing")
        ->required();
    cmd_pac->add_option("--trials", pac_args.trials, "number of trials")->required();
    cmd_pac->add_option("--seed", pac_args.seed, "master seed")->required();
    cmd_pac->add_option("--prefix", pac_args.prefix, "hypothesis slots (default: whole catalog)");
    cmd_pac->add_option("--budget", pac_args.budget, "decision budget (default 64)");
    cmd_pac->add_option("--workers", pac_args.workers, "worker threads (output-invariant)");
    cmd_pac->add_option("--mc-samples", pac_args.mc_samples,
                        "Monte Carlo samples for non-finite error mass");
    cmd_pac->add_option("--format", pac_args.format, "json (default) or csv");

    TransversalArgs tr_args;
    CLI::App* cmd_tr = app.add_subcommand("transversal", "eps-transversal predicates");
    cmd_tr->add_option("--mode", tr_args.mode, "check, q, or j");
    cmd_tr->add_option("--class", tr_args.class_path, "concept catalog")->required();
    cmd_tr->add_option("--dist", tr_args.dist_path, "finite-support distribution")->required();
    cmd_tr->add_option("--eps", tr_args.eps, "mass threshold, rational in (0,1)");
    cmd_tr->add_option("--x", tr_args.xs, "point generator (repeatable)");
    cmd_tr->add_option("--y", tr_args.ys, "second tuple for mode j (repeatable)");
    cmd_tr->add_option("--budget", tr_args.budget, "decision budget (default 64)");

    RationalizeArgs rat_args;
    CLI::App* cmd_rat = app.add_subcommand("rationalize", "certified rational halfspace rounding");
    cmd_rat->add_option("--a", rat_args.a_text, "comma-separated coefficients")->required();
    cmd_rat->add_option("--b", rat_args.b, "offset")->required();
    cmd_rat->add_option("--dist", rat_args.dist_path, "sampling distribution")->required();
    cmd_rat->add_option("--eps", rat_args.eps, "mass tolerance, rational in (0,1]");
    cmd_rat->add_option("--samples", rat_args.samples, "Monte Carlo samples per attempt");
    cmd_rat->add_option("--seed", rat_args.seed, "master seed")->required();
    cmd_rat->add_option("--workers", rat_args.workers, "worker threads (output-invariant)");

    ConstructArgs con_args;
    CLI::App* cmd_con = app.add_subcommand("construct", "stagewise witness-block class");
    cmd_con->add_option("--R", con_args.predicate,
                        "predicate, e.g. builtin:even or builtin:threshold:5")
        ->required();
    cmd_con->add_option("--n", con_args.n, "predicate parameter n");
    std::uint64_t param_value = 0;
    CLI::Option* param_opt =
        cmd_con->add_option("--param", param_value, "builtin parameter (threshold bound)");
    cmd_con->add_option("--horizon", con_args.horizon, "stages to run")->required();
    cmd_con->add_option("--budget", con_args.budget,
                        "oracle budget for truncation search (default 2*horizon+8)");
    cmd_con->add_flag("--profile", con_args.profile, "add the per-level shatter profile");
    cmd_con->add_option("--catalog-out", con_args.catalog_out,
                        "write the emitted catalog to this file");

    ReplaceArgs rep_args;
    CLI::App* cmd_rep = app.add_subcommand("replace", "computable stand-in for a point");
    cmd_rep->add_option("--class", rep_args.class_path, "concept catalog")->required();
    cmd_rep->add_option("--indices", rep_args.indices_text,
                        "comma-separated concept slots (default: all)");
    cmd_rep->add_option("--point", rep_args.point_text, "finitely described source");
    cmd_rep->add_option("--bits", rep_args.bits_text, "opaque bit-string source");
    cmd_rep->add_option("--precision", rep_args.precision, "certificate scan depth (default 48)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (param_opt->count() > 0) con_args.param = param_value;

    try {
        if (*cmd_encode) return run_encode(encode_args, output);
        if (*cmd_shatter) return run_shatter(shatter_args, output);
        if (*cmd_vc) return run_vc(vc_args, output);
        if (*cmd_pac) return run_pac(pac_args, output);
        if (*cmd_tr) return run_transversal(tr_args, output);
        if (*cmd_rat) return run_rationalize(rat_args, output);
        if (*cmd_con) return run_construct(con_args, output);
        if (*cmd_rep) return run_replace(rep_args, output);
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const ecl::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const ecl::UndecidedMembership& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const ecl::NoConsistentHypothesis& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoHypothesis;
    } catch (const ecl::ApproximationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitApproximation;
    } catch (const ecl::PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const ecl::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
