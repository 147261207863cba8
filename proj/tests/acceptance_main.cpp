// Acceptance gate: runs every criterion of the delivered component end to
// end, each against its stated tolerance and wall-clock limit, and prints
// one [PASS]/[FAIL] line per criterion.  Exits nonzero when any fail.
//
// Usage: acceptance_main <path-to-cli-binary>

#include "ecl/cantor.hpp"
#include "ecl/catalog.hpp"
#include "ecl/concepts.hpp"
#include "ecl/construction.hpp"
#include "ecl/errors.hpp"
#include "ecl/pac.hpp"
#include "ecl/pi01.hpp"
#include "ecl/rational.hpp"
#include "ecl/vc.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ecl;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

int g_failures = 0;

void run_criterion(int n, const char* what, double limit_s,
                   const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d — %s (%.2f s, limit %.0f s)%s%s%s\n", pass ? "PASS" : "FAIL",
                n, what, secs, limit_s, o.detail.empty() ? "" : ": ", o.detail.c_str(),
                !in_time ? " [over time limit]" : "");
    std::fflush(stdout);
}

Rational rat(long p, long q) { return Rational(p) / q; }

Concept halfplane(long ax, long ay, long bnum, long bden) {
    return halfspace_tree(RationalHalfspace{{Rational(ax), Rational(ay)}, rat(bnum, bden), true});
}

Concept interval(const Rational& lo, const Rational& hi) {
    return interval_tree(RationalInterval{lo, hi});
}

// ---- criterion 1: half-plane VC dimension --------------------------------

Outcome halfplane_vc() {
    // 5x5 grid of rational points; every threshold is an odd multiple of
    // 1/12 so no grid point ever lies on a boundary.
    std::vector<PointGen> pts;
    for (long i = 1; i <= 5; ++i)
        for (long j = 1; j <= 5; ++j)
            pts.push_back(PointGen::rational_point({rat(i, 6), rat(j, 6)}));
    WitnessPool pool(std::move(pts), 64);

    std::vector<Concept> cs;
    // eight half-planes realizing every subset of the triangle
    // (1/6,1/6), (5/6,1/6), (3/6,5/6)
    cs.push_back(halfplane(1, 0, 1, 12));     // {}
    cs.push_back(halfplane(1, 1, 7, 12));     // {P1}
    cs.push_back(halfplane(-1, 1, -7, 12));   // {P2}
    cs.push_back(halfplane(0, -1, -9, 12));   // {P3}
    cs.push_back(halfplane(0, 1, 5, 12));     // {P1,P2}
    cs.push_back(halfplane(1, 0, 7, 12));     // {P1,P3}
    cs.push_back(halfplane(-1, 0, -5, 12));   // {P2,P3}
    cs.push_back(halfplane(1, 1, 25, 12));    // {P1,P2,P3}
    // axis and diagonal sweeps to pad the catalog past 64
    for (long k = 1; k <= 11; k += 2) {
        cs.push_back(halfplane(1, 0, k, 12));
        cs.push_back(halfplane(-1, 0, -k, 12));
        cs.push_back(halfplane(0, 1, k, 12));
        cs.push_back(halfplane(0, -1, -k, 12));
    }
    for (long k = 1; k <= 23; k += 2) cs.push_back(halfplane(1, 1, k, 12));
    for (long k = -11; k <= 11; k += 2) cs.push_back(halfplane(1, -1, k, 12));
    for (long k = 1; k <= 35; k += 4) cs.push_back(halfplane(1, 2, k, 12));
    const std::size_t count = cs.size();
    ConceptClass cls(std::move(cs));

    const VcSearchResult r3 = vc_lower_bound(cls, cls.emitted(), pool, 3, 64);
    const VcSearchResult r4 = vc_lower_bound(cls, cls.emitted(), pool, 4, 64);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%zu half-planes, 25-point grid: 3-set %sfound, 4-set %sfound "
                  "(%llu subsets searched)",
                  count, r3.found ? "" : "NOT ", r4.found ? "" : "not ",
                  static_cast<unsigned long long>(r4.subsets_searched));
    return {count >= 64 && r3.found && !r4.found, buf};
}

// ---- criterion 2: interval VC dimension -----------------------------------

Outcome interval_vc() {
    std::vector<PointGen> pts;
    for (long i = 0; i < 8; ++i) pts.push_back(PointGen::parse("rat1:" + rational_str(rat(2 * i + 1, 16))));
    WitnessPool pool(std::move(pts), 64);

    std::vector<Concept> cs;
    cs.push_back(empty_concept());
    cs.push_back(full_concept());
    for (long a = 0; a <= 8; ++a)
        for (long b = a + 1; b <= 8; ++b) cs.push_back(interval(rat(a, 8), rat(b, 8)));
    ConceptClass cls(std::move(cs));

    const VcSearchResult r2 = vc_lower_bound(cls, cls.emitted(), pool, 2, 64);
    const VcSearchResult r3 = vc_lower_bound(cls, cls.emitted(), pool, 3, 64);

    // brute-force trace oracle: direct decide_point per (concept, point)
    const std::vector<std::uint64_t> fast =
        membership_traces(cls, 0, cls.emitted(), pool, 64);
    bool traces_match = fast.size() == cls.emitted();
    for (std::size_t k = 0; traces_match && k < cls.emitted(); ++k) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (decide_point(cls.at(k), pool.points[i], 64).verdict == Verdict::In)
                mask |= std::uint64_t{1} << i;
        traces_match = mask == fast[k];
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "38 intervals, 8-point pool: 2-set %sfound, 3-set %sfound, "
                  "traces %s the brute-force oracle",
                  r2.found ? "" : "NOT ", r3.found ? "" : "not ",
                  traces_match ? "match" : "DIFFER FROM");
    return {r2.found && !r3.found && traces_match, buf};
}

// ---- criterion 3: randomized shatter-count equivalence ---------------------

Outcome shatter_equivalence() {
    std::mt19937_64 rng(20260816);
    int checked = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t pool_n = 4 + rng() % 9;  // 4..12
        std::vector<long> numerators(64);
        std::iota(numerators.begin(), numerators.end(), 0);
        std::shuffle(numerators.begin(), numerators.end(), rng);
        std::vector<PointGen> pts;
        for (std::size_t i = 0; i < pool_n; ++i)
            pts.push_back(
                PointGen::parse("rat1:" + rational_str(rat(2 * numerators[i] + 1, 128))));
        WitnessPool pool(std::move(pts), 64);

        const std::size_t cat_n = 1 + rng() % 64;  // 1..64
        std::vector<Concept> cs;
        for (std::size_t k = 0; k < cat_n; ++k) {
            const long a = static_cast<long>(rng() % 64);
            const long b = a + 1 + static_cast<long>(rng() % (64 - a));
            cs.push_back(interval(rat(a, 64), rat(b, 64)));
        }
        ConceptClass cls(std::move(cs));

        const std::size_t sub_n = 1 + rng() % std::min<std::size_t>(pool_n, 6);
        std::vector<std::size_t> all(pool_n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<std::size_t> subset(all.begin(), all.begin() + sub_n);
        std::sort(subset.begin(), subset.end());

        const ShatterReport rep = shatter_count(cls, cls.emitted(), pool, subset, 64);

        std::set<std::uint64_t> masks;
        for (std::size_t k = 0; k < cls.emitted(); ++k) {
            std::uint64_t m = 0;
            for (std::size_t i = 0; i < subset.size(); ++i)
                if (decide_point(cls.at(k), pool.points[subset[i]], 64).verdict == Verdict::In)
                    m |= std::uint64_t{1} << i;
            masks.insert(m);
        }
        std::vector<std::uint64_t> want(masks.begin(), masks.end());
        if (rep.realized != masks.size() || rep.traces != want) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "instance %d disagrees with the brute-force oracle",
                          inst);
            return {false, buf};
        }
        ++checked;
    }
    return {checked == 100, "100 randomized instances match the brute-force bit-vector oracle"};
}

// ---- criterion 4: formula trees vs truth tables ----------------------------

struct Ast {
    char op;  // 'v' leaf, '!' not, '&', '|'
    unsigned var{0};
    std::unique_ptr<Ast> l, r;
};

std::unique_ptr<Ast> random_ast(std::mt19937_64& rng, int depth) {
    const std::uint64_t pick = rng() % 10;
    if (depth >= 4 || pick < 3) {
        auto leaf = std::make_unique<Ast>();
        leaf->op = 'v';
        leaf->var = static_cast<unsigned>(rng() % 4);
        return leaf;
    }
    auto node = std::make_unique<Ast>();
    if (pick < 5) {
        node->op = '!';
        node->l = random_ast(rng, depth + 1);
    } else {
        node->op = pick < 8 ? '&' : '|';
        node->l = random_ast(rng, depth + 1);
        node->r = random_ast(rng, depth + 1);
    }
    return node;
}

bool ast_eval(const Ast& a, unsigned assignment) {
    switch (a.op) {
        case 'v': return (assignment >> a.var) & 1;
        case '!': return !ast_eval(*a.l, assignment);
        case '&': return ast_eval(*a.l, assignment) && ast_eval(*a.r, assignment);
        default: return ast_eval(*a.l, assignment) || ast_eval(*a.r, assignment);
    }
}

std::string ast_str(const Ast& a) {
    switch (a.op) {
        case 'v': return "x" + std::to_string(a.var);
        case '!': return "!(" + ast_str(*a.l) + ")";
        default: return "(" + ast_str(*a.l) + ")" + a.op + "(" + ast_str(*a.r) + ")";
    }
}

Outcome formula_truth_tables() {
    std::mt19937_64 rng(911);
    const int total = 512;
    for (int i = 0; i < total; ++i) {
        const auto ast = random_ast(rng, 0);
        const Concept fc = formula_tree(Formula::parse(ast_str(*ast)));
        for (unsigned assignment = 0; assignment < 16; ++assignment) {
            BitWord w;
            for (unsigned b = 0; b < 4; ++b) w.push_back((assignment >> b) & 1);
            const bool expect = ast_eval(*ast, assignment);
            const CellRelation rel = fc.rule()->classify(w);
            if ((rel != CellRelation::Outside) != expect ||
                rel == CellRelation::Straddles) {
                return {false, "formula '" + ast_str(*ast) + "' disagrees at depth 4"};
            }
        }
    }
    return {true, "512 random formulas over <=4 variables: depth-4 path sets equal truth tables"};
}

// ---- criterion 5: PAC experiment -------------------------------------------

Outcome pac_band() {
    std::vector<PointGen> atoms;
    std::vector<Rational> weights;
    for (long i = 0; i < 16; ++i) {
        atoms.push_back(PointGen::parse("rat1:" + rational_str(rat(2 * i + 1, 32))));
        weights.push_back(rat(1, 16));
    }
    const Distribution D = Distribution::finite_support(std::move(atoms), std::move(weights));

    std::vector<Concept> cs;
    std::size_t target = 0;
    for (long a = 0; a <= 8; ++a)
        for (long b = a + 1; b <= 8; ++b) {
            if (a == 2 && b == 6) target = cs.size();
            cs.push_back(interval(rat(a, 8), rat(b, 8)));
        }
    ConceptClass cls(std::move(cs));

    const PacParams params{rat(1, 5), rat(1, 5)};
    const PacReport rep =
        pac_experiment(cls, cls.emitted(), target, D, params, 2, 200, 1729, 64);
    const double rate = rep.success_rate.convert_to<double>();
    const double threshold = 0.8 - 3.0 * std::sqrt(0.2 * 0.8 / 200.0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "m=%llu, success rate %.3f >= band %.5f, %llu aborted",
                  static_cast<unsigned long long>(rep.m_used), rate, threshold,
                  static_cast<unsigned long long>(rep.aborted));
    return {rate >= threshold && rep.aborted == 0 && rep.m_used == 210, buf};
}

// ---- criterion 6: hyperplane rationalization -------------------------------

Outcome rationalize_cases() {
    const long double quarter_pi = 0.78539816339744830961L;
    const Distribution uni1 = Distribution::product_bernoulli(rat(1, 2), 48);
    const RationalizeReport r1 = rationalize_hyperplane(
        {1.0}, static_cast<double>(quarter_pi), uni1, rat(1, 100), 100000, 4242, 4);
    const long double b1 = r1.result.b.convert_to<long double>();
    const bool one_d = std::fabs(b1 - quarter_pi) < 0.01L && r1.result.a.size() == 1 &&
                       r1.result.a[0] == 1;

    const Distribution uni2 = Distribution::product_bernoulli(rat(1, 2), 64);
    const RationalizeReport r2 =
        rationalize_hyperplane({1.0, 1.0}, 0.9, uni2, rat(1, 100), 100000, 777, 4);
    // independent Monte Carlo over fresh uniform points, exact on the
    // rounded rational side
    std::mt19937_64 rng(20121);
    const std::uint64_t N = 100000;
    std::uint64_t differ = 0;
    for (std::uint64_t s = 0; s < N; ++s) {
        const std::uint64_t ux = rng() >> 24, uy = rng() >> 24;  // 40-bit fractions
        const double x = static_cast<double>(ux) * 0x1p-40;
        const double y = static_cast<double>(uy) * 0x1p-40;
        const bool orig = x + y <= 0.9;
        const Rational rx = Rational(ux) / Rational(Int(1) << 40);
        const Rational ry = Rational(uy) / Rational(Int(1) << 40);
        const bool rounded = r2.result.a[0] * rx + r2.result.a[1] * ry <= r2.result.b;
        if (orig != rounded) ++differ;
    }
    const double est = static_cast<double>(differ) / static_cast<double>(N);
    const double sigma = std::sqrt(std::max(est * (1.0 - est), 1e-12) / static_cast<double>(N));
    const bool two_d = est < 0.01 + 3.0 * sigma;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "1-d |b - pi/4| = %.5Lf < 0.01; 2-d independent MC estimate %.5f < eps + 3*sigma "
                  "= %.5f",
                  std::fabs(b1 - quarter_pi), est, 0.01 + 3.0 * sigma);
    return {one_d && two_d, buf};
}

// ---- criterion 7: construction dichotomy -----------------------------------

PredicatePtr builtin_pred(const char* spec) {
    return std::make_shared<const PiThreePredicate>(PiThreePredicate::parse(spec, 0));
}

Outcome construction_dichotomy() {
    for (const Stage h : {Stage{4}, Stage{8}, Stage{16}}) {
        const ConstructionRun run = run_construction(builtin_pred("builtin:even"), h);
        const auto profile = vc_growth_profile(run);
        if (profile.empty()) return {false, "no treatments at horizon " + std::to_string(h)};
        for (const GrowthEntry& e : profile)
            if (!e.stabilized || !e.shattered)
                return {false, "even: level " + std::to_string(e.t) +
                                   " not shattered despite stabilizing (horizon " +
                                   std::to_string(h) + ")"};
    }
    const ConstructionRun dying = run_construction(builtin_pred("builtin:y-le-x"), 8);
    for (std::size_t i = 0; i < dying.cls.emitted(); ++i)
        if (dying.cls.at(i).rule()->classify(BitWord()) != CellRelation::Outside)
            return {false, "a finitely-true predicate left a nonempty concept"};
    for (const GrowthEntry& e : vc_growth_profile(dying))
        if (e.stabilized || e.shattered)
            return {false, "a finitely-true predicate produced a stabilized or shattered level"};
    return {true,
            "horizons 4/8/16: every stabilized level shattered; finitely-true predicate left "
            "510 empty concepts, none shattered"};
}

// ---- criterion 8: witness hygiene -------------------------------------------

Outcome witness_hygiene() {
    const std::array<const char*, 5> specs = {"builtin:true", "builtin:even", "builtin:y-le-x",
                                              "builtin:threshold:5", "builtin:false"};
    for (const char* spec : specs) {
        const ConstructionRun run = run_construction(builtin_pred(spec), 8);
        if (!verify_disjoint_witnesses(run.cls))
            return {false, std::string(spec) + ": witnesses of distinct treatments collide"};
        if (!verify_prefix_agreement(run.treatments))
            return {false, std::string(spec) + ": prefix agreement fails"};
        // exhaustive cross-check straight off the records
        for (const TreatmentRecord& t1 : run.treatments)
            for (const TreatmentRecord& t2 : run.treatments)
                for (const PointGen& w1 : t1.witnesses)
                    for (const PointGen& w2 : t2.witnesses) {
                        const std::uint64_t lo = std::min(t1.t, t2.t);
                        for (std::uint64_t q = 0; q < lo; ++q)
                            if (w1.bit(q) != w2.bit(q))
                                return {false,
                                        std::string(spec) + ": witnesses disagree below min level"};
                    }
    }
    return {true, "all five built-in runs: disjoint witnesses, exhaustive prefix agreement"};
}

// ---- criterion 9: computable replacement ------------------------------------

Outcome replacement_contract() {
    std::mt19937_64 rng(5150);
    for (int cs = 0; cs < 50; ++cs) {
        const std::size_t k = 1 + rng() % 4;
        std::vector<Concept> concepts;
        for (std::size_t i = 0; i < k; ++i) {
            const long a = static_cast<long>(rng() % 64);
            const long b = a + 1 + static_cast<long>(rng() % (64 - a));
            concepts.push_back(interval(rat(a, 64), rat(b, 64)));
        }
        const long num = 2 * static_cast<long>(rng() % 64) + 1;  // odd 128th: off-boundary
        const PointGen y = PointGen::parse("rat1:" + rational_str(rat(num, 128)));
        std::vector<Verdict> want;
        for (const Concept& c : concepts) want.push_back(decide_point(c, y, 64).verdict);

        const ReplacementOutcome out = computable_replacement(y, concepts, 64);
        if (out.boundary_fallback) return {false, "unexpected boundary fallback"};
        if (out.agreements.size() != k) return {false, "agreement list has the wrong arity"};
        const PointGen reparsed = PointGen::parse(out.point.description());
        if (!reparsed.same_stream(out.point))
            return {false, "replacement is not finitely described"};
        for (std::size_t i = 0; i < k; ++i)
            if (decide_point(concepts[i], out.point, 64).verdict != want[i])
                return {false, "replacement disagrees with the original point"};
    }
    return {true, "50 randomized cases: finitely described, membership-agrees on every concept"};
}

// ---- criterion 10: determinism ------------------------------------------------

std::string capture(const std::string& cmd, int& exit_code) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return out;
}

Outcome determinism(const std::string& bin) {
    if (bin.empty()) return {false, "no CLI binary path given on the command line"};
    const std::string data = ECL_TEST_DATA;
    struct Case {
        std::string name;
        std::string base;   // command with a --workers hole when parallel
        bool parallel;
    };
    const std::vector<Case> cases = {
        {"pac",
         bin + " pac --class " + data + "/intervals.json --dist " + data +
             "/dist_finite.json --target 0 --d 2 --trials 8 --seed 99",
         true},
        {"rationalize",
         bin + " rationalize --a 0.5,0.25 --b 0.374 --dist " + data +
             "/dist_bernoulli.json --seed 31 --samples 20000",
         true},
        {"construct", bin + " construct --R builtin:even --horizon 6", false},
        {"vc",
         bin + " vc --class " + data + "/intervals.json --pool " + data + "/pool.json --d 2",
         false},
    };
    for (const Case& c : cases) {
        int e1 = 0, e2 = 0, e3 = 0;
        const std::string w1 = c.parallel ? c.base + " --workers 1" : c.base;
        const std::string a = capture(w1, e1);
        const std::string b = capture(w1, e2);
        if (e1 != 0 || e2 != 0 || a.empty() || a != b)
            return {false, c.name + ": repeated runs differ or failed"};
        if (c.parallel) {
            const std::string d = capture(c.base + " --workers 4", e3);
            if (e3 != 0 || d != a) return {false, c.name + ": 4-worker output differs"};
        }
    }
    return {true, "pac/rationalize/construct/vc byte-identical across reruns and worker counts"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string bin = argc > 1 ? argv[1] : "";
    std::printf("acceptance gate: %d criteria\n", 10);
    run_criterion(1, "half-plane VC dimension (3 shattered, 4 certified impossible)", 60,
                  halfplane_vc);
    run_criterion(2, "interval VC dimension against the brute-force trace oracle", 10,
                  interval_vc);
    run_criterion(3, "shatter-count oracle equivalence on 100 randomized instances", 120,
                  shatter_equivalence);
    run_criterion(4, "formula-tree path sets equal truth tables (512 formulas)", 60,
                  formula_truth_tables);
    run_criterion(5, "PAC success band at eps = delta = 1/5, d = 2, 200 trials", 120, pac_band);
    run_criterion(6, "hyperplane rationalization, 1-d closed form and 2-d Monte Carlo", 60,
                  rationalize_cases);
    run_criterion(7, "construction dichotomy across horizons 4/8/16", 60,
                  construction_dichotomy);
    run_criterion(8, "witness disjointness and prefix agreement on all built-ins", 10,
                  witness_hygiene);
    run_criterion(9, "computable replacement contract on 50 randomized cases", 30,
                  replacement_contract);
    run_criterion(10, "byte-identical reports across reruns and worker counts", 60,
                  [&bin] { return determinism(bin); });
    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
