#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ecl/concepts.hpp"
#include "ecl/errors.hpp"
#include "ecl/pac.hpp"
#include "ecl/pi01.hpp"
#include "ecl/rng.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace ecl;

namespace {

std::vector<BitWord> all_words(std::size_t max_len) {
    std::vector<BitWord> out{BitWord()};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            out.push_back(out[i].extended(0));
            out.push_back(out[i].extended(1));
        }
        begin = end;
    }
    return out;
}

// Direct recursive-descent-free evaluation for cross-checking: the same
// grammar evaluated by brute force over tokens is too circular, so the
// tables below are written out by hand.
struct TruthCase {
    const char* expr;
    unsigned vars;
    std::function<bool(const std::vector<int>&)> truth;
};

}  // namespace

TEST_CASE("formula evaluation against hand tables") {
    const std::vector<TruthCase> cases{
        {"(x0|x1)&(!x0|x2)", 3,
         [](const std::vector<int>& v) { return (v[0] || v[1]) && (!v[0] || v[2]); }},
        {"x0&!x1|x2", 3,
         [](const std::vector<int>& v) { return (v[0] && !v[1]) || v[2]; }},
        {"!(x0|x1)", 2, [](const std::vector<int>& v) { return !(v[0] || v[1]); }},
        {"!!x0", 1, [](const std::vector<int>& v) { return v[0] != 0; }},
        {"1", 0, [](const std::vector<int>&) { return true; }},
        {"0", 0, [](const std::vector<int>&) { return false; }},
        {"x3", 4, [](const std::vector<int>& v) { return v[3] != 0; }},
        {"x0 & x1 & x2 & x3", 4,
         [](const std::vector<int>& v) { return v[0] && v[1] && v[2] && v[3]; }},
    };
    for (const TruthCase& tc : cases) {
        CAPTURE(tc.expr);
        Formula f = Formula::parse(tc.expr);
        CHECK(f.num_vars() == tc.vars);
        const unsigned n = tc.vars;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> v(n);
            for (unsigned i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
            CHECK(f.eval([&](unsigned i) { return v[i]; }) == tc.truth(v));
        }
        // the printed form parses back to the same function
        Formula g = Formula::parse(f.str());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> v(n);
            for (unsigned i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
            CHECK(g.eval([&](unsigned i) { return v[i]; }) == tc.truth(v));
        }
    }
}

TEST_CASE("formula parse errors") {
    for (const char* bad : {"", "x", "(x0", "x0|", "&x1", "x0!x1", "()", "x0 x1", "y0", "x0)"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Formula::parse(bad), DomainError);
    }
}

TEST_CASE("formula cell relations") {
    Formula f = Formula::parse("(x0|x1)&(!x0|x2)");
    CHECK(formula_cell_relation(f, BitWord()) == CellRelation::Straddles);
    CHECK(formula_cell_relation(f, BitWord("0")) == CellRelation::Straddles);
    CHECK(formula_cell_relation(f, BitWord("01")) == CellRelation::Inside);   // 1&(1|x2)
    CHECK(formula_cell_relation(f, BitWord("010")) == CellRelation::Inside);
    CHECK(formula_cell_relation(f, BitWord("10")) == CellRelation::Straddles);  // reduces to x2
    CHECK(formula_cell_relation(f, BitWord("100")) == CellRelation::Outside);
    CHECK(formula_cell_relation(f, BitWord("101")) == CellRelation::Inside);
    CHECK(formula_cell_relation(f, BitWord("00")) == CellRelation::Outside);  // (0|0)&... = 0
    // resolved bits beyond the variable range never matter
    CHECK(formula_cell_relation(f, BitWord("0111111")) == CellRelation::Inside);
    // relation agrees with brute-force evaluation over all completions
    for (const BitWord& w : all_words(5)) {
        bool any_sat = false, any_unsat = false;
        for (unsigned mask = 0; mask < 8; ++mask) {
            std::vector<int> v(3);
            for (unsigned i = 0; i < 3; ++i)
                v[i] = i < w.size() ? w.bit(i) : static_cast<int>((mask >> i) & 1);
            (Formula::parse("(x0|x1)&(!x0|x2)").eval([&](unsigned i) { return v[i]; })
                 ? any_sat
                 : any_unsat) = true;
        }
        const CellRelation want = any_sat && any_unsat ? CellRelation::Straddles
                                  : any_sat            ? CellRelation::Inside
                                                       : CellRelation::Outside;
        CHECK(formula_cell_relation(f, w) == want);
    }
}

TEST_CASE("formula position caps") {
    CHECK_NOTHROW(formula_tree(Formula::parse("x19")));
    CHECK_THROWS_AS(formula_tree(Formula::parse("x20")), DomainError);
    // relation queries cap the completion space, not the parse
    Formula wide = Formula::parse("x25");
    CHECK_THROWS_AS(formula_cell_relation(wide, BitWord()), PrecisionError);
    CHECK(formula_cell_relation(wide, BitWord("00000000000000000000000000")) ==
          CellRelation::Outside);
}

TEST_CASE("interval classification is exactly the closed-cell arithmetic") {
    const std::vector<RationalInterval> ivs{
        {Rational(0), Rational(1, 2)},
        {Rational(1, 3), Rational(2, 3)},
        {Rational(1, 4), Rational(1, 4)},  // degenerate point
        {Rational(0), Rational(1)},
    };
    for (const RationalInterval& iv : ivs) {
        Concept c = interval_tree(iv);
        for (const BitWord& w : all_words(8)) {
            const CellBox cell = decode_cell(w, 1);
            const bool inside = iv.lo <= cell.lo[0] && cell.hi[0] <= iv.hi;
            const bool meets = cell.lo[0] <= iv.hi && iv.lo <= cell.hi[0];
            const CellRelation want = inside    ? CellRelation::Inside
                                      : !meets  ? CellRelation::Outside
                                                : CellRelation::Straddles;
            CHECK(c.rule()->classify(w) == want);
        }
    }
    CHECK_THROWS_AS(interval_tree({Rational(2, 3), Rational(1, 3)}), DomainError);
}

TEST_CASE("interval endpoints respect a non-unit box") {
    Box box = make_box(Rational(-1), Rational(1));
    Concept c = interval_tree({Rational(0), Rational(1, 2)}, box);
    // unit image of [0,1/2] in [-1,1) is [1/2,3/4]
    CHECK(decide_point(c, PointGen::parse("rat1:1/4@-1:1"), 16).verdict == Verdict::In);
    CHECK(decide_point(c, PointGen::parse("rat1:-1/2@-1:1"), 16).verdict == Verdict::Out);
    CHECK_THROWS_AS(interval_tree({Rational(-2), Rational(0)}, box), DomainError);
}

TEST_CASE("halfspace classification matches corner sums") {
    const std::vector<RationalHalfspace> hs{
        {{Rational(1), Rational(1)}, Rational(1), true},
        {{Rational(1), Rational(1)}, Rational(1), false},
        {{Rational(1, 2), Rational(1, 3)}, Rational(1, 4), true},
        {{Rational(-1), Rational(2)}, Rational(1, 3), true},
        {{Rational(0), Rational(0)}, Rational(0), true},   // full space
        {{Rational(0), Rational(0)}, Rational(-1), true},  // empty
    };
    for (const RationalHalfspace& h : hs) {
        Concept c = halfspace_tree(h);
        for (const BitWord& w : all_words(8)) {
            const CellBox cell = decode_cell(w, 2);
            Rational lo_sum = 0, hi_sum = 0;
            for (int i = 0; i < 2; ++i) {
                lo_sum += h.a[i] * (h.a[i] >= 0 ? cell.lo[i] : cell.hi[i]);
                hi_sum += h.a[i] * (h.a[i] >= 0 ? cell.hi[i] : cell.lo[i]);
            }
            const bool inside = h.closed ? hi_sum <= h.b : hi_sum < h.b;
            const bool misses = h.closed ? lo_sum > h.b : lo_sum >= h.b;
            const CellRelation want = inside    ? CellRelation::Inside
                                      : misses  ? CellRelation::Outside
                                                : CellRelation::Straddles;
            CHECK(c.rule()->classify(w) == want);
        }
    }
    CHECK_THROWS_AS(halfspace_tree({{}, Rational(0), true}), DomainError);
}

TEST_CASE("one-dimensional halfspace equals an interval") {
    Concept h = halfspace_tree({{Rational(1)}, Rational(1, 2), true});
    Concept iv = interval_tree({Rational(0), Rational(1, 2)});
    for (const BitWord& w : all_words(9)) CHECK(h.rule()->classify(w) == iv.rule()->classify(w));
}

TEST_CASE("polygon trees") {
    DGon triangle{{{{Rational(1), Rational(1)}, Rational(1), true},
                   {{Rational(-1), Rational(0)}, Rational(0), true},
                   {{Rational(0), Rational(-1)}, Rational(0), true}}};
    Concept c = dgon_tree(triangle);
    // stagewise exclusion is the union of the component exclusions
    std::vector<Concept> parts;
    for (const RationalHalfspace& h : triangle.sides) parts.push_back(halfspace_tree(h));
    for (const BitWord& w : all_words(8)) {
        for (Stage s : {0u, 1u, 3u, 8u}) {
            bool component_dead = false;
            for (const Concept& part : parts)
                component_dead =
                    component_dead || node_status(part.tree(), w, s) == NodeStatus::Excluded;
            CHECK((node_status(c.tree(), w, s) == NodeStatus::Excluded) == component_dead);
        }
        // classification is exact: Outside iff the clipped cell is infeasible
        const CellBox cell = decode_cell(w, 2);
        const CellRelation got = c.rule()->classify(w);
        CHECK((got == CellRelation::Outside) == !cell_meets_halfplanes(cell, triangle.sides));
        if (got == CellRelation::Inside) {
            // every corner satisfies every side
            for (const RationalHalfspace& h : triangle.sides) {
                for (int cx = 0; cx < 2; ++cx)
                    for (int cy = 0; cy < 2; ++cy) {
                        const Rational x = cx ? cell.hi[0] : cell.lo[0];
                        const Rational y = cy ? cell.hi[1] : cell.lo[1];
                        CHECK(h.a[0] * x + h.a[1] * y <= h.b);
                    }
            }
        }
    }
    // decide a few points
    CHECK(decide_point(c, PointGen::parse("rat2:1/4,1/4"), 32).verdict == Verdict::In);
    CHECK(decide_point(c, PointGen::parse("rat2:3/4,3/4"), 32).verdict == Verdict::Out);
    CHECK_THROWS_AS(dgon_tree(DGon{}), DomainError);
    DGon open_side{{{{Rational(1), Rational(0)}, Rational(1, 2), false}}};
    CHECK_THROWS_AS(dgon_tree(open_side), DomainError);
}

TEST_CASE("a thin diagonal sliver leaves dead branches but no paths") {
    // x + y <= 1 and -x - y <= -1 intersect in the closed segment x+y = 1;
    // the stagewise union-exclusion keeps cells touching the line alive.
    DGon sliver{{{{Rational(1), Rational(1)}, Rational(1), true},
                 {{Rational(-1), Rational(-1)}, Rational(-1), true}}};
    Concept c = dgon_tree(sliver);
    CHECK(c.rule()->classify(BitWord()) == CellRelation::Straddles);
    // the all-zero cell [0,1/2]^2 touches (1/2,1/2): still feasible
    CHECK(c.rule()->classify(BitWord("00")) == CellRelation::Straddles);
    // [0,1/4]^2 misses the line: certified outside, and the second
    // component's union-exclusion kills it stagewise as well
    CHECK(c.rule()->classify(BitWord("0000")) == CellRelation::Outside);
    CHECK(node_status(c.tree(), BitWord("0000"), 4) == NodeStatus::Excluded);
    // the diagonal point (1/2,1/2) lies on the segment: boundary forever
    CHECK(decide_point(c, PointGen::parse("rat2:1/2,1/2"), 48).verdict ==
          Verdict::BoundaryUnresolved);
}

TEST_CASE("explicit path sets") {
    std::vector<PointGen> pts{PointGen::parse("rat1:1/3"), PointGen::parse("ep:01|10")};
    Concept c = paths_concept(pts);
    CHECK(decide_point(c, PointGen::parse("rat1:1/3"), 8).verdict == Verdict::In);
    CHECK(decide_point(c, PointGen::parse("ep:|01"), 8).verdict == Verdict::In);  // same stream
    CHECK(decide_point(c, PointGen::parse("rat1:1/2"), 8).verdict == Verdict::Out);
    CHECK(decide_point(c, PointGen::parse("rat1:1/3"), 8).decided_at == 0);
    // classification never certifies the inside of a finite path set
    for (const BitWord& w : all_words(8)) {
        bool extends = false;
        for (const PointGen& p : pts) {
            bool match = true;
            for (std::size_t i = 0; i < w.size() && match; ++i)
                if (p.bit(i) != w.bit(i)) match = false;
            extends = extends || match;
        }
        CHECK(c.rule()->classify(w) == (extends ? CellRelation::Straddles : CellRelation::Outside));
    }
    // an opaque source can be refuted but never confirmed
    CHECK(decide_point(c, ExternalBits("11110000"), 8).verdict == Verdict::Out);
    CHECK(decide_point(c, ExternalBits("01010101"), 8).verdict == Verdict::BoundaryUnresolved);
}

TEST_CASE("truncated path sets have no members at all") {
    Concept c = paths_concept({PointGen::parse("ep:|1")}, 5);
    CHECK(c.rule()->classify(BitWord()) == CellRelation::Outside);
    CHECK(decide_point(c, PointGen::parse("ep:|1"), 16).verdict == Verdict::Out);
    // the finite tree is still visible stagewise below the cut
    CHECK(node_status(c.tree(), BitWord("111"), 3) == NodeStatus::Included);
    CHECK(node_status(c.tree(), BitWord("11111"), 4) == NodeStatus::Included);
    CHECK(node_status(c.tree(), BitWord("11111"), 5) == NodeStatus::Excluded);
    CHECK(node_status(c.tree(), BitWord("110"), 2) == NodeStatus::Included);
    CHECK(node_status(c.tree(), BitWord("110"), 3) == NodeStatus::Excluded);
}

TEST_CASE("computable replacement pads a decided cylinder with zeros") {
    std::vector<Concept> concepts{interval_tree({Rational(0), Rational(1, 2)})};
    ReplacementOutcome out = computable_replacement(ExternalBits("1101001000"), concepts, 10);
    CHECK(!out.boundary_fallback);
    CHECK(out.point.description() == "ep:11|0");
    CHECK(out.agreements.size() == 1);
    CHECK(out.agreements[0].verdict == Verdict::Out);
    // agreement: the replacement decides the same way
    CHECK(decide_point(concepts[0], out.point, 16).verdict == Verdict::Out);
}

TEST_CASE("computable replacement across several concepts") {
    std::vector<Concept> concepts{
        interval_tree({Rational(0), Rational(1, 2)}),
        interval_tree({Rational(1, 4), Rational(3, 4)}),
        formula_tree(Formula::parse("x0|x1")),
    };
    const PointGen y = PointGen::parse("rat1:1/3");
    ReplacementOutcome out = computable_replacement(y, concepts, 32);
    CHECK(!out.boundary_fallback);
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        const PointDecision want = decide_point(concepts[i], y, 32);
        const PointDecision got = decide_point(concepts[i], out.point, 32);
        CHECK(want.verdict == got.verdict);
        CHECK(out.agreements[i].verdict == want.verdict);
    }
}

TEST_CASE("replacement boundary fallback returns the described point itself") {
    std::vector<Concept> concepts{interval_tree({Rational(0), Rational(1, 2)})};
    const PointGen boundary = PointGen::parse("rat1:1/2");
    ReplacementOutcome out = computable_replacement(boundary, concepts, 24);
    CHECK(out.boundary_fallback);
    CHECK(out.point.same_stream(boundary));
    CHECK(out.agreements[0].verdict == Verdict::BoundaryUnresolved);
    // an opaque source on the same boundary cannot be replaced
    CHECK_THROWS_AS(
        computable_replacement(ExternalBits("100000000000000000000000"), concepts, 20),
        PrecisionError);
}

TEST_CASE("rationalize accepts an exactly representable hyperplane immediately") {
    Distribution mu = Distribution::finite_support(
        {PointGen::parse("rat2:1/8,1/8"), PointGen::parse("rat2:5/8,5/8")},
        {Rational(1, 2), Rational(1, 2)});
    RationalizeReport rep =
        rationalize_hyperplane({0.5, 0.25}, 0.375, mu, Rational(1, 100), 2000, 99);
    CHECK(rep.denominator_log2 == 3);
    CHECK(rep.result.a[0] == Rational(1, 2));
    CHECK(rep.result.a[1] == Rational(1, 4));
    CHECK(rep.result.b == Rational(3, 8));
    CHECK(rep.estimate == 0.0);
}

TEST_CASE("rationalize tolerance one is vacuous") {
    Distribution mu = Distribution::product_bernoulli(Rational(1, 2), 32);
    RationalizeReport rep = rationalize_hyperplane({0.3333}, 0.2, mu, Rational(1), 10, 1);
    CHECK(rep.denominator_log2 == 3);  // first denominator accepted outright
}

TEST_CASE("rationalize reports failure when every denominator disagrees") {
    // atom exactly at 3/8; the offset sits 2^-50 below it, so the double
    // comparison says outside while every rounding up to 2^-45 snaps the
    // offset back to 3/8 and says inside
    Distribution mu = Distribution::finite_support({PointGen::parse("rat1:3/8")}, {Rational(1)});
    const double b = 0.375 - std::ldexp(1.0, -50);
    CHECK_THROWS_AS(rationalize_hyperplane({1.0}, b, mu, Rational(1, 100), 500, 3),
                    ApproximationError);
}

TEST_CASE("rationalize is reproducible and worker-invariant") {
    Distribution mu = Distribution::product_bernoulli(Rational(1, 2), 48);
    RationalizeReport a = rationalize_hyperplane({0.31, -0.47}, 0.11, mu, Rational(1, 50), 4000, 5, 1);
    RationalizeReport b = rationalize_hyperplane({0.31, -0.47}, 0.11, mu, Rational(1, 50), 4000, 5, 4);
    CHECK(a.denominator_log2 == b.denominator_log2);
    CHECK(a.estimate == b.estimate);
    CHECK(a.samples == b.samples);
    CHECK(a.result.a == b.result.a);
    CHECK(a.result.b == b.result.b);
}
