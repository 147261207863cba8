#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ecl/concepts.hpp"
#include "ecl/errors.hpp"
#include "ecl/pi01.hpp"
#include "ecl/vc.hpp"

#include <cstdint>
#include <vector>

using namespace ecl;

namespace {

ConceptClass interval_class() {
    std::vector<Concept> cs;
    cs.push_back(interval_tree({Rational(0), Rational(1, 4)}));
    cs.push_back(interval_tree({Rational(0), Rational(1, 2)}));
    cs.push_back(interval_tree({Rational(1, 3), Rational(2, 3)}));
    cs.push_back(interval_tree({Rational(1, 2), Rational(1)}));
    cs.push_back(interval_tree({Rational(0), Rational(1)}));
    cs.push_back(interval_tree({Rational(3, 4), Rational(1)}));
    cs.push_back(empty_concept());
    cs.push_back(full_concept());
    return ConceptClass(std::move(cs));
}

WitnessPool quarter_pool() {
    return WitnessPool({PointGen::parse("rat1:1/8"), PointGen::parse("rat1:3/8"),
                        PointGen::parse("rat1:5/8"), PointGen::parse("rat1:7/8")},
                       16);
}

// Reference trace computation by direct decide_point calls.
std::vector<std::uint64_t> brute_traces(const ConceptClass& cls, std::size_t prefix,
                                        const WitnessPool& pool, unsigned budget) {
    std::vector<std::uint64_t> out;
    for (std::size_t n = 0; n < prefix; ++n) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            const PointDecision d = decide_point(cls.at(n), pool.points[j], budget);
            REQUIRE(d.verdict != Verdict::BoundaryUnresolved);
            if (d.verdict == Verdict::In) mask |= std::uint64_t{1} << j;
        }
        out.push_back(mask);
    }
    return out;
}

}  // namespace

TEST_CASE("pool validation") {
    CHECK_THROWS_AS(WitnessPool({PointGen::parse("rat1:1/8")}, 0), DomainError);
    // indistinguishable within the precision
    CHECK_THROWS_AS(
        WitnessPool({PointGen::parse("rat1:1/3"), PointGen::parse("ep:|01")}, 16),
        DomainError);
    // distinguishable: differ at bit 4
    CHECK_NOTHROW(
        WitnessPool({PointGen::parse("ep:0101|0"), PointGen::parse("ep:01011|0")}, 16));
    // ... but not within 4 bits
    CHECK_THROWS_AS(
        WitnessPool({PointGen::parse("ep:0101|0"), PointGen::parse("ep:01011|0")}, 4),
        DomainError);
    std::vector<PointGen> many;
    for (int i = 0; i < 65; ++i)
        many.push_back(PointGen::rational_point({Rational(i, 65)}));
    CHECK_THROWS_AS(WitnessPool(std::move(many), 64), DomainError);
}

TEST_CASE("membership traces match direct decisions") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    const auto got = membership_traces(cls, 0, cls.emitted(), pool, 64);
    const auto want = brute_traces(cls, cls.emitted(), pool, 64);
    CHECK(got == want);
    // frozen masks, bit j = pool point j: 1/8, 3/8, 5/8, 7/8
    CHECK(got[0] == 0b0001);  // [0,1/4]
    CHECK(got[1] == 0b0011);  // [0,1/2]
    CHECK(got[2] == 0b0110);  // [1/3,2/3]
    CHECK(got[3] == 0b1100);  // [1/2,1]
    CHECK(got[4] == 0b1111);  // [0,1]
    CHECK(got[5] == 0b1000);  // [3/4,1]
    CHECK(got[6] == 0b0000);  // empty
    CHECK(got[7] == 0b1111);  // full
    // sub-ranges slice the same matrix
    const auto mid = membership_traces(cls, 2, 5, pool, 64);
    CHECK(mid == std::vector<std::uint64_t>{got[2], got[3], got[4]});
}

TEST_CASE("shatter counts over subsets") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    ShatterReport r01 = shatter_count(cls, cls.emitted(), pool, {0, 1}, 64);
    CHECK(r01.realized == 4);
    CHECK(r01.traces == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(is_shattered(cls, cls.emitted(), pool, {0, 1}, 64));
    ShatterReport r03 = shatter_count(cls, cls.emitted(), pool, {0, 3}, 64);
    CHECK(r03.realized == 4);
    CHECK(is_shattered(cls, cls.emitted(), pool, {0, 3}, 64));
    // triples can never shatter: the trace 101 needs a gap inside an interval
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b)
            for (std::size_t c = b + 1; c < 4; ++c)
                CHECK(!is_shattered(cls, cls.emitted(), pool, {a, b, c}, 64));
    // empty subset realizes exactly the empty trace
    ShatterReport r_empty = shatter_count(cls, cls.emitted(), pool, {}, 64);
    CHECK(r_empty.realized == 1);
    CHECK(is_shattered(cls, cls.emitted(), pool, {}, 64));
    // shrinking the prefix removes traces
    ShatterReport prefix2 = shatter_count(cls, 2, pool, {0, 1}, 64);
    CHECK(prefix2.realized == 2);  // traces 01 and 11 only
}

TEST_CASE("subset validation") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    CHECK_THROWS_AS(shatter_count(cls, 8, pool, {1, 0}, 64), DomainError);   // not ascending
    CHECK_THROWS_AS(shatter_count(cls, 8, pool, {0, 0}, 64), DomainError);   // repeated
    CHECK_THROWS_AS(shatter_count(cls, 8, pool, {0, 9}, 64), DomainError);   // out of range
    CHECK_THROWS_AS(vc_lower_bound(cls, 8, pool, 21, 64), DomainError);      // above limit
}

TEST_CASE("vc lower-bound search") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    VcSearchResult d2 = vc_lower_bound(cls, cls.emitted(), pool, 2, 64);
    CHECK(d2.found);
    CHECK(d2.witness == std::vector<std::size_t>{0, 1});  // lexicographic first
    CHECK(d2.subsets_searched == 1);                      // early exit
    CHECK(d2.best_realized == 4);
    VcSearchResult d3 = vc_lower_bound(cls, cls.emitted(), pool, 3, 64);
    CHECK(!d3.found);
    CHECK(d3.witness.empty());
    CHECK(d3.subsets_searched == 4);  // all of C(4,3)
    CHECK(d3.best_realized == 6);
    VcSearchResult d0 = vc_lower_bound(cls, cls.emitted(), pool, 0, 64);
    CHECK(d0.found);
    VcSearchResult d0_empty = vc_lower_bound(cls, 0, pool, 0, 64);
    CHECK(!d0_empty.found);  // no concepts at all: even the empty trace is missing
    // d exceeding the pool size cannot be witnessed
    VcSearchResult d5 = vc_lower_bound(cls, cls.emitted(), pool, 5, 64);
    CHECK(!d5.found);
    CHECK(d5.subsets_searched == 0);
}

TEST_CASE("horizon surrogate for infinite dimension") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    CHECK(infinite_vc_horizon_check(cls, 2, pool, cls.emitted(), 64));
    CHECK(!infinite_vc_horizon_check(cls, 3, pool, cls.emitted(), 64));
}

TEST_CASE("boundary membership is an error, not a default") {
    std::vector<Concept> cs;
    cs.push_back(interval_tree({Rational(0), Rational(1, 2)}));
    cs.push_back(interval_tree({Rational(1, 4), Rational(3, 8)}));  // 3/8 is an endpoint
    ConceptClass cls(std::move(cs));
    WitnessPool pool = quarter_pool();
    CHECK_THROWS_AS(membership_traces(cls, 0, cls.emitted(), pool, 64), UndecidedMembership);
    try {
        vc_lower_bound(cls, cls.emitted(), pool, 1, 64);
        FAIL("expected UndecidedMembership");
    } catch (const UndecidedMembership& e) {
        CHECK(e.point == "rat1:3/8");
        CHECK(e.concept_label == "interval [1/4,3/8]");
    }
}

TEST_CASE("results are stable under budget growth") {
    ConceptClass cls = interval_class();
    WitnessPool pool = quarter_pool();
    const auto t32 = membership_traces(cls, 0, cls.emitted(), pool, 32);
    const auto t64 = membership_traces(cls, 0, cls.emitted(), pool, 64);
    const auto t256 = membership_traces(cls, 0, cls.emitted(), pool, 256);
    CHECK(t32 == t64);
    CHECK(t64 == t256);
}

TEST_CASE("formula classes shatter assignment pools") {
    // conjunctions over three positions against the standard basis pool
    std::vector<Concept> cs;
    cs.push_back(formula_tree(Formula::parse("1")));
    cs.push_back(formula_tree(Formula::parse("x0")));
    cs.push_back(formula_tree(Formula::parse("x1")));
    cs.push_back(formula_tree(Formula::parse("x0&x1")));
    ConceptClass cls(std::move(cs));
    WitnessPool pool({PointGen::parse("asgn:0=1|0"), PointGen::parse("asgn:1=1|0")}, 8);
    // traces: 11, 10, 01, 00 in pool-mask order
    ShatterReport r = shatter_count(cls, cls.emitted(), pool, {0, 1}, 16);
    CHECK(r.realized == 4);
    CHECK(is_shattered(cls, cls.emitted(), pool, {0, 1}, 16));
}
