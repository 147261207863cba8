#pragma once

// Concrete concept families, each presented as a stagewise tree rule with
// an exact cylinder classifier:
//
//   - boolean formulas over finitely many sequence positions,
//   - closed rational intervals on an encoded real line,
//   - rational half-spaces on an encoded d-cube,
//   - convex polygons (intersections of closed half-planes) on the square,
//   - explicit finite path sets, optionally truncated to finite depth.
//
// Plus the two approximation operations: rational rounding of an
// arbitrary-coefficient hyperplane, and replacement of an arbitrary point
// by a finitely described one that no concept of a finite list can
// distinguish from it.

#include "ecl/cantor.hpp"
#include "ecl/pi01.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ecl {

class Distribution;  // pac module; used by rationalize_hyperplane

// ---- boolean formulas -------------------------------------------------

class Formula {
  public:
    static Formula constant(bool value);
    static Formula var(unsigned index);
    static Formula negation(Formula f);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula disjunction(Formula lhs, Formula rhs);

    // Grammar (precedence low to high):  or := and ('|' and)*,
    // and := unary ('&' unary)*, unary := '!' unary | 'x'<digits> | '0' |
    // '1' | '(' or ')'.  Whitespace is ignored.
    static Formula parse(std::string_view expr);

    unsigned num_vars() const { return num_vars_; }  // 1 + max index used
    bool eval(const std::function<int(unsigned)>& assignment) const;
    std::string str() const;

    struct Node;  // defined with the implementation

  private:
    explicit Formula(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
    unsigned num_vars_{0};
};

// Relation of the sat set to the constraint "stream starts with resolved".
CellRelation formula_cell_relation(const Formula& f, const BitWord& resolved);

// ---- geometric regions -------------------------------------------------

struct RationalInterval {
    Rational lo;
    Rational hi;  // lo <= hi, both inside the box closure
};

struct RationalHalfspace {
    std::vector<Rational> a;  // nonzero dimension; may be the zero vector
    Rational b;
    bool closed = true;  // a.x <= b when closed, a.x < b otherwise
};

struct DGon {
    std::vector<RationalHalfspace> sides;  // closed half-planes, d = 2
};

// ---- tree factories ----------------------------------------------------

Concept formula_tree(const Formula& f);
Concept interval_tree(const RationalInterval& interval, const Box& box = {});
Concept halfspace_tree(const RationalHalfspace& halfspace, const Box& box = {});
Concept dgon_tree(const DGon& polygon, const Box& box = {});
// Finite set of explicitly listed paths; a truncation bound L keeps only
// the prefixes of length < L, leaving no infinite path at all.
Concept paths_concept(std::vector<PointGen> points,
                      std::optional<std::uint32_t> truncation = std::nullopt);

// Exact feasibility of a closed cell against closed half-planes (d = 2),
// by polygon clipping.  Exposed for tests.
bool cell_meets_halfplanes(const CellBox& cell, const std::vector<RationalHalfspace>& sides);

// ---- hyperplane rationalization ----------------------------------------

struct RationalizeReport {
    RationalHalfspace result;
    double estimate{0};          // accepted Monte Carlo symmetric-difference mass
    double stderr_bound{0};      // 3 * sqrt(est (1-est) / samples) at acceptance
    std::uint64_t samples{0};
    unsigned denominator_log2{0};
};

// Rounds the coefficients of a.x <= b to denominators 2^q for growing q
// until a seeded Monte Carlo estimate of mu(H symdiff H_rounded) certifies
// the target mass.  Throws ApproximationError when the denominator cap is
// reached first.
RationalizeReport rationalize_hyperplane(const std::vector<double>& a, double b,
                                         const Distribution& mu, const Rational& eps,
                                         std::uint64_t samples, std::uint64_t seed,
                                         unsigned workers = 1);

// ---- computable point replacement ---------------------------------------

struct ReplacementEntry {
    std::string concept_label;
    Verdict verdict{Verdict::BoundaryUnresolved};
    unsigned decided_at{0};
};

struct ReplacementOutcome {
    PointGen point;
    bool boundary_fallback{false};  // y itself was returned
    std::vector<ReplacementEntry> agreements;
};

// Produces a finitely described point x agreeing with y on membership in
// every listed concept: a decided cylinder around y padded with zeros
// when every membership resolves, y itself when some membership is a
// genuine boundary case and y is finitely described, PrecisionError when
// an opaque source stays unresolved.
ReplacementOutcome computable_replacement(const BitSource& y,
                                          const std::vector<Concept>& concepts,
                                          unsigned precision);
ReplacementOutcome computable_replacement(const PointGen& y,
                                          const std::vector<Concept>& concepts,
                                          unsigned precision);

}  // namespace ecl
