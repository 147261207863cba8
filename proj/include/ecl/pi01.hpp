#pragma once

// Co-c.e. stagewise trees over Cantor space and the membership machinery
// around them.
//
// A concept is the set of infinite paths through a tree presented by an
// exclusion rule: node sigma may switch from included to excluded at some
// stage s and never back (monotone in s, upward closed along extensions).
// Trees are intensional; nothing is materialized.  Every built-in rule
// resolves a node query (sigma, s) on the prefix sigma restricted to
// min(s, |sigma|) bits, which makes monotonicity and upward closure
// structural; stage-sensitive rules (lazily truncated witness trees) may
// consult s directly as well.
//
// Decision vocabulary:
//   - node_status: included/excluded of a node at a stage.
//   - point_in_class: scan of a path's prefixes up to a stage budget.
//   - effective_membership: the two-sided ball oracle f(sigma, r); answers
//     1 when B_r(sigma) meets the concept, 0 when B_2r(sigma) misses it,
//     and resolves the slack in between deterministically.
//   - decide_point: three-way in/out/boundary-unresolved verdict for a
//     finitely generated point at a precision.

#include "ecl/cantor.hpp"
#include "ecl/errors.hpp"
#include "ecl/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ecl {

using Stage = std::uint32_t;

enum class NodeStatus { Included, Excluded };

// Relation of a cylinder (closed dyadic cell) to the concept's path set.
enum class CellRelation { Inside, Outside, Straddles };

enum class Verdict { In, Out, BoundaryUnresolved };

std::string verdict_str(Verdict v);

struct PointDecision {
    Verdict verdict{Verdict::BoundaryUnresolved};
    unsigned decided_at{0};  // prefix length that carried the certificate
};

// One intensional tree rule: exclusion logic, cylinder classification and
// point decision for a single concept.
class TreeRule {
  public:
    virtual ~TreeRule() = default;

    virtual std::string kind() const = 0;
    virtual std::string label() const = 0;  // short display form

    // Exclusion of the resolved prefix under stage-independent semantics.
    virtual bool prefix_dead(const BitWord& resolved) const = 0;

    // Full stagewise exclusion; default rules ignore the stage beyond the
    // prefix restriction done by the caller.
    virtual bool excluded_at(const BitWord& resolved, Stage s) const {
        (void)s;
        return prefix_dead(resolved);
    }
    virtual bool stage_sensitive() const { return false; }

    // Certificate relation of cylinder(node) to the path set.  Inside and
    // Outside must be sound for the whole cylinder.
    virtual CellRelation classify(const BitWord& node) const = 0;

    // Three-way membership decision; the default scans cylinder
    // certificates along the source's prefixes.
    virtual PointDecision decide(const BitSource& source, unsigned precision) const;

    // Explicit path generators for rules that are finite unions of paths;
    // empty for region-style rules.
    virtual std::vector<PointGen> witness_points() const { return {}; }

    virtual nlohmann::json to_json() const = 0;
};

using RulePtr = std::shared_ptr<const TreeRule>;

// View of a rule as a stage tree, with a memo cache over resolved
// prefixes.  Safe for concurrent readers.
class StageTree {
  public:
    StageTree() = default;
    explicit StageTree(RulePtr rule) : rule_(std::move(rule)) {}

    NodeStatus status(const BitWord& node, Stage s) const;
    const RulePtr& rule() const { return rule_; }

  private:
    RulePtr rule_;
    struct Cache {
        mutable std::shared_mutex mu;
        mutable std::unordered_map<std::string, bool> dead;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// View of a rule as the two-sided ball oracle.
class MembershipOracle {
  public:
    MembershipOracle() = default;
    explicit MembershipOracle(RulePtr rule) : rule_(std::move(rule)) {}

    // 1 iff B_r(sigma) meets the concept; exact, hence contract-sound.
    int decide(const BitWord& sigma, const Rational& r) const;
    const RulePtr& rule() const { return rule_; }

  private:
    RulePtr rule_;
};

// A concept bundles one rule with both views.
class Concept {
  public:
    Concept() = default;
    explicit Concept(RulePtr rule) : rule_(std::move(rule)), tree_(rule_), oracle_(rule_) {}

    const RulePtr& rule() const { return rule_; }
    const StageTree& tree() const { return tree_; }
    const MembershipOracle& oracle() const { return oracle_; }
    std::string label() const { return rule_ ? rule_->label() : "<null>"; }

  private:
    RulePtr rule_;
    StageTree tree_;
    MembershipOracle oracle_;
};

enum class Effectivity { Weak, Effective };

// Total enumeration n -> concept; slots past the emitted prefix are empty
// trees.
class ConceptClass {
  public:
    ConceptClass();
    explicit ConceptClass(std::vector<Concept> concepts,
                          Effectivity eff = Effectivity::Effective, Box box = {});

    std::size_t emitted() const { return concepts_.size(); }
    const Concept& at(std::size_t n) const;  // empty concept beyond emitted()
    Effectivity effectivity() const { return effectivity_; }
    const Box& box() const { return box_; }
    const std::vector<Concept>& concepts() const { return concepts_; }

  private:
    std::vector<Concept> concepts_;
    Concept empty_tail_;
    Effectivity effectivity_{Effectivity::Effective};
    Box box_{};
};

// ---- operations ----

inline NodeStatus node_status(const StageTree& tree, const BitWord& node, Stage s) {
    return tree.status(node, s);
}

struct PathCheck {
    std::optional<Stage> excluded_at;  // least stage <= budget showing exclusion
    Stage budget{0};
};

PathCheck point_in_class(const StageTree& tree, const BitSource& p, Stage budget);
PathCheck point_in_class(const StageTree& tree, const PointGen& p, Stage budget);

inline int effective_membership(const MembershipOracle& oracle, const BitWord& sigma,
                                const Rational& r) {
    return oracle.decide(sigma, r);
}

PointDecision decide_point(const Concept& c, const BitSource& p, unsigned precision);
PointDecision decide_point(const Concept& c, const PointGen& p, unsigned precision);

// Stage-approximation fallback oracle: answers 1 iff the stage-(m+lookahead)
// tree approximation keeps some node of length m = ceil(-log2 r) inside
// B_r(sigma).  Coincides with the exact oracle whenever included nodes of
// the rule always extend to paths (intervals, half-spaces, formulas); may
// overshoot on composite rules with dead branches, which is why concepts
// carry exact oracles and this is only a fallback for rules without
// geometric certificates.
int stage_approx_membership(const StageTree& tree, const BitWord& sigma, const Rational& r,
                            unsigned lookahead = 8);

// Shared rules for the trivial concepts.
Concept full_concept();
Concept empty_concept();

}  // namespace ecl
