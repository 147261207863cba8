#include "ecl/pi01.hpp"

#include <algorithm>

namespace ecl {

namespace {

class FullRule final : public TreeRule {
  public:
    std::string kind() const override { return "full"; }
    std::string label() const override { return "full"; }
    bool prefix_dead(const BitWord&) const override { return false; }
    CellRelation classify(const BitWord&) const override { return CellRelation::Inside; }
    nlohmann::json to_json() const override { return {{"kind", "full"}}; }
};

class EmptyRule final : public TreeRule {
  public:
    std::string kind() const override { return "empty"; }
    std::string label() const override { return "empty"; }
    bool prefix_dead(const BitWord&) const override { return true; }
    CellRelation classify(const BitWord&) const override { return CellRelation::Outside; }
    nlohmann::json to_json() const override { return {{"kind", "empty"}}; }
};

}  // namespace

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::In: return "in";
        case Verdict::Out: return "out";
        case Verdict::BoundaryUnresolved: return "boundary-unresolved";
    }
    return "?";
}

PointDecision TreeRule::decide(const BitSource& source, unsigned precision) const {
    BitWord prefix;
    for (unsigned k = 0; k <= precision; ++k) {
        if (k > 0) prefix.push_back(source.bit(k - 1));
        switch (classify(prefix)) {
            case CellRelation::Inside: return {Verdict::In, k};
            case CellRelation::Outside: return {Verdict::Out, k};
            case CellRelation::Straddles: break;
        }
    }
    return {Verdict::BoundaryUnresolved, precision};
}

NodeStatus StageTree::status(const BitWord& node, Stage s) const {
    if (!rule_) throw DomainError("status query on a null tree");
    const BitWord resolved = node.prefix(std::min<std::size_t>(s, node.size()));
    if (rule_->stage_sensitive())
        return rule_->excluded_at(resolved, s) ? NodeStatus::Excluded : NodeStatus::Included;
    {
        std::shared_lock lock(cache_->mu);
        auto it = cache_->dead.find(resolved.str());
        if (it != cache_->dead.end())
            return it->second ? NodeStatus::Excluded : NodeStatus::Included;
    }
    const bool dead = rule_->prefix_dead(resolved);
    {
        std::unique_lock lock(cache_->mu);
        cache_->dead.emplace(resolved.str(), dead);
    }
    return dead ? NodeStatus::Excluded : NodeStatus::Included;
}

int MembershipOracle::decide(const BitWord& sigma, const Rational& r) const {
    if (!rule_) throw DomainError("oracle query on a null concept");
    const unsigned m = ceil_neg_log2(r);  // validates 0 < r <= 1
    const BitWord truncated = sigma.prefix(std::min<std::size_t>(m, sigma.size()));
    return rule_->classify(truncated) != CellRelation::Outside ? 1 : 0;
}

ConceptClass::ConceptClass() : empty_tail_(empty_concept()) {}

ConceptClass::ConceptClass(std::vector<Concept> concepts, Effectivity eff, Box box)
    : concepts_(std::move(concepts)), empty_tail_(empty_concept()), effectivity_(eff),
      box_(std::move(box)) {}

const Concept& ConceptClass::at(std::size_t n) const {
    return n < concepts_.size() ? concepts_[n] : empty_tail_;
}

PathCheck point_in_class(const StageTree& tree, const BitSource& p, Stage budget) {
    PathCheck result;
    result.budget = budget;
    BitWord prefix;
    for (Stage s = 0; s <= budget; ++s) {
        if (s > 0) prefix.push_back(p.bit(s - 1));
        if (tree.status(prefix, s) == NodeStatus::Excluded) {
            result.excluded_at = s;
            return result;
        }
    }
    return result;
}

PathCheck point_in_class(const StageTree& tree, const PointGen& p, Stage budget) {
    return point_in_class(tree, PointSource(p), budget);
}

PointDecision decide_point(const Concept& c, const BitSource& p, unsigned precision) {
    if (!c.rule()) throw DomainError("decide_point on a null concept");
    return c.rule()->decide(p, precision);
}

PointDecision decide_point(const Concept& c, const PointGen& p, unsigned precision) {
    return decide_point(c, PointSource(p), precision);
}

int stage_approx_membership(const StageTree& tree, const BitWord& sigma, const Rational& r,
                            unsigned lookahead) {
    const unsigned m = ceil_neg_log2(r);
    const BitWord base = sigma.prefix(std::min<std::size_t>(m, sigma.size()));
    const std::size_t extra = m - base.size();
    if (extra > 24) throw PrecisionError("stage approximation breadth 2^" + std::to_string(extra));
    const Stage stage = m + lookahead;
    // Depth-first over the candidate nodes of length m inside the ball.
    std::vector<BitWord> frontier{base};
    while (!frontier.empty()) {
        BitWord node = std::move(frontier.back());
        frontier.pop_back();
        if (tree.status(node, stage) == NodeStatus::Excluded) continue;
        if (node.size() == m) return 1;
        frontier.push_back(node.extended(0));
        frontier.push_back(node.extended(1));
    }
    return 0;
}

Concept full_concept() {
    static const Concept c(std::make_shared<FullRule>());
    return c;
}

Concept empty_concept() {
    static const Concept c(std::make_shared<EmptyRule>());
    return c;
}

}  // namespace ecl
