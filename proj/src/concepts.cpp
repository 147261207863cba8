#include "ecl/concepts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ecl {

// ---- formulas ------------------------------------------------------------

struct Formula::Node {
    enum class Op { Const, Var, Not, And, Or } op;
    bool value{false};
    unsigned var{0};
    std::shared_ptr<const Node> lhs, rhs;
};

Formula::Formula(std::shared_ptr<const Node> root) : root_(std::move(root)) {
    // num_vars fixed up by factories
}

namespace {

unsigned node_vars(const Formula::Node& n) {
    using Op = Formula::Node::Op;
    switch (n.op) {
        case Op::Const: return 0;
        case Op::Var: return n.var + 1;
        case Op::Not: return node_vars(*n.lhs);
        case Op::And:
        case Op::Or: return std::max(node_vars(*n.lhs), node_vars(*n.rhs));
    }
    return 0;
}

bool node_eval(const Formula::Node& n, const std::function<int(unsigned)>& assignment) {
    using Op = Formula::Node::Op;
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return assignment(n.var) != 0;
        case Op::Not: return !node_eval(*n.lhs, assignment);
        case Op::And: return node_eval(*n.lhs, assignment) && node_eval(*n.rhs, assignment);
        case Op::Or: return node_eval(*n.lhs, assignment) || node_eval(*n.rhs, assignment);
    }
    return false;
}

void node_str(const Formula::Node& n, std::string& out) {
    using Op = Formula::Node::Op;
    switch (n.op) {
        case Op::Const: out += n.value ? '1' : '0'; return;
        case Op::Var: out += 'x' + std::to_string(n.var); return;
        case Op::Not:
            out += '!';
            if (n.lhs->op == Op::And || n.lhs->op == Op::Or) {
                out += '(';
                node_str(*n.lhs, out);
                out += ')';
            } else {
                node_str(*n.lhs, out);
            }
            return;
        case Op::And:
        case Op::Or: {
            const char symbol = n.op == Op::And ? '&' : '|';
            auto emit = [&](const Formula::Node& child) {
                const bool paren = (n.op == Op::And && child.op == Op::Or) ||
                                   (n.op == Op::Or && child.op == Op::And);
                if (paren) out += '(';
                node_str(child, out);
                if (paren) out += ')';
            };
            emit(*n.lhs);
            out += symbol;
            emit(*n.rhs);
            return;
        }
    }
}

struct FormulaParser {
    std::string_view text;
    std::size_t pos{0};

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool consume(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }

    Formula parse_or() {
        Formula lhs = parse_and();
        while (consume('|')) lhs = Formula::disjunction(std::move(lhs), parse_and());
        return lhs;
    }
    Formula parse_and() {
        Formula lhs = parse_unary();
        while (consume('&')) lhs = Formula::conjunction(std::move(lhs), parse_unary());
        return lhs;
    }
    Formula parse_unary() {
        if (consume('!')) return Formula::negation(parse_unary());
        if (consume('(')) {
            Formula inner = parse_or();
            if (!consume(')')) throw DomainError("formula: missing ')' in " + std::string(text));
            return inner;
        }
        skip_ws();
        if (pos < text.size() && (text[pos] == '0' || text[pos] == '1')) {
            const bool v = text[pos] == '1';
            ++pos;
            return Formula::constant(v);
        }
        if (pos < text.size() && text[pos] == 'x') {
            ++pos;
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw DomainError("formula: variable needs an index in " + std::string(text));
            return Formula::var(static_cast<unsigned>(std::stoul(std::string(text.substr(start, pos - start)))));
        }
        throw DomainError("formula: unexpected input at offset " + std::to_string(pos) + " in " +
                          std::string(text));
    }
};

}  // namespace

Formula Formula::constant(bool value) {
    auto node = std::make_shared<Node>();
    node->op = Node::Op::Const;
    node->value = value;
    Formula f(node);
    f.num_vars_ = 0;
    return f;
}

Formula Formula::var(unsigned index) {
    auto node = std::make_shared<Node>();
    node->op = Node::Op::Var;
    node->var = index;
    Formula f(node);
    f.num_vars_ = index + 1;
    return f;
}

Formula Formula::negation(Formula inner) {
    auto node = std::make_shared<Node>();
    node->op = Node::Op::Not;
    node->lhs = inner.root_;
    Formula f(node);
    f.num_vars_ = inner.num_vars_;
    return f;
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->op = Node::Op::And;
    node->lhs = lhs.root_;
    node->rhs = rhs.root_;
    Formula f(node);
    f.num_vars_ = std::max(lhs.num_vars_, rhs.num_vars_);
    return f;
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->op = Node::Op::Or;
    node->lhs = lhs.root_;
    node->rhs = rhs.root_;
    Formula f(node);
    f.num_vars_ = std::max(lhs.num_vars_, rhs.num_vars_);
    return f;
}

Formula Formula::parse(std::string_view expr) {
    FormulaParser parser{expr};
    Formula f = parser.parse_or();
    parser.skip_ws();
    if (parser.pos != expr.size())
        throw DomainError("formula: trailing input in " + std::string(expr));
    return f;
}

bool Formula::eval(const std::function<int(unsigned)>& assignment) const {
    return node_eval(*root_, assignment);
}

std::string Formula::str() const {
    std::string out;
    node_str(*root_, out);
    return out;
}

CellRelation formula_cell_relation(const Formula& f, const BitWord& resolved) {
    const unsigned v = f.num_vars();
    const unsigned fixed = static_cast<unsigned>(std::min<std::size_t>(resolved.size(), v));
    const unsigned free = v - fixed;
    if (free > 24) throw PrecisionError("formula completion space 2^" + std::to_string(free));
    bool any_sat = false;
    bool any_unsat = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free); ++mask) {
        const bool sat = f.eval([&](unsigned idx) -> int {
            if (idx < fixed) return resolved.bit(idx);
            return static_cast<int>((mask >> (idx - fixed)) & 1);
        });
        any_sat |= sat;
        any_unsat |= !sat;
        if (any_sat && any_unsat) return CellRelation::Straddles;
    }
    if (any_sat) return CellRelation::Inside;
    return CellRelation::Outside;
}

// ---- rule implementations -------------------------------------------------

namespace {

class FormulaRule final : public TreeRule {
  public:
    explicit FormulaRule(Formula f) : formula_(std::move(f)) {
        if (formula_.num_vars() > 20)
            throw DomainError("formula uses too many positions: " + std::to_string(formula_.num_vars()));
    }
    std::string kind() const override { return "formula"; }
    std::string label() const override { return "formula " + formula_.str(); }
    bool prefix_dead(const BitWord& resolved) const override {
        return formula_cell_relation(formula_, resolved) == CellRelation::Outside;
    }
    CellRelation classify(const BitWord& node) const override {
        return formula_cell_relation(formula_, node);
    }
    nlohmann::json to_json() const override {
        return {{"kind", "formula"}, {"vars", formula_.num_vars()}, {"expr", formula_.str()}};
    }

  private:
    Formula formula_;
};

class IntervalRule final : public TreeRule {
  public:
    IntervalRule(RationalInterval original, Box box)
        : original_(std::move(original)), box_(std::move(box)) {
        if (original_.lo > original_.hi) throw DomainError("interval requires lo <= hi");
        lo_ = box_.to_unit_extent(original_.lo);
        hi_ = box_.to_unit_extent(original_.hi);
    }
    std::string kind() const override { return "interval"; }
    std::string label() const override {
        return "interval [" + rational_str(original_.lo) + "," + rational_str(original_.hi) + "]";
    }
    bool prefix_dead(const BitWord& resolved) const override {
        return classify(resolved) == CellRelation::Outside;
    }
    CellRelation classify(const BitWord& node) const override {
        const CellBox cell = decode_cell(node, 1);
        if (cell.hi[0] < lo_ || cell.lo[0] > hi_) return CellRelation::Outside;
        if (lo_ <= cell.lo[0] && cell.hi[0] <= hi_) return CellRelation::Inside;
        return CellRelation::Straddles;
    }
    nlohmann::json to_json() const override {
        nlohmann::json j{{"kind", "interval"},
                         {"lo", rational_str(original_.lo)},
                         {"hi", rational_str(original_.hi)}};
        return j;
    }

  private:
    RationalInterval original_;
    Box box_;
    Rational lo_, hi_;  // unit coordinates
};

// Affine transport of a.x <= b from box coordinates to the unit cube:
// x = lo + (hi - lo) u  =>  (a (hi-lo)) . u <= b - lo * sum(a).
struct UnitHalfspace {
    std::vector<Rational> a;
    Rational b;
    bool closed;

    UnitHalfspace(const RationalHalfspace& h, const Box& box) {
        if (h.a.empty()) throw DomainError("halfspace needs at least one coefficient");
        const Rational width = box.hi - box.lo;
        Rational shift(0);
        for (const Rational& coeff : h.a) {
            a.push_back(coeff * width);
            shift += coeff * box.lo;
        }
        b = h.b - shift;
        closed = h.closed;
    }

    Rational min_over(const CellBox& cell) const {
        Rational acc(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            acc += a[i] * (a[i] > 0 ? cell.lo[i] : cell.hi[i]);
        return acc;
    }
    Rational max_over(const CellBox& cell) const {
        Rational acc(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            acc += a[i] * (a[i] > 0 ? cell.hi[i] : cell.lo[i]);
        return acc;
    }
    bool cell_misses(const CellBox& cell) const {
        const Rational lo = min_over(cell);
        return closed ? lo > b : lo >= b;
    }
    bool cell_inside(const CellBox& cell) const {
        const Rational hi = max_over(cell);
        return closed ? hi <= b : hi < b;
    }
};

nlohmann::json halfspace_json(const RationalHalfspace& h) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const Rational& c : h.a) coeffs.push_back(rational_str(c));
    nlohmann::json j{{"kind", "halfspace"},
                     {"d", h.a.size()},
                     {"a", coeffs},
                     {"b", rational_str(h.b)}};
    if (!h.closed) j["closed"] = false;
    return j;
}

std::string halfspace_label(const RationalHalfspace& h) {
    std::ostringstream out;
    out << "halfspace ";
    for (std::size_t i = 0; i < h.a.size(); ++i) {
        if (i) out << "+";
        out << rational_str(h.a[i]) << "*x" << i;
    }
    out << (h.closed ? " <= " : " < ") << rational_str(h.b);
    return out.str();
}

class HalfspaceRule final : public TreeRule {
  public:
    HalfspaceRule(RationalHalfspace original, Box box)
        : original_(std::move(original)), unit_(original_, box) {
        if (original_.a.size() > 8) throw DomainError("halfspace dimension cap is 8");
    }
    std::string kind() const override { return "halfspace"; }
    std::string label() const override { return halfspace_label(original_); }
    bool prefix_dead(const BitWord& resolved) const override {
        return classify(resolved) == CellRelation::Outside;
    }
    CellRelation classify(const BitWord& node) const override {
        const CellBox cell = decode_cell(node, original_.a.size());
        if (unit_.cell_misses(cell)) return CellRelation::Outside;
        if (unit_.cell_inside(cell)) return CellRelation::Inside;
        return CellRelation::Straddles;
    }
    nlohmann::json to_json() const override { return halfspace_json(original_); }

  private:
    RationalHalfspace original_;
    UnitHalfspace unit_;
};

using Point2 = std::pair<Rational, Rational>;

// Sutherland-Hodgman clip of a closed rectangle against closed half-planes
// a.x <= b; the cell meets the intersection iff some polygon survives.
template <typename Side>
bool clip_rectangle_feasible(const CellBox& cell, const std::vector<Side>& sides) {
    std::vector<Point2> polygon{{cell.lo[0], cell.lo[1]},
                                {cell.hi[0], cell.lo[1]},
                                {cell.hi[0], cell.hi[1]},
                                {cell.lo[0], cell.hi[1]}};
    for (const Side& h : sides) {
        std::vector<Point2> clipped;
        const auto value = [&](const Point2& p) { return h.a[0] * p.first + h.a[1] * p.second; };
        for (std::size_t i = 0; i < polygon.size(); ++i) {
            const Point2& p = polygon[i];
            const Point2& q = polygon[(i + 1) % polygon.size()];
            const Rational vp = value(p);
            const Rational vq = value(q);
            const bool in_p = vp <= h.b;
            const bool in_q = vq <= h.b;
            if (in_p) clipped.push_back(p);
            if (in_p != in_q) {
                const Rational t = (h.b - vp) / (vq - vp);
                clipped.push_back({p.first + t * (q.first - p.first),
                                   p.second + t * (q.second - p.second)});
            }
        }
        polygon = std::move(clipped);
        if (polygon.empty()) return false;
    }
    return true;
}

class DGonRule final : public TreeRule {
  public:
    DGonRule(DGon original, Box box) : original_(std::move(original)) {
        if (original_.sides.empty()) throw DomainError("polygon needs at least one side");
        for (const RationalHalfspace& h : original_.sides) {
            if (h.a.size() != 2) throw DomainError("polygon sides must be half-planes (d = 2)");
            if (!h.closed) throw DomainError("polygon sides must be closed half-planes");
            unit_.emplace_back(h, box);
        }
    }
    std::string kind() const override { return "dgon"; }
    std::string label() const override {
        return "dgon with " + std::to_string(original_.sides.size()) + " sides";
    }
    // Stagewise exclusion is the union of the component exclusions, which
    // is weaker than true infeasibility: a cell may touch every side's
    // half-plane yet miss the intersection, leaving a dead branch.
    bool prefix_dead(const BitWord& resolved) const override {
        const CellBox cell = decode_cell(resolved, 2);
        for (const UnitHalfspace& h : unit_)
            if (h.cell_misses(cell)) return true;
        return false;
    }
    CellRelation classify(const BitWord& node) const override {
        const CellBox cell = decode_cell(node, 2);
        bool all_inside = true;
        for (const UnitHalfspace& h : unit_) {
            if (h.cell_misses(cell)) return CellRelation::Outside;
            all_inside = all_inside && h.cell_inside(cell);
        }
        if (all_inside) return CellRelation::Inside;
        if (!clip_rectangle_feasible(cell, unit_)) return CellRelation::Outside;
        return CellRelation::Straddles;
    }
    nlohmann::json to_json() const override {
        nlohmann::json sides = nlohmann::json::array();
        for (const RationalHalfspace& h : original_.sides) sides.push_back(halfspace_json(h));
        return {{"kind", "dgon"}, {"halfspaces", sides}};
    }

  private:
    DGon original_;
    std::vector<UnitHalfspace> unit_;
};

class PathsRule final : public TreeRule {
  public:
    PathsRule(std::vector<PointGen> points, std::optional<std::uint32_t> truncation)
        : points_(std::move(points)), truncation_(truncation) {
        for (const PointGen& p : points_) keys_.push_back(p.canonical_key());
        std::sort(keys_.begin(), keys_.end());
    }
    std::string kind() const override { return "paths"; }
    std::string label() const override {
        std::string out = "paths{" + std::to_string(points_.size());
        if (truncation_) out += ",cut@" + std::to_string(*truncation_);
        return out + "}";
    }
    bool prefix_dead(const BitWord& resolved) const override {
        if (truncation_ && resolved.size() >= *truncation_) return true;
        return !witness_extends(resolved);
    }
    CellRelation classify(const BitWord& node) const override {
        if (truncation_) return CellRelation::Outside;  // no infinite path survives
        if (!witness_extends(node)) return CellRelation::Outside;
        return CellRelation::Straddles;  // finite path sets have empty interior
    }
    PointDecision decide(const BitSource& source, unsigned precision) const override {
        if (truncation_) return {Verdict::Out, 0};
        if (auto desc = source.finite_description()) {
            const PointGen p = PointGen::parse(*desc);
            const bool member = std::binary_search(keys_.begin(), keys_.end(), p.canonical_key());
            return {member ? Verdict::In : Verdict::Out, 0};
        }
        return TreeRule::decide(source, precision);  // refutation-only for opaque sources
    }
    std::vector<PointGen> witness_points() const override { return points_; }
    nlohmann::json to_json() const override {
        nlohmann::json pts = nlohmann::json::array();
        for (const PointGen& p : points_) pts.push_back(p.description());
        nlohmann::json j{{"kind", "paths"}, {"points", pts}};
        if (truncation_) j["trunc"] = *truncation_;
        return j;
    }

  private:
    bool witness_extends(const BitWord& node) const {
        for (const PointGen& p : points_) {
            bool match = true;
            for (std::size_t i = 0; i < node.size() && match; ++i)
                if (p.bit(i) != node.bit(i)) match = false;
            if (match) return true;
        }
        return false;
    }

    std::vector<PointGen> points_;
    std::optional<std::uint32_t> truncation_;
    std::vector<std::string> keys_;
};

}  // namespace

Concept formula_tree(const Formula& f) { return Concept(std::make_shared<FormulaRule>(f)); }

Concept interval_tree(const RationalInterval& interval, const Box& box) {
    return Concept(std::make_shared<IntervalRule>(interval, box));
}

Concept halfspace_tree(const RationalHalfspace& halfspace, const Box& box) {
    return Concept(std::make_shared<HalfspaceRule>(halfspace, box));
}

Concept dgon_tree(const DGon& polygon, const Box& box) {
    return Concept(std::make_shared<DGonRule>(polygon, box));
}

Concept paths_concept(std::vector<PointGen> points, std::optional<std::uint32_t> truncation) {
    return Concept(std::make_shared<PathsRule>(std::move(points), truncation));
}

bool cell_meets_halfplanes(const CellBox& cell, const std::vector<RationalHalfspace>& sides) {
    for (const RationalHalfspace& h : sides) {
        if (h.a.size() != 2) throw DomainError("cell_meets_halfplanes needs d = 2");
        if (!h.closed) throw DomainError("cell_meets_halfplanes needs closed half-planes");
    }
    return clip_rectangle_feasible(cell, sides);
}

// ---- computable point replacement -----------------------------------------

ReplacementOutcome computable_replacement(const BitSource& y,
                                          const std::vector<Concept>& concepts,
                                          unsigned precision) {
    std::vector<ReplacementEntry> agreements;
    unsigned deepest = 0;
    try {
        for (const Concept& c : concepts) {
            BitWord prefix;
            ReplacementEntry entry;
            entry.concept_label = c.label();
            for (unsigned k = 0; k <= precision && entry.verdict == Verdict::BoundaryUnresolved;
                 ++k) {
                if (k > 0) prefix.push_back(y.bit(k - 1));
                switch (c.rule()->classify(prefix)) {
                    case CellRelation::Inside:
                        entry.verdict = Verdict::In;
                        entry.decided_at = k;
                        break;
                    case CellRelation::Outside:
                        entry.verdict = Verdict::Out;
                        entry.decided_at = k;
                        break;
                    case CellRelation::Straddles:
                        break;
                }
            }
            if (entry.verdict == Verdict::BoundaryUnresolved) {
                // Boundary case: only a finitely described y can stand in
                // for itself.
                if (auto desc = y.finite_description()) {
                    ReplacementOutcome outcome{PointGen::parse(*desc), true, {}};
                    for (const Concept& cc : concepts) {
                        const PointDecision d = decide_point(cc, outcome.point, precision);
                        outcome.agreements.push_back({cc.label(), d.verdict, d.decided_at});
                    }
                    return outcome;
                }
                throw PrecisionError("membership of an opaque source unresolved at precision " +
                                     std::to_string(precision) + " for " + entry.concept_label);
            }
            deepest = std::max(deepest, entry.decided_at);
            agreements.push_back(std::move(entry));
        }
    } catch (const SourceExhausted& e) {
        throw PrecisionError(std::string("external source too short: ") + e.what());
    }
    std::string pre;
    for (unsigned i = 0; i < deepest; ++i) pre.push_back(y.bit(i) ? '1' : '0');
    return ReplacementOutcome{PointGen::eventually_periodic(pre, "0"), false,
                              std::move(agreements)};
}

ReplacementOutcome computable_replacement(const PointGen& y, const std::vector<Concept>& concepts,
                                          unsigned precision) {
    return computable_replacement(PointSource(y), concepts, precision);
}

}  // namespace ecl
