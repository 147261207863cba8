#include "ecl/construction.hpp"

#include "ecl/errors.hpp"
#include "ecl/vc.hpp"

#include <algorithm>
#include <sstream>

namespace ecl {

namespace {

constexpr Stage kMaxHorizon = 18;  // block t emits 2^t trees; keep runs desk-scale

std::string normalize_name(std::string_view name) {
    std::string out;
    for (char c : name) out.push_back(c == '-' ? '_' : c);
    return out;
}

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
    return (a + b) * (a + b + 1) / 2 + b;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    std::uint64_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;  // z stays desk-scale here
    const std::uint64_t b = z - w * (w + 1) / 2;
    return {w - b, b};
}

}  // namespace

PiThreePredicate PiThreePredicate::builtin(std::string_view name, std::uint64_t n,
                                           std::optional<std::uint64_t> param) {
    PiThreePredicate p;
    p.name_ = normalize_name(name);
    p.n_ = n;
    p.param_ = param;
    if (p.name_ == "true") {
        p.which_ = Builtin::True;
    } else if (p.name_ == "false") {
        p.which_ = Builtin::False;
    } else if (p.name_ == "even") {
        p.which_ = Builtin::Even;
    } else if (p.name_ == "threshold") {
        if (!param) throw DomainError("threshold predicate needs a parameter");
        p.which_ = Builtin::Threshold;
    } else if (p.name_ == "y_le_x") {
        p.which_ = Builtin::YLeX;
    } else {
        throw DomainError("unknown predicate '" + p.name_ +
                          "' (known: true, false, even, threshold, y_le_x)");
    }
    if (p.which_ != Builtin::Threshold && param)
        throw DomainError("predicate '" + p.name_ + "' takes no parameter");
    return p;
}

PiThreePredicate PiThreePredicate::parse(std::string_view spec, std::uint64_t n) {
    std::string_view rest = spec;
    if (rest.substr(0, 8) == "builtin:") rest.remove_prefix(8);
    std::optional<std::uint64_t> param;
    const auto colon = rest.find(':');
    std::string_view name = rest;
    if (colon != std::string_view::npos) {
        name = rest.substr(0, colon);
        const std::string digits(rest.substr(colon + 1));
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("bad predicate parameter in '" + std::string(spec) + "'");
        param = std::stoull(digits);
    }
    return builtin(name, n, param);
}

bool PiThreePredicate::eval(std::uint64_t x, std::uint64_t y) const {
    switch (which_) {
        case Builtin::True: return true;
        case Builtin::False: return false;
        case Builtin::Even: return x % 2 == 0;
        case Builtin::Threshold: return x <= *param_;
        case Builtin::YLeX: return y <= x;
    }
    return false;
}

int PiThreePredicate::limit_approx(std::uint64_t x, Stage s) const {
    for (std::uint64_t y = 0; y < s; ++y)
        if (!eval(x, y)) return 0;
    return 1;
}

std::optional<std::uint64_t> PiThreePredicate::first_fail_before(std::uint64_t x,
                                                                 std::uint64_t bound) const {
    for (std::uint64_t y = 0; y < bound; ++y)
        if (!eval(x, y)) return y;
    return std::nullopt;
}

std::string PiThreePredicate::spec_string() const {
    std::string out = "builtin:" + name_;
    if (param_) out += ":" + std::to_string(*param_);
    return out;
}

std::uint64_t subset_rank(std::uint64_t t, std::uint64_t mask) {
    if (t >= 64) throw DomainError("subset level cap is 63");
    if (mask >> t) throw DomainError("subset mask uses elements beyond " + std::to_string(t));
    return mask + 1;
}

std::uint64_t subset_unrank(std::uint64_t t, std::uint64_t rank) {
    if (t >= 64) throw DomainError("subset level cap is 63");
    if (rank == 0 || rank > (std::uint64_t{1} << t))
        throw DomainError("subset rank " + std::to_string(rank) + " out of range for level " +
                          std::to_string(t));
    return rank - 1;
}

std::string encode_natural(std::uint64_t n) {
    const std::uint64_t v = n + 1;
    unsigned b = 0;
    while ((std::uint64_t{1} << b) <= v) ++b;  // b = bit length of v
    std::string out(b, '1');
    out.push_back('0');
    for (unsigned i = b - 1; i-- > 0;) out.push_back(((v >> i) & 1) ? '1' : '0');
    return out;
}

std::uint64_t pair3(std::uint64_t t, std::uint64_t k, std::uint64_t j) {
    return cantor_pair(cantor_pair(t, k), j);
}

PointGen witness_point(std::uint64_t t, std::uint64_t k, std::uint64_t j) {
    std::string pre(static_cast<std::size_t>(t), '0');
    pre += encode_natural(pair3(t, k, j));
    return PointGen::eventually_periodic(pre, "0");
}

std::optional<WitnessId> decode_witness(const PointGen& p) {
    constexpr std::size_t kScanCap = 4096;
    std::size_t t = 0;
    while (t < kScanCap && p.bit(t) == 0) ++t;
    if (t >= kScanCap) return std::nullopt;  // all-zero start too long to be a witness
    std::size_t pos = t;
    unsigned b = 0;
    while (pos < kScanCap && p.bit(pos) == 1) {
        ++b;
        ++pos;
    }
    if (pos >= kScanCap || b == 0 || b > 63) return std::nullopt;
    ++pos;  // the '0' separator
    std::uint64_t v = std::uint64_t{1} << (b - 1);
    for (unsigned i = b - 1; i-- > 0; ++pos) {
        if (pos >= kScanCap) return std::nullopt;
        if (p.bit(pos)) v |= std::uint64_t{1} << i;
    }
    const std::uint64_t z = v - 1;
    const auto [tk, j] = cantor_unpair(z);
    const auto [t2, k] = cantor_unpair(tk);
    if (t2 != t) return std::nullopt;
    WitnessId id{t2, k, j};
    // exact match required: the tail and every earlier bit must agree
    if (!witness_point(id.t, id.k, id.j).same_stream(p)) return std::nullopt;
    return id;
}

// ---- witness-block rule ----------------------------------------------------

namespace {

// Witness table shared by all 2^t trees of one treatment.
struct BlockTable {
    std::uint64_t t, k;
    std::vector<PointGen> by_j;                               // index j-1 -> pi(t,k,j)
    std::vector<std::pair<std::string, std::uint64_t>> keys;  // sorted (canonical key, j)

    BlockTable(std::uint64_t t_in, std::uint64_t k_in) : t(t_in), k(k_in) {
        for (std::uint64_t j = 1; j <= t; ++j) by_j.push_back(witness_point(t, k, j));
        for (std::uint64_t j = 1; j <= t; ++j) keys.emplace_back(by_j[j - 1].canonical_key(), j);
        std::sort(keys.begin(), keys.end());
    }

    std::optional<std::uint64_t> find(const std::string& key) const {
        auto it = std::lower_bound(keys.begin(), keys.end(), key,
                                   [](const auto& e, const std::string& k) { return e.first < k; });
        if (it == keys.end() || it->first != key) return std::nullopt;
        return it->second;
    }
};

class WitnessBlockRule final : public TreeRule {
  public:
    WitnessBlockRule(PredicatePtr P, std::shared_ptr<const BlockTable> table, std::uint64_t jmask,
                     Stage emit_stage, unsigned oracle_budget)
        : pred_(std::move(P)), table_(std::move(table)), jmask_(jmask),
          emit_stage_(emit_stage), oracle_budget_(oracle_budget) {
        if (!pred_) throw DomainError("witness block needs a predicate");
        if (jmask_ >> table_->t)
            throw DomainError("trace mask uses witnesses beyond level " +
                              std::to_string(table_->t));
    }

    std::string kind() const override { return "witness_block"; }
    std::string label() const override {
        std::ostringstream out;
        out << "block t=" << table_->t << " k=" << table_->k << " trace=" << jmask_;
        return out.str();
    }
    bool stage_sensitive() const override { return true; }

    bool excluded_at(const BitWord& resolved, Stage s) const override {
        if (!extends_witness(resolved)) return true;
        if (const auto z = truncation_below(s); z && resolved.size() >= *z && *z <= s)
            return true;
        return false;
    }
    bool prefix_dead(const BitWord& resolved) const override {
        return excluded_at(resolved, oracle_budget_);
    }
    CellRelation classify(const BitWord& node) const override {
        if (truncation_below(oracle_budget_)) return CellRelation::Outside;  // no path survives
        if (!extends_witness(node)) return CellRelation::Outside;
        return CellRelation::Straddles;  // finite path sets have empty interior
    }
    PointDecision decide(const BitSource& source, unsigned precision) const override {
        if (truncation_below(oracle_budget_)) return {Verdict::Out, 0};
        if (auto desc = source.finite_description()) {
            const PointGen p = PointGen::parse(*desc);
            const auto j = table_->find(p.canonical_key());
            const bool member = j && ((jmask_ >> (*j - 1)) & 1);
            return {member ? Verdict::In : Verdict::Out, 0};
        }
        return TreeRule::decide(source, precision);
    }
    std::vector<PointGen> witness_points() const override {
        std::vector<PointGen> out;
        for (std::uint64_t j = 1; j <= table_->t; ++j)
            if ((jmask_ >> (j - 1)) & 1) out.push_back(table_->by_j[j - 1]);
        return out;
    }
    nlohmann::json to_json() const override {
        return {{"kind", "witness_block"},
                {"t", table_->t},
                {"k", table_->k},
                {"jmask", jmask_},
                {"emit_stage", emit_stage_}};
    }

  private:
    // Least z > emit_stage with f_z(t) = 0, searching failures below the
    // bound; nullopt while the block looks alive at this bound.
    std::optional<Stage> truncation_below(std::uint64_t bound) const {
        const auto ff = pred_->first_fail_before(table_->t, bound);
        if (!ff) return std::nullopt;
        return std::max<Stage>(emit_stage_ + 1, static_cast<Stage>(*ff + 1));
    }
    bool extends_witness(const BitWord& node) const {
        for (std::uint64_t j = 1; j <= table_->t; ++j) {
            if (!((jmask_ >> (j - 1)) & 1)) continue;
            const PointGen& w = table_->by_j[j - 1];
            bool match = true;
            for (std::size_t i = 0; i < node.size() && match; ++i)
                if (w.bit(i) != node.bit(i)) match = false;
            if (match) return true;
        }
        return false;
    }

    PredicatePtr pred_;
    std::shared_ptr<const BlockTable> table_;
    std::uint64_t jmask_;
    Stage emit_stage_;
    unsigned oracle_budget_;
};

}  // namespace

Concept witness_block_concept(PredicatePtr P, std::uint64_t t, std::uint64_t k,
                              std::uint64_t jmask, Stage emit_stage, unsigned oracle_budget) {
    auto table = std::make_shared<const BlockTable>(t, k);
    return Concept(std::make_shared<WitnessBlockRule>(std::move(P), std::move(table), jmask,
                                                      emit_stage, oracle_budget));
}

struct WitnessBlockFactory::Impl {
    PredicatePtr predicate;
    unsigned oracle_budget;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const BlockTable>> tables;
};

WitnessBlockFactory::WitnessBlockFactory(PredicatePtr P, unsigned oracle_budget)
    : impl_(std::make_unique<Impl>()) {
    if (!P) throw DomainError("witness block factory needs a predicate");
    impl_->predicate = std::move(P);
    impl_->oracle_budget = oracle_budget;
}

WitnessBlockFactory::~WitnessBlockFactory() = default;
WitnessBlockFactory::WitnessBlockFactory(WitnessBlockFactory&&) noexcept = default;
WitnessBlockFactory& WitnessBlockFactory::operator=(WitnessBlockFactory&&) noexcept = default;

Concept WitnessBlockFactory::make(std::uint64_t t, std::uint64_t k, std::uint64_t jmask,
                                  Stage emit_stage) {
    auto& table = impl_->tables[{t, k}];
    if (!table) table = std::make_shared<const BlockTable>(t, k);
    return Concept(std::make_shared<WitnessBlockRule>(impl_->predicate, table, jmask, emit_stage,
                                                      impl_->oracle_budget));
}

std::vector<Concept> witness_block_concepts(PredicatePtr P, std::uint64_t t, std::uint64_t k,
                                            Stage emit_stage, unsigned oracle_budget) {
    if (t > 20) throw DomainError("block level cap is 20 (2^t trees per block)");
    auto table = std::make_shared<const BlockTable>(t, k);
    std::vector<Concept> out;
    out.reserve(std::size_t{1} << t);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << t); ++i)
        out.push_back(Concept(
            std::make_shared<WitnessBlockRule>(P, table, i, emit_stage, oracle_budget)));
    return out;
}

// ---- stagewise loop --------------------------------------------------------

ConstructionState construction_begin(PredicatePtr P, Stage horizon, unsigned oracle_budget) {
    if (!P) throw DomainError("construction needs a predicate");
    if (horizon < 1) throw DomainError("horizon must be at least 1");
    if (horizon > kMaxHorizon)
        throw DomainError("horizon cap is " + std::to_string(kMaxHorizon) +
                          " (block sizes grow as 2^t)");
    ConstructionState state;
    state.horizon = horizon;
    state.oracle_budget = oracle_budget ? oracle_budget : 2 * horizon + 8;
    state.predicate = std::move(P);
    return state;
}

void construction_step(ConstructionState& state, Stage s) {
    if (s != state.stage + 1)
        throw DomainError("stages advance one at a time, expected " +
                          std::to_string(state.stage + 1));
    if (s > state.horizon) throw DomainError("horizon exceeded");
    for (std::uint64_t t = 1; t <= s; ++t) {
        if (state.predicate->limit_approx(t, s) != 1) continue;  // "no action is required"
        // t needs treatment only while no live block realizes its traces.
        // f_s(t) = 1 and f nonincreasing mean no stage in (emit, s] dropped
        // f, so any previous treatment of t is still live: treat at most
        // once.
        if (state.used_k.count(t) && !state.used_k[t].empty()) continue;
        std::uint64_t k = 0;
        while (state.used_k[t].count(k)) ++k;
        state.used_k[t].insert(k);
        TreatmentRecord rec;
        rec.t = t;
        rec.k = k;
        rec.emit_stage = s;
        rec.slot_lo = state.emitted.size();
        std::vector<Concept> block =
            witness_block_concepts(state.predicate, t, k, s, state.oracle_budget);
        for (Concept& c : block) state.emitted.push_back(std::move(c));
        rec.slot_hi = state.emitted.size();
        const auto ff = state.predicate->first_fail_before(t, state.oracle_budget);
        if (ff) rec.trunc_stage = std::max<Stage>(s + 1, static_cast<Stage>(*ff + 1));
        rec.live_at_horizon = !rec.trunc_stage || *rec.trunc_stage > state.horizon;
        for (std::uint64_t j = 1; j <= t; ++j) rec.witnesses.push_back(witness_point(t, k, j));
        state.treatments.push_back(std::move(rec));
    }
    state.stage = s;
}

ConstructionRun run_construction(PredicatePtr P, Stage horizon, unsigned oracle_budget) {
    ConstructionState state = construction_begin(std::move(P), horizon, oracle_budget);
    for (Stage s = 1; s <= horizon; ++s) construction_step(state, s);
    ConstructionRun run;
    run.context.predicate_spec = state.predicate->spec_string();
    run.context.n = state.predicate->n();
    run.context.horizon = horizon;
    run.context.oracle_budget = state.oracle_budget;
    for (const TreatmentRecord& r : state.treatments)
        run.stabilized[r.t] = !state.predicate->first_fail_before(r.t, state.oracle_budget);
    run.treatments = state.treatments;
    run.cls = ConceptClass(std::move(state.emitted), Effectivity::Effective);
    return run;
}

bool verify_disjoint_witnesses(const ConceptClass& cls) {
    for (std::size_t n = 0; n < cls.emitted(); ++n) {
        const Concept& c = cls.at(n);
        std::optional<std::pair<std::uint64_t, std::uint64_t>> treatment;
        for (const PointGen& p : c.rule()->witness_points()) {
            const auto id = decode_witness(p);
            if (!id) continue;  // foreign paths carry no treatment tag
            const std::pair<std::uint64_t, std::uint64_t> tk{id->t, id->k};
            if (treatment && *treatment != tk) return false;
            treatment = tk;
        }
    }
    return true;
}

bool verify_prefix_agreement(const std::vector<TreatmentRecord>& treatments) {
    struct Entry {
        const PointGen* p;
        std::uint64_t t;
    };
    std::vector<Entry> all;
    for (const TreatmentRecord& r : treatments)
        for (const PointGen& w : r.witnesses) all.push_back({&w, r.t});
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            const std::uint64_t cut = std::min(all[a].t, all[b].t);
            for (std::uint64_t q = 0; q < cut; ++q)
                if (all[a].p->bit(q) != all[b].p->bit(q)) return false;
        }
    return true;
}

std::vector<GrowthEntry> vc_growth_profile(const ConstructionRun& run, unsigned budget) {
    const unsigned use_budget = budget ? budget : run.context.oracle_budget;
    std::vector<GrowthEntry> out;
    for (const TreatmentRecord& r : run.treatments) {
        GrowthEntry entry;
        entry.t = r.t;
        entry.k = r.k;
        entry.stabilized = run.stabilized.count(r.t) ? run.stabilized.at(r.t) : false;
        // code length for pair3 of desk-scale triples stays under 131 bits
        const unsigned precision = static_cast<unsigned>(r.t) + 131;
        const WitnessPool pool(r.witnesses, precision);
        const std::vector<std::uint64_t> traces =
            membership_traces(run.cls, r.slot_lo, r.slot_hi, pool, use_budget);
        std::vector<std::uint64_t> distinct = traces;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        entry.shattered = distinct.size() == (std::uint64_t{1} << r.t);
        out.push_back(entry);
    }
    return out;
}

}  // namespace ecl
