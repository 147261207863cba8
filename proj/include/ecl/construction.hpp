#pragma once

// Finite-horizon run of the stagewise class-building loop: a decidable
// predicate R(x,y,n) induces limit approximations f_s(x) = [forall y<s
// R(x,y,n)]; whenever f flags a level t as still alive, a block of 2^t
// lazily truncated witness trees is emitted whose traces on the t fresh
// witness points realize every subset, so the witnesses are shattered for
// exactly as long as f keeps confirming t.

#include "ecl/cantor.hpp"
#include "ecl/pi01.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ecl {

// R drawn from a closed catalog of total procedures:
//   true        R = 1
//   false       R = 0
//   even        R(x,y,n) = [x even]
//   threshold   R(x,y,n) = [x <= param]
//   y_le_x      R(x,y,n) = [y <= x]
class PiThreePredicate {
  public:
    static PiThreePredicate builtin(std::string_view name, std::uint64_t n,
                                    std::optional<std::uint64_t> param = std::nullopt);
    // "builtin:even", "builtin:threshold:5"; '-' and '_' both accepted.
    static PiThreePredicate parse(std::string_view spec, std::uint64_t n);

    bool eval(std::uint64_t x, std::uint64_t y) const;
    // f_s(x) = 1 iff R(x,y,n) for all y < s; nonincreasing in s.
    int limit_approx(std::uint64_t x, Stage s) const;
    // Least y < bound with !R(x,y,n), when one exists.
    std::optional<std::uint64_t> first_fail_before(std::uint64_t x, std::uint64_t bound) const;

    const std::string& name() const { return name_; }
    std::uint64_t n() const { return n_; }
    std::optional<std::uint64_t> param() const { return param_; }
    std::string spec_string() const;  // round-trips through parse

  private:
    PiThreePredicate() = default;

    enum class Builtin { True, False, Even, Threshold, YLeX };
    Builtin which_{Builtin::True};
    std::string name_;
    std::uint64_t n_{0};
    std::optional<std::uint64_t> param_;
};

using PredicatePtr = std::shared_ptr<const PiThreePredicate>;

inline int limit_approx(const PiThreePredicate& P, std::uint64_t x, Stage s) {
    return P.limit_approx(x, s);
}

// Bijection between subsets of {1..t} (bitmask: bit i-1 <-> element i) and
// ranks {1..2^t}: rank = 1 + mask.
std::uint64_t subset_rank(std::uint64_t t, std::uint64_t mask);
std::uint64_t subset_unrank(std::uint64_t t, std::uint64_t rank);

// Self-delimiting code of a natural, starting with '1': with b the bit
// length of N+1, emit b ones, one zero, then the b-1 low bits of N+1.
std::string encode_natural(std::uint64_t n);
std::uint64_t pair3(std::uint64_t t, std::uint64_t k, std::uint64_t j);

// Witness stream: t zeros, the code of pair3(t,k,j), then zeros.  Distinct
// triples give distinct streams, and any two witnesses agree below
// min(t,t').
PointGen witness_point(std::uint64_t t, std::uint64_t k, std::uint64_t j);

struct WitnessId {
    std::uint64_t t{0}, k{0}, j{0};
    friend bool operator==(const WitnessId&, const WitnessId&) = default;
};
// Inverse of witness_point on exact matches; nullopt for any other stream.
std::optional<WitnessId> decode_witness(const PointGen& p);

// One emitted tree: the paths are the witnesses {pi(t,k,j) : j in jmask},
// kept only while no stage z in (emit_stage, query] has f_z(t) = 0; once
// such a z exists every node of length >= z dies, leaving no paths.
// Stage-blind views (classify, oracle, decide) commit to searching the
// truncation up to oracle_budget.
Concept witness_block_concept(PredicatePtr P, std::uint64_t t, std::uint64_t k,
                              std::uint64_t jmask, Stage emit_stage, unsigned oracle_budget);
// All 2^t trees of one treatment, sharing one witness table; index i holds
// jmask = i (= subset_unrank(t, i+1)).
std::vector<Concept> witness_block_concepts(PredicatePtr P, std::uint64_t t, std::uint64_t k,
                                            Stage emit_stage, unsigned oracle_budget);

// Rebuilds witness-block concepts one at a time while still sharing one
// witness table per (t,k); used when reloading serialized catalogs.
class WitnessBlockFactory {
  public:
    WitnessBlockFactory(PredicatePtr P, unsigned oracle_budget);
    ~WitnessBlockFactory();
    WitnessBlockFactory(WitnessBlockFactory&&) noexcept;
    WitnessBlockFactory& operator=(WitnessBlockFactory&&) noexcept;

    Concept make(std::uint64_t t, std::uint64_t k, std::uint64_t jmask, Stage emit_stage);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TreatmentRecord {
    std::uint64_t t{0};
    std::uint64_t k{0};
    Stage emit_stage{0};
    std::size_t slot_lo{0};
    std::size_t slot_hi{0};            // block occupies [slot_lo, slot_hi)
    std::optional<Stage> trunc_stage;  // least z > emit_stage with f_z(t) = 0, searched to the budget
    bool live_at_horizon{true};        // no truncation at any stage <= horizon
    std::vector<PointGen> witnesses;   // pi(t,k,j) for j = 1..t
};

struct ConstructionState {
    Stage stage{0};
    Stage horizon{0};
    unsigned oracle_budget{0};
    PredicatePtr predicate;
    std::map<std::uint64_t, std::set<std::uint64_t>> used_k;  // per-t used indices
    std::vector<Concept> emitted;
    std::vector<TreatmentRecord> treatments;
};

// Serializable parameters of a finished run; enough to rebuild the class.
struct ConstructionContext {
    std::string predicate_spec;
    std::uint64_t n{0};
    Stage horizon{0};
    unsigned oracle_budget{0};
};

struct ConstructionRun {
    ConceptClass cls;
    std::vector<TreatmentRecord> treatments;
    std::map<std::uint64_t, bool> stabilized;  // treated t -> no failure found within the budget
    ConstructionContext context;
};

ConstructionState construction_begin(PredicatePtr P, Stage horizon, unsigned oracle_budget = 0);

// Advances to stage s = state.stage + 1: every t <= s with f_s(t) = 1 and
// no live block is treated with the least unused k, emitting 2^t trees.
void construction_step(ConstructionState& state, Stage s);

// Runs stages 1..H.  oracle_budget 0 means the default 2H + 8.
ConstructionRun run_construction(PredicatePtr P, Stage horizon, unsigned oracle_budget = 0);

// True iff no concept's explicit paths decode to witnesses of two distinct
// treatments (t,k).  Works on hand-built classes as a negative control.
bool verify_disjoint_witnesses(const ConceptClass& cls);

// True iff every pair of recorded witnesses agrees on all positions below
// min of their levels.
bool verify_prefix_agreement(const std::vector<TreatmentRecord>& treatments);

struct GrowthEntry {
    std::uint64_t t{0};
    std::uint64_t k{0};
    bool stabilized{false};
    bool shattered{false};
};

/// Per treatment: are the t witnesses shattered by the block's own slots?
// budget 0 means the run's oracle budget.
std::vector<GrowthEntry> vc_growth_profile(const ConstructionRun& run, unsigned budget = 0);

}  // namespace ecl
