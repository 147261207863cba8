#pragma once

// Shattering and VC dimension over a finite witness pool, evaluated at a
// decision budget.  Membership of pool points in enumerated concepts is
// decided by decide_point; a boundary-unresolved answer is an error
// (UndecidedMembership), never a silent default.

#include "ecl/cantor.hpp"
#include "ecl/pi01.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ecl {

// Finite list of finitely generated points, pairwise distinguishable
// within `precision` bits.
struct WitnessPool {
    std::vector<PointGen> points;
    unsigned precision{64};

    WitnessPool(std::vector<PointGen> pts, unsigned prec);
    std::size_t size() const { return points.size(); }
};

struct ShatterReport {
    std::vector<std::size_t> subset;   // pool indices, ascending
    std::uint64_t realized{0};         // number of distinct traces on subset
    std::vector<std::uint64_t> traces; // sorted trace masks, bit j <-> subset[j]
    unsigned budget{0};
};

// Membership matrix: one trace mask per concept over the whole pool.
// Pool size is capped at 64 so traces fit one word.
std::vector<std::uint64_t> membership_traces(const ConceptClass& cls, std::size_t prefix_lo,
                                             std::size_t prefix_hi, const WitnessPool& pool,
                                             unsigned budget);

ShatterReport shatter_count(const ConceptClass& cls, std::size_t prefix_len,
                            const WitnessPool& pool, const std::vector<std::size_t>& subset,
                            unsigned budget);

bool is_shattered(const ConceptClass& cls, std::size_t prefix_len, const WitnessPool& pool,
                  const std::vector<std::size_t>& subset, unsigned budget);

struct VcSearchResult {
    bool found{false};
    std::vector<std::size_t> witness;      // first shattered subset, lexicographic
    std::uint64_t best_realized{0};        // max trace count over searched subsets
    std::uint64_t subsets_searched{0};
};

// Exhaustive search for a shattered d-subset of the pool, lexicographic
// over index tuples, stopping at the first witness.
VcSearchResult vc_lower_bound(const ConceptClass& cls, std::size_t prefix_len,
                              const WitnessPool& pool, std::size_t d, unsigned budget);

// True iff some n-subset of the pool realizes all 2^n traces within the
// enumerated prefix: the finite-horizon surrogate of "VC dimension >= n".
bool infinite_vc_horizon_check(const ConceptClass& cls, std::size_t n, const WitnessPool& pool,
                               std::size_t prefix_len, unsigned budget);

}  // namespace ecl
