#include "ecl/vc.hpp"

#include "ecl/errors.hpp"

#include <algorithm>
#include <string>

namespace ecl {

namespace {

constexpr std::size_t kMaxPool = 64;     // traces are packed into one word
constexpr std::size_t kMaxSubset = 20;   // 2^|S| trace table stays small

void validate_subset(const std::vector<std::size_t>& subset, std::size_t pool_size) {
    if (subset.size() > kMaxSubset)
        throw DomainError("subset size " + std::to_string(subset.size()) +
                          " exceeds shatter limit " + std::to_string(kMaxSubset));
    for (std::size_t j = 0; j < subset.size(); ++j) {
        if (subset[j] >= pool_size)
            throw DomainError("subset index " + std::to_string(subset[j]) +
                              " out of range for pool of size " + std::to_string(pool_size));
        if (j > 0 && subset[j] <= subset[j - 1])
            throw DomainError("subset indices must be strictly ascending");
    }
}

std::uint64_t trace_on(const Concept& c, const WitnessPool& pool,
                       const std::vector<std::size_t>& subset, unsigned budget) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < subset.size(); ++j) {
        PointDecision d = decide_point(c, pool.points[subset[j]], budget);
        if (d.verdict == Verdict::BoundaryUnresolved)
            throw UndecidedMembership(pool.points[subset[j]].description(), c.label());
        if (d.verdict == Verdict::In) mask |= std::uint64_t{1} << j;
    }
    return mask;
}

}  // namespace

WitnessPool::WitnessPool(std::vector<PointGen> pts, unsigned prec)
    : points(std::move(pts)), precision(prec) {
    if (precision == 0) throw DomainError("pool precision must be positive");
    if (points.size() > kMaxPool)
        throw DomainError("pool size " + std::to_string(points.size()) + " exceeds limit " +
                          std::to_string(kMaxPool));
    std::vector<BitWord> prefixes;
    prefixes.reserve(points.size());
    for (const auto& p : points) prefixes.push_back(p.prefix(precision));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (prefixes[i] == prefixes[j])
                throw DomainError("pool points " + std::to_string(i) + " and " +
                                  std::to_string(j) +
                                  " are indistinguishable within precision " +
                                  std::to_string(precision));
}

std::vector<std::uint64_t> membership_traces(const ConceptClass& cls, std::size_t prefix_lo,
                                             std::size_t prefix_hi, const WitnessPool& pool,
                                             unsigned budget) {
    if (prefix_lo > prefix_hi) throw DomainError("empty concept range is reversed");
    std::vector<std::uint64_t> traces;
    traces.reserve(prefix_hi - prefix_lo);
    for (std::size_t n = prefix_lo; n < prefix_hi; ++n) {
        const Concept& c = cls.at(n);
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            PointDecision d = decide_point(c, pool.points[j], budget);
            if (d.verdict == Verdict::BoundaryUnresolved)
                throw UndecidedMembership(pool.points[j].description(), c.label());
            if (d.verdict == Verdict::In) mask |= std::uint64_t{1} << j;
        }
        traces.push_back(mask);
    }
    return traces;
}

ShatterReport shatter_count(const ConceptClass& cls, std::size_t prefix_len,
                            const WitnessPool& pool, const std::vector<std::size_t>& subset,
                            unsigned budget) {
    validate_subset(subset, pool.size());
    const std::uint64_t want = std::uint64_t{1} << subset.size();
    std::vector<std::uint64_t> distinct;  // kept sorted; early exit once full
    for (std::size_t n = 0; n < prefix_len && distinct.size() < want; ++n) {
        std::uint64_t t = trace_on(cls.at(n), pool, subset, budget);
        auto it = std::lower_bound(distinct.begin(), distinct.end(), t);
        if (it == distinct.end() || *it != t) distinct.insert(it, t);
    }
    ShatterReport r;
    r.subset = subset;
    r.realized = distinct.size();
    r.traces = std::move(distinct);
    r.budget = budget;
    return r;
}

bool is_shattered(const ConceptClass& cls, std::size_t prefix_len, const WitnessPool& pool,
                  const std::vector<std::size_t>& subset, unsigned budget) {
    validate_subset(subset, pool.size());
    return shatter_count(cls, prefix_len, pool, subset, budget).realized ==
           (std::uint64_t{1} << subset.size());
}

VcSearchResult vc_lower_bound(const ConceptClass& cls, std::size_t prefix_len,
                              const WitnessPool& pool, std::size_t d, unsigned budget) {
    VcSearchResult out;
    if (d > kMaxSubset)
        throw DomainError("dimension probe " + std::to_string(d) + " exceeds shatter limit " +
                          std::to_string(kMaxSubset));
    if (d == 0) {
        // The empty set is shattered by any nonempty enumeration prefix.
        out.found = prefix_len > 0;
        out.best_realized = out.found ? 1 : 0;
        out.subsets_searched = 1;
        return out;
    }
    if (d > pool.size() || prefix_len == 0) return out;

    // One decision pass over the whole matrix, then pure bit work per subset.
    std::vector<std::uint64_t> matrix = membership_traces(cls, 0, prefix_len, pool, budget);
    std::sort(matrix.begin(), matrix.end());
    matrix.erase(std::unique(matrix.begin(), matrix.end()), matrix.end());

    const std::uint64_t want = std::uint64_t{1} << d;
    std::vector<char> seen(static_cast<std::size_t>(want), 0);
    std::vector<std::uint64_t> touched;
    touched.reserve(static_cast<std::size_t>(want));

    std::vector<std::size_t> comb(d);
    for (std::size_t j = 0; j < d; ++j) comb[j] = j;
    while (true) {
        ++out.subsets_searched;
        std::uint64_t realized = 0;
        for (std::uint64_t row : matrix) {
            std::uint64_t proj = 0;
            for (std::size_t j = 0; j < d; ++j)
                proj |= ((row >> comb[j]) & 1u) << j;
            if (!seen[static_cast<std::size_t>(proj)]) {
                seen[static_cast<std::size_t>(proj)] = 1;
                touched.push_back(proj);
                if (++realized == want) break;
            }
        }
        for (std::uint64_t t : touched) seen[static_cast<std::size_t>(t)] = 0;
        touched.clear();
        out.best_realized = std::max(out.best_realized, realized);
        if (realized == want) {
            out.found = true;
            out.witness = comb;
            return out;
        }
        // next combination in lexicographic order
        std::size_t j = d;
        while (j > 0 && comb[j - 1] == pool.size() - d + (j - 1)) --j;
        if (j == 0) break;
        ++comb[j - 1];
        for (std::size_t k = j; k < d; ++k) comb[k] = comb[k - 1] + 1;
    }
    return out;
}

bool infinite_vc_horizon_check(const ConceptClass& cls, std::size_t n, const WitnessPool& pool,
                               std::size_t prefix_len, unsigned budget) {
    return vc_lower_bound(cls, prefix_len, pool, n, budget).found;
}

}  // namespace ecl
