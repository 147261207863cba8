#pragma once

// Probability on the instance space and the learning experiment:
// distributions (exact finite support, product-Bernoulli prefixes),
// labeled sample drawing, the BEHW sample-size bound, the first-consistent
// learner, symmetric-difference error mass, seeded (eps, delta) trials,
// and the epsilon-transversal predicates.

#include "ecl/cantor.hpp"
#include "ecl/pi01.hpp"
#include "ecl/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ecl {

// Sampleable probability measure.  Finite support keeps exact rational
// weights; product-Bernoulli draws `precision` i.i.d. biased bits and pads
// the point with zeros, so every sampled point is finitely described.
class Distribution {
  public:
    enum class Kind { FiniteSupport, ProductBernoulli };

    static Distribution finite_support(std::vector<PointGen> atoms,
                                       std::vector<Rational> weights);
    static Distribution product_bernoulli(const Rational& p, unsigned precision);

    Kind kind() const { return kind_; }
    const std::vector<PointGen>& atoms() const { return atoms_; }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& bernoulli_p() const { return p_; }
    unsigned precision() const { return precision_; }

    std::size_t sample_index(std::mt19937_64& gen) const;  // finite support only
    PointGen sample(std::mt19937_64& gen) const;

  private:
    Distribution() = default;

    Kind kind_{Kind::FiniteSupport};
    std::vector<PointGen> atoms_;
    std::vector<Rational> weights_;
    std::vector<std::uint64_t> cut_;  // scaled cumulative weights, size k-1
    Rational p_{0};
    unsigned precision_{0};
    std::uint64_t bit_threshold_{0};
};

// Exact mass a finite-support distribution puts on a concept.
Rational concept_mass(const Distribution& D, const Concept& c, unsigned budget);

struct LabeledExample {
    PointGen point;
    int label{0};
};

struct LabeledSample {
    std::vector<LabeledExample> examples;
    std::string target_label;
    std::uint64_t seed{0};
};

struct PacParams {
    Rational eps;
    Rational delta;
};

// eps, delta in (0, 1/2).
void validate_pac_params(const PacParams& p);

// m i.i.d. draws labeled by the target's membership; reproducible from the
// seed.  An unresolved label raises UndecidedMembership.
LabeledSample draw_sample(const Distribution& D, std::uint64_t m, const Concept& target,
                          std::uint64_t seed, unsigned budget);

// ceil((4/eps) * (d * ln(12/eps) + ln(2/delta))).
std::uint64_t behw_sample_size(const PacParams& p, std::uint64_t d);

// Least k < prefix_len whose concept agrees with every labeled pair at the
// budget; a concept with any unresolved membership on the sample is never
// chosen.  Throws NoConsistentHypothesis when the prefix has no match.
std::size_t consistent_learner(const LabeledSample& sample, const ConceptClass& cls,
                               std::size_t prefix_len, unsigned budget);

struct MassEstimate {
    bool exact{false};
    Rational mass{0};             // exact value when exact
    double estimate{0};           // Monte Carlo value otherwise
    std::uint64_t samples{0};
    std::uint64_t differing{0};
    std::uint64_t unresolved{0};  // Monte Carlo draws with undecided membership
};

// P(h symdiff c): exact atom-weight sum for finite support, seeded Monte
// Carlo over fixed shards otherwise (worker count never changes the
// result).
MassEstimate error_mass(const Distribution& D, const Concept& h, const Concept& c,
                        unsigned budget, std::uint64_t mc_samples = 0, std::uint64_t seed = 0,
                        unsigned workers = 1);

struct TrialRecord {
    std::uint64_t trial{0};
    std::uint64_t seed{0};
    std::size_t hypothesis{0};
    bool success{false};
    bool aborted{false};  // a product-measure label stayed unresolved
    bool error_exact{false};
    Rational error{0};
    double error_estimate{0};
};

struct PacReport {
    std::uint64_t trials{0};
    std::uint64_t successes{0};
    std::uint64_t aborted{0};
    std::uint64_t m_used{0};
    Rational success_rate{0};  // successes / trials, exact
    std::vector<TrialRecord> records;
};

// Per trial: draw behw_sample_size(params, d) examples from D labeled by
// cls.at(target), learn the first consistent hypothesis in the prefix,
// measure the symmetric-difference mass, succeed iff it is <= eps.
// Deterministic given the seed regardless of worker count.
PacReport pac_experiment(const ConceptClass& cls, std::size_t prefix_len, std::size_t target,
                         const Distribution& D, const PacParams& params, std::uint64_t d,
                         std::uint64_t trials, std::uint64_t seed, unsigned budget,
                         unsigned workers = 1, std::uint64_t mc_samples = 20000);

// True iff every listed concept of mass > eps contains a point of N.
// Requires finite support (the mass must be exactly computable).
bool transversal_check(const std::vector<PointGen>& N, const std::vector<Concept>& R,
                       const Distribution& D, const Rational& eps, unsigned budget);

// True iff the distinct elements of xs fail to be an eps-transversal.
bool q_membership(const std::vector<PointGen>& xs, const std::vector<Concept>& R,
                  const Distribution& D, const Rational& eps, unsigned budget);

// True iff some concept of mass > eps avoids xs entirely while at least
// eps*m/2 of the ys positions land inside it (inclusive count compare).
bool j_membership(const std::vector<PointGen>& xs, const std::vector<PointGen>& ys,
                  const std::vector<Concept>& R, const Distribution& D, const Rational& eps,
                  unsigned budget);

}  // namespace ecl
