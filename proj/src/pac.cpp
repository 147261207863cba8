#include "ecl/pac.hpp"

#include "ecl/errors.hpp"
#include "ecl/parallel.hpp"
#include "ecl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ecl {

namespace {

// Membership as a strict bit; unresolved raises.
int required_label(const Concept& c, const PointGen& p, unsigned budget) {
    const PointDecision d = decide_point(c, p, budget);
    if (d.verdict == Verdict::BoundaryUnresolved)
        throw UndecidedMembership(p.description(), c.label());
    return d.verdict == Verdict::In ? 1 : 0;
}

// Fixed shard count so Monte Carlo output is a function of (seed, samples)
// alone; workers only change scheduling.
constexpr std::uint64_t kMcShards = 64;

}  // namespace

Distribution Distribution::finite_support(std::vector<PointGen> atoms,
                                          std::vector<Rational> weights) {
    if (atoms.empty()) throw DomainError("finite-support distribution needs atoms");
    if (atoms.size() != weights.size())
        throw DomainError("atom/weight count mismatch: " + std::to_string(atoms.size()) + " vs " +
                          std::to_string(weights.size()));
    Rational total(0);
    for (const Rational& w : weights) {
        if (w < 0) throw DomainError("negative weight " + rational_str(w));
        total += w;
    }
    if (total != 1) throw DomainError("weights sum to " + rational_str(total) + ", need 1");
    std::set<std::string> keys;
    for (const PointGen& a : atoms)
        if (!keys.insert(a.canonical_key()).second)
            throw DomainError("duplicate atom " + a.description());
    Distribution d;
    d.kind_ = Kind::FiniteSupport;
    d.atoms_ = std::move(atoms);
    d.weights_ = std::move(weights);
    Rational cum(0);
    for (std::size_t i = 0; i + 1 < d.weights_.size(); ++i) {
        cum += d.weights_[i];
        d.cut_.push_back(scaled_threshold(cum));
    }
    return d;
}

Distribution Distribution::product_bernoulli(const Rational& p, unsigned precision) {
    if (p < 0 || p > 1) throw DomainError("bit bias must lie in [0,1], got " + rational_str(p));
    if (precision == 0 || precision > 512)
        throw DomainError("product distribution precision must lie in [1,512]");
    Distribution d;
    d.kind_ = Kind::ProductBernoulli;
    d.p_ = p;
    d.precision_ = precision;
    d.bit_threshold_ = scaled_threshold(p);
    return d;
}

std::size_t Distribution::sample_index(std::mt19937_64& gen) const {
    if (kind_ != Kind::FiniteSupport)
        throw DomainError("sample_index applies to finite-support distributions only");
    const std::uint64_t u = gen();
    for (std::size_t i = 0; i < cut_.size(); ++i)
        if (u < cut_[i]) return i;
    return atoms_.size() - 1;
}

PointGen Distribution::sample(std::mt19937_64& gen) const {
    if (kind_ == Kind::FiniteSupport) return atoms_[sample_index(gen)];
    std::string bits;
    bits.reserve(precision_);
    for (unsigned i = 0; i < precision_; ++i)
        bits.push_back(bernoulli_draw(gen, bit_threshold_) ? '1' : '0');
    return PointGen::eventually_periodic(bits, "0");
}

Rational concept_mass(const Distribution& D, const Concept& c, unsigned budget) {
    if (D.kind() != Distribution::Kind::FiniteSupport)
        throw DomainError("exact concept mass needs a finite-support distribution");
    Rational mass(0);
    for (std::size_t i = 0; i < D.atoms().size(); ++i)
        if (required_label(c, D.atoms()[i], budget)) mass += D.weights()[i];
    return mass;
}

void validate_pac_params(const PacParams& p) {
    if (p.eps <= 0 || p.eps >= Rational(1, 2))
        throw DomainError("eps must lie in (0,1/2), got " + rational_str(p.eps));
    if (p.delta <= 0 || p.delta >= Rational(1, 2))
        throw DomainError("delta must lie in (0,1/2), got " + rational_str(p.delta));
}

LabeledSample draw_sample(const Distribution& D, std::uint64_t m, const Concept& target,
                          std::uint64_t seed, unsigned budget) {
    if (m == 0) throw DomainError("sample size must be positive");
    std::mt19937_64 gen(seed);
    LabeledSample sample;
    sample.target_label = target.label();
    sample.seed = seed;
    sample.examples.reserve(m);
    for (std::uint64_t j = 0; j < m; ++j) {
        PointGen x = D.sample(gen);
        const int label = required_label(target, x, budget);
        sample.examples.push_back({std::move(x), label});
    }
    return sample;
}

std::uint64_t behw_sample_size(const PacParams& p, std::uint64_t d) {
    validate_pac_params(p);
    const long double eps = static_cast<long double>(p.eps.convert_to<double>());
    const long double delta = static_cast<long double>(p.delta.convert_to<double>());
    const long double value =
        (4.0L / eps) * (static_cast<long double>(d) * std::log(12.0L / eps) +
                        std::log(2.0L / delta));
    return static_cast<std::uint64_t>(std::ceil(value));
}

std::size_t consistent_learner(const LabeledSample& sample, const ConceptClass& cls,
                               std::size_t prefix_len, unsigned budget) {
    for (std::size_t k = 0; k < prefix_len; ++k) {
        const Concept& c = cls.at(k);
        bool consistent = true;
        for (const LabeledExample& ex : sample.examples) {
            const PointDecision d = decide_point(c, ex.point, budget);
            if (d.verdict == Verdict::BoundaryUnresolved ||
                (d.verdict == Verdict::In) != (ex.label == 1)) {
                consistent = false;
                break;
            }
        }
        if (consistent) return k;
    }
    throw NoConsistentHypothesis("no concept among the first " + std::to_string(prefix_len) +
                                 " agrees with all " + std::to_string(sample.examples.size()) +
                                 " labeled examples");
}

MassEstimate error_mass(const Distribution& D, const Concept& h, const Concept& c,
                        unsigned budget, std::uint64_t mc_samples, std::uint64_t seed,
                        unsigned workers) {
    MassEstimate out;
    if (D.kind() == Distribution::Kind::FiniteSupport) {
        out.exact = true;
        Rational mass(0);
        for (std::size_t i = 0; i < D.atoms().size(); ++i) {
            if (D.weights()[i] == 0) continue;
            const int in_h = required_label(h, D.atoms()[i], budget);
            const int in_c = required_label(c, D.atoms()[i], budget);
            if (in_h != in_c) mass += D.weights()[i];
        }
        out.mass = mass;
        out.estimate = mass.convert_to<double>();
        return out;
    }
    if (mc_samples == 0) throw DomainError("Monte Carlo mass needs a positive sample count");
    struct Shard {
        std::uint64_t differing{0};
        std::uint64_t unresolved{0};
    };
    std::vector<Shard> shards(kMcShards);
    const std::uint64_t base = mc_samples / kMcShards;
    const std::uint64_t rem = mc_samples % kMcShards;
    parallel_indexed(kMcShards, workers, [&](std::size_t i) {
        std::mt19937_64 gen(derive_seed(seed, i));
        const std::uint64_t n = base + (i < rem ? 1 : 0);
        for (std::uint64_t j = 0; j < n; ++j) {
            const PointGen x = D.sample(gen);
            const PointDecision dh = decide_point(h, x, budget);
            const PointDecision dc = decide_point(c, x, budget);
            if (dh.verdict == Verdict::BoundaryUnresolved ||
                dc.verdict == Verdict::BoundaryUnresolved) {
                ++shards[i].unresolved;
                continue;
            }
            if ((dh.verdict == Verdict::In) != (dc.verdict == Verdict::In))
                ++shards[i].differing;
        }
    });
    for (const Shard& s : shards) {
        out.differing += s.differing;
        out.unresolved += s.unresolved;
    }
    out.samples = mc_samples;
    const std::uint64_t counted = mc_samples - out.unresolved;
    out.estimate = counted ? static_cast<double>(out.differing) / static_cast<double>(counted) : 0.0;
    return out;
}

PacReport pac_experiment(const ConceptClass& cls, std::size_t prefix_len, std::size_t target,
                         const Distribution& D, const PacParams& params, std::uint64_t d,
                         std::uint64_t trials, std::uint64_t seed, unsigned budget,
                         unsigned workers, std::uint64_t mc_samples) {
    validate_pac_params(params);
    if (trials == 0) throw DomainError("trial count must be positive");
    if (target >= prefix_len)
        throw DomainError("target slot " + std::to_string(target) +
                          " lies outside the learned prefix " + std::to_string(prefix_len));
    PacReport report;
    report.trials = trials;
    report.m_used = behw_sample_size(params, d);
    report.records.resize(trials);
    const Concept& target_concept = cls.at(target);
    parallel_indexed(trials, workers, [&](std::size_t i) {
        TrialRecord& rec = report.records[i];
        rec.trial = i;
        rec.seed = derive_seed(seed, i);
        try {
            const LabeledSample sample =
                draw_sample(D, report.m_used, target_concept, rec.seed, budget);
            rec.hypothesis = consistent_learner(sample, cls, prefix_len, budget);
            const MassEstimate err = error_mass(D, cls.at(rec.hypothesis), target_concept, budget,
                                                mc_samples, derive_seed(rec.seed, 0x6d61737375ull),
                                                1);
            rec.error_exact = err.exact;
            if (err.exact) {
                rec.error = err.mass;
                rec.error_estimate = err.estimate;
                rec.success = err.mass <= params.eps;
            } else {
                rec.error_estimate = err.estimate;
                rec.success = err.estimate <= params.eps.convert_to<double>();
            }
        } catch (const UndecidedMembership&) {
            if (D.kind() == Distribution::Kind::ProductBernoulli) {
                // measure-zero boundary hit: abort this trial, keep the run
                rec.aborted = true;
                rec.success = false;
                return;
            }
            throw;
        }
    });
    for (const TrialRecord& rec : report.records) {
        if (rec.aborted) ++report.aborted;
        if (rec.success) ++report.successes;
    }
    report.success_rate = Rational(Int(report.successes), Int(report.trials));
    return report;
}

bool transversal_check(const std::vector<PointGen>& N, const std::vector<Concept>& R,
                       const Distribution& D, const Rational& eps, unsigned budget) {
    if (eps <= 0 || eps >= 1) throw DomainError("eps must lie in (0,1), got " + rational_str(eps));
    for (const Concept& c : R) {
        if (concept_mass(D, c, budget) <= eps) continue;
        bool hit = false;
        for (const PointGen& x : N) {
            if (required_label(c, x, budget)) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

bool q_membership(const std::vector<PointGen>& xs, const std::vector<Concept>& R,
                  const Distribution& D, const Rational& eps, unsigned budget) {
    std::vector<PointGen> distinct;
    std::set<std::string> keys;
    for (const PointGen& x : xs)
        if (keys.insert(x.canonical_key()).second) distinct.push_back(x);
    return !transversal_check(distinct, R, D, eps, budget);
}

bool j_membership(const std::vector<PointGen>& xs, const std::vector<PointGen>& ys,
                  const std::vector<Concept>& R, const Distribution& D, const Rational& eps,
                  unsigned budget) {
    if (xs.size() != ys.size())
        throw DomainError("tuple lengths differ: " + std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()));
    if (eps <= 0 || eps >= 1) throw DomainError("eps must lie in (0,1), got " + rational_str(eps));
    const Rational m(Int(xs.size()));
    for (const Concept& c : R) {
        if (concept_mass(D, c, budget) <= eps) continue;
        bool in_xs = false;
        for (const PointGen& x : xs)
            if (required_label(c, x, budget)) {
                in_xs = true;
                break;
            }
        if (in_xs) continue;
        std::uint64_t count = 0;
        for (const PointGen& y : ys)
            if (required_label(c, y, budget)) ++count;
        if (Rational(Int(count)) >= eps * m / 2) return true;
    }
    return false;
}

}  // namespace ecl
