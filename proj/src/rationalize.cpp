// Monte Carlo certified rational rounding of an arbitrary-coefficient
// halfspace.  Lives apart from concepts.cpp because it needs the
// Distribution type.

#include "ecl/concepts.hpp"
#include "ecl/errors.hpp"
#include "ecl/pac.hpp"
#include "ecl/parallel.hpp"
#include "ecl/rng.hpp"

#include <cmath>

namespace ecl {

namespace {

constexpr std::uint64_t kShards = 64;
constexpr unsigned kDenomStart = 3;
constexpr unsigned kDenomStep = 3;
constexpr unsigned kDenomCap = 45;
constexpr unsigned kCoordBits = 64;  // decoded per-coordinate depth

Rational round_to_denominator(double value, unsigned q) {
    const long double scaled = static_cast<long double>(value) * std::exp2(static_cast<long double>(q));
    if (!(std::fabs(scaled) < 0x1p62L))
        throw DomainError("coefficient too large to round: " + std::to_string(value));
    const long long num = std::llround(scaled);
    return Rational(Int(num), Int(1) << q);
}

struct DecodedPoint {
    std::vector<Rational> exact;  // dyadic, kCoordBits bits
    std::vector<double> approx;   // same values in double
};

DecodedPoint decode_point(const PointGen& p, std::size_t d) {
    DecodedPoint out;
    out.exact.reserve(d);
    out.approx.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        std::uint64_t num = 0;
        for (unsigned k = 0; k < kCoordBits; ++k)
            num = (num << 1) | static_cast<std::uint64_t>(p.bit(k * d + c));
        out.exact.push_back(Rational(Int(num), Int(1) << kCoordBits));
        out.approx.push_back(std::ldexp(static_cast<double>(num), -static_cast<int>(kCoordBits)));
    }
    return out;
}

}  // namespace

RationalizeReport rationalize_hyperplane(const std::vector<double>& a, double b,
                                         const Distribution& mu, const Rational& eps,
                                         std::uint64_t samples, std::uint64_t seed,
                                         unsigned workers) {
    if (a.empty()) throw DomainError("hyperplane needs at least one coefficient");
    if (a.size() > 8) throw DomainError("halfspace dimension cap is 8");
    for (double coeff : a)
        if (!std::isfinite(coeff)) throw DomainError("coefficients must be finite");
    if (!std::isfinite(b)) throw DomainError("offset must be finite");
    if (eps <= 0 || eps > 1)
        throw DomainError("tolerance must lie in (0,1], got " + rational_str(eps));
    if (samples == 0) throw DomainError("sample count must be positive");

    const std::size_t d = a.size();
    const double eps_d = eps.convert_to<double>();
    double last_estimate = 1.0;

    for (unsigned q = kDenomStart; q <= kDenomCap; q += kDenomStep) {
        RationalHalfspace rounded;
        for (double coeff : a) rounded.a.push_back(round_to_denominator(coeff, q));
        rounded.b = round_to_denominator(b, q);
        rounded.closed = true;

        struct Shard {
            std::uint64_t differing{0};
        };
        std::vector<Shard> shards(kShards);
        const std::uint64_t base = samples / kShards;
        const std::uint64_t rem = samples % kShards;
        const std::uint64_t q_seed = derive_seed(seed, q);
        parallel_indexed(kShards, workers, [&](std::size_t i) {
            std::mt19937_64 gen(derive_seed(q_seed, i));
            const std::uint64_t n = base + (i < rem ? 1 : 0);
            for (std::uint64_t s = 0; s < n; ++s) {
                const PointGen x = mu.sample(gen);
                const DecodedPoint pt = decode_point(x, d);
                double lhs = 0;
                for (std::size_t c = 0; c < d; ++c) lhs += a[c] * pt.approx[c];
                const bool in_f = lhs <= b;
                Rational lhs_r(0);
                for (std::size_t c = 0; c < d; ++c) lhs_r += rounded.a[c] * pt.exact[c];
                const bool in_rounded = lhs_r <= rounded.b;
                if (in_f != in_rounded) ++shards[i].differing;
            }
        });
        std::uint64_t differing = 0;
        for (const Shard& s : shards) differing += s.differing;
        const double est = static_cast<double>(differing) / static_cast<double>(samples);
        const double sigma = std::sqrt(est * (1.0 - est) / static_cast<double>(samples));
        last_estimate = est;
        if (eps >= 1 || est + 3.0 * sigma < eps_d) {
            RationalizeReport report;
            report.result = std::move(rounded);
            report.estimate = est;
            report.stderr_bound = 3.0 * sigma;
            report.samples = samples;
            report.denominator_log2 = q;
            return report;
        }
    }
    throw ApproximationError(last_estimate);
}

}  // namespace ecl
