#include "ecl/rng.hpp"

#include "ecl/errors.hpp"

namespace ecl {

std::uint64_t scaled_threshold(const Rational& q) {
    if (q < 0 || q > 1) throw DomainError("probability must lie in [0,1], got " + rational_str(q));
    const Int scaled = (boost::multiprecision::numerator(q) << 64) /
                       boost::multiprecision::denominator(q);
    if (scaled >= (Int(1) << 64)) return ~std::uint64_t{0};  // q == 1
    return static_cast<std::uint64_t>(scaled);
}

}  // namespace ecl
