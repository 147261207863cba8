#include "ecl/rational.hpp"

#include "ecl/errors.hpp"

#include <cctype>

namespace ecl {

namespace {

Int parse_int(std::string_view text) {
    if (text.empty()) throw DomainError("empty integer literal");
    std::size_t i = 0;
    if (text[0] == '+' || text[0] == '-') i = 1;
    if (i == text.size()) throw DomainError("sign without digits in integer literal");
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            throw DomainError("bad integer literal: " + std::string(text));
    return Int(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den <= 0) throw DomainError("denominator must be positive: " + std::string(text));
    return Rational(num, den);
}

std::string rational_str(const Rational& q) {
    const Int num = boost::multiprecision::numerator(q);
    const Int den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

unsigned ceil_neg_log2(const Rational& r) {
    if (r <= 0 || r > 1) throw DomainError("radius must satisfy 0 < r <= 1, got " + rational_str(r));
    Int num = boost::multiprecision::numerator(r);
    const Int den = boost::multiprecision::denominator(r);
    unsigned m = 0;
    while (num < den) {
        num <<= 1;
        ++m;
    }
    return m;
}

Rational pow2(int e) {
    if (e >= 0) return Rational(Int(1) << e);
    return Rational(Int(1), Int(1) << (-e));
}

int expansion_bit(const Rational& y, std::size_t i) {
    if (y < 0 || y >= 1) throw DomainError("expansion_bit requires y in [0,1), got " + rational_str(y));
    const Int num = boost::multiprecision::numerator(y);
    const Int den = boost::multiprecision::denominator(y);
    const Int shifted = (num << (i + 1)) / den;
    return static_cast<int>(shifted & 1);
}

}  // namespace ecl
