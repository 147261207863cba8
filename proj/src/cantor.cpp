#include "ecl/cantor.hpp"

#include "ecl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace ecl {

namespace {

constexpr std::size_t kCanonicalStateCap = 1u << 20;  // long-division states
constexpr std::size_t kCanonicalLengthCap = 1u << 22; // combined pre+per bits

void validate_bits(std::string_view s, const char* what) {
    for (char c : s)
        if (c != '0' && c != '1')
            throw DomainError(std::string(what) + " must contain only 0/1, got \"" + std::string(s) + "\"");
}

// Cuts a repetition word down to its primitive root.
void primitivize(std::string& per) {
    const std::size_t n = per.size();
    for (std::size_t len = 1; len <= n / 2; ++len) {
        if (n % len != 0) continue;
        bool repeats = true;
        for (std::size_t i = len; i < n && repeats; ++i)
            if (per[i] != per[i % len]) repeats = false;
        if (repeats) {
            per.resize(len);
            return;
        }
    }
}

// Minimal normal form of pre (per)^omega: primitive period, then shift the
// period boundary left while the last preperiod bit matches the rotating
// period.  The result is unique for a given stream.
EpForm normalize_ep(std::string pre, std::string per) {
    primitivize(per);
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        per.insert(per.begin(), per.back());
        per.pop_back();
    }
    return EpForm{std::move(pre), std::move(per)};
}

// Binary long division of y in [0,1): bits plus exact (preperiod, period)
// split detected from repeated remainders.
EpForm rational_to_ep(const Rational& y) {
    Int num = boost::multiprecision::numerator(y);
    const Int den = boost::multiprecision::denominator(y);
    if (den > kCanonicalStateCap)
        throw DomainError("coordinate denominator too large to canonicalize: " + rational_str(y));
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::string bits;
    std::uint64_t rem = static_cast<std::uint64_t>(num);
    const std::uint64_t d = static_cast<std::uint64_t>(den);
    while (true) {
        if (rem == 0) return normalize_ep(std::move(bits), "0");
        auto it = seen.find(rem);
        if (it != seen.end()) {
            std::string pre = bits.substr(0, it->second);
            std::string per = bits.substr(it->second);
            return normalize_ep(std::move(pre), std::move(per));
        }
        seen.emplace(rem, bits.size());
        rem *= 2;
        if (rem >= d) {
            bits.push_back('1');
            rem -= d;
        } else {
            bits.push_back('0');
        }
    }
}

std::string ep_key(const EpForm& e) { return "ep:" + e.pre + "|" + e.per; }

int ep_bit(const std::string& pre, const std::string& per, std::size_t i) {
    if (i < pre.size()) return pre[i] == '1' ? 1 : 0;
    return per[(i - pre.size()) % per.size()] == '1' ? 1 : 0;
}

}  // namespace

BitWord::BitWord(std::string_view bits) : bits_(bits) {
    validate_bits(bits, "bit word");
}

BitWord BitWord::zeros(std::size_t n) {
    BitWord w;
    w.bits_.assign(n, '0');
    return w;
}

BitWord BitWord::prefix(std::size_t n) const {
    BitWord w;
    w.bits_ = bits_.substr(0, std::min(n, bits_.size()));
    return w;
}

BitWord BitWord::extended(int b) const {
    BitWord w = *this;
    w.push_back(b);
    return w;
}

bool BitWord::is_prefix_of(const BitWord& other) const {
    return other.bits_.size() >= bits_.size() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
}

Rational Box::to_unit_point(const Rational& x) const {
    if (x < lo || x >= hi)
        throw DomainError("coordinate " + rational_str(x) + " outside box " + str());
    return (x - lo) / (hi - lo);
}

Rational Box::to_unit_extent(const Rational& x) const {
    if (x < lo || x > hi)
        throw DomainError("endpoint " + rational_str(x) + " outside box " + str());
    return (x - lo) / (hi - lo);
}

std::string Box::str() const {
    return "[" + rational_str(lo) + "," + rational_str(hi) + ")";
}

Box make_box(const Rational& lo, const Rational& hi) {
    if (lo >= hi) throw DomainError("box requires lo < hi");
    return Box{lo, hi};
}

EpForm canonical_ep(std::string pre, std::string per) {
    validate_bits(pre, "preperiod");
    validate_bits(per, "period");
    if (per.empty()) throw DomainError("period must be nonempty");
    return normalize_ep(std::move(pre), std::move(per));
}

PointGen PointGen::eventually_periodic(std::string pre, std::string per) {
    validate_bits(pre, "preperiod");
    validate_bits(per, "period");
    if (per.empty()) throw DomainError("period must be nonempty");
    PointGen p;
    p.kind_ = Kind::EventuallyPeriodic;
    p.dim_ = 1;
    p.pre_ = pre;
    p.per_ = per;
    p.description_ = "ep:" + pre + "|" + per;
    p.canonical_key_ = ep_key(normalize_ep(std::move(pre), std::move(per)));
    return p;
}

PointGen PointGen::rational_point(std::vector<Rational> coords, Box box) {
    if (coords.empty()) throw DomainError("rational point needs at least one coordinate");
    if (box.lo >= box.hi) throw DomainError("box requires lo < hi");
    PointGen p;
    p.kind_ = Kind::RationalPoint;
    p.dim_ = coords.size();
    std::ostringstream desc;
    desc << "rat" << coords.size() << ":";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) desc << ",";
        desc << rational_str(coords[i]);
        p.unit_coords_.push_back(box.to_unit_point(coords[i]));
    }
    if (!box.is_default()) desc << "@" << rational_str(box.lo) << ":" << rational_str(box.hi);
    p.description_ = desc.str();

    // Combined stream is eventually periodic with preperiod d*A and period
    // d*L where A, L bound the coordinate preperiods / periods.
    std::vector<EpForm> eps;
    std::size_t max_pre = 0, lcm_per = 1;
    for (const Rational& u : p.unit_coords_) {
        eps.push_back(rational_to_ep(u));
        max_pre = std::max(max_pre, eps.back().pre.size());
        lcm_per = std::lcm(lcm_per, eps.back().per.size());
        if (lcm_per > kCanonicalLengthCap)
            throw DomainError("combined period too large to canonicalize");
    }
    const std::size_t d = coords.size();
    if (d * (max_pre + lcm_per) > kCanonicalLengthCap)
        throw DomainError("combined expansion too large to canonicalize");
    std::string pre, per;
    for (std::size_t k = 0; k < d * max_pre; ++k) {
        const EpForm& e = eps[k % d];
        pre.push_back(ep_bit(e.pre, e.per, k / d) ? '1' : '0');
    }
    for (std::size_t k = d * max_pre; k < d * (max_pre + lcm_per); ++k) {
        const EpForm& e = eps[k % d];
        per.push_back(ep_bit(e.pre, e.per, k / d) ? '1' : '0');
    }
    if (per.empty()) per = "0";
    p.canonical_key_ = ep_key(normalize_ep(std::move(pre), std::move(per)));
    return p;
}

PointGen PointGen::assignment(std::map<std::uint32_t, int> values, int default_bit) {
    for (auto& [k, v] : values)
        if (v != 0 && v != 1) throw DomainError("assignment values must be bits");
    if (default_bit != 0 && default_bit != 1) throw DomainError("default must be a bit");
    PointGen p;
    p.kind_ = Kind::Assignment;
    p.dim_ = 1;
    p.values_ = std::move(values);
    p.default_bit_ = default_bit;
    std::ostringstream desc;
    desc << "asgn:";
    bool first = true;
    for (const auto& [k, v] : p.values_) {
        if (!first) desc << ",";
        first = false;
        desc << k << "=" << v;
    }
    desc << "|" << default_bit;
    p.description_ = desc.str();

    std::string pre;
    if (!p.values_.empty()) {
        const std::uint32_t last = p.values_.rbegin()->first;
        for (std::uint32_t i = 0; i <= last; ++i) {
            auto it = p.values_.find(i);
            const int b = it == p.values_.end() ? default_bit : it->second;
            pre.push_back(b ? '1' : '0');
        }
    }
    p.canonical_key_ = ep_key(normalize_ep(std::move(pre), default_bit ? "1" : "0"));
    return p;
}

int PointGen::bit(std::size_t i) const {
    switch (kind_) {
        case Kind::EventuallyPeriodic:
            return ep_bit(pre_, per_, i);
        case Kind::RationalPoint: {
            const std::size_t coord = i % dim_;
            return expansion_bit(unit_coords_[coord], i / dim_);
        }
        case Kind::Assignment: {
            auto it = values_.find(static_cast<std::uint32_t>(i));
            return it == values_.end() ? default_bit_ : it->second;
        }
    }
    throw DomainError("corrupt point generator");
}

BitWord PointGen::prefix(std::size_t n) const {
    BitWord w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(bit(i));
    return w;
}

PointGen PointGen::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("point generator needs a kind prefix: " + std::string(text));
    const std::string_view kind = text.substr(0, colon);
    const std::string_view body = text.substr(colon + 1);
    if (kind == "ep") {
        auto bar = body.find('|');
        if (bar == std::string_view::npos) throw DomainError("ep generator needs pre|per");
        return eventually_periodic(std::string(body.substr(0, bar)), std::string(body.substr(bar + 1)));
    }
    if (kind.size() > 3 && kind.substr(0, 3) == "rat") {
        std::size_t d = 0;
        for (char c : kind.substr(3)) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw DomainError("bad rational point dimension in " + std::string(text));
            d = d * 10 + static_cast<std::size_t>(c - '0');
        }
        if (d == 0) throw DomainError("rational point dimension must be positive");
        std::string_view coords_part = body;
        Box box{};
        auto at = body.find('@');
        if (at != std::string_view::npos) {
            coords_part = body.substr(0, at);
            std::string_view box_part = body.substr(at + 1);
            auto sep = box_part.find(':');
            if (sep == std::string_view::npos) throw DomainError("box needs lo:hi");
            box = make_box(parse_rational(box_part.substr(0, sep)), parse_rational(box_part.substr(sep + 1)));
        }
        std::vector<Rational> coords;
        std::size_t start = 0;
        while (start <= coords_part.size()) {
            auto comma = coords_part.find(',', start);
            const std::string_view piece =
                comma == std::string_view::npos ? coords_part.substr(start)
                                                : coords_part.substr(start, comma - start);
            coords.push_back(parse_rational(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (coords.size() != d)
            throw DomainError("expected " + std::to_string(d) + " coordinates in " + std::string(text));
        return rational_point(std::move(coords), box);
    }
    if (kind == "asgn") {
        auto bar = body.find('|');
        if (bar == std::string_view::npos) throw DomainError("asgn generator needs entries|default");
        std::map<std::uint32_t, int> values;
        std::string_view entries = body.substr(0, bar);
        std::size_t start = 0;
        while (!entries.empty() && start <= entries.size()) {
            auto comma = entries.find(',', start);
            const std::string_view piece =
                comma == std::string_view::npos ? entries.substr(start)
                                                : entries.substr(start, comma - start);
            if (!piece.empty()) {
                auto eq = piece.find('=');
                if (eq == std::string_view::npos) throw DomainError("asgn entry needs index=bit");
                const std::uint32_t idx =
                    static_cast<std::uint32_t>(std::stoul(std::string(piece.substr(0, eq))));
                const std::string bit_text(piece.substr(eq + 1));
                if (bit_text != "0" && bit_text != "1") throw DomainError("asgn bit must be 0/1");
                values[idx] = bit_text == "1" ? 1 : 0;
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        const std::string def(body.substr(bar + 1));
        if (def != "0" && def != "1") throw DomainError("asgn default must be 0/1");
        return assignment(std::move(values), def == "1" ? 1 : 0);
    }
    throw DomainError("unknown point generator kind: " + std::string(text));
}

PointGen interleave_encode(const std::vector<Rational>& coords, const Box& box) {
    return PointGen::rational_point(coords, box);
}

bool ball_contains(const DyadicBall& ball, const PointGen& p) {
    const unsigned m = ball.cutoff();
    const std::size_t agree = std::min<std::size_t>(m, ball.center.size());
    for (std::size_t i = 0; i < agree; ++i)
        if (p.bit(i) != ball.center.bit(i)) return false;
    return true;
}

BitWord BitSource::prefix(std::size_t n) const {
    BitWord w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(bit(i));
    return w;
}

ExternalBits::ExternalBits(std::string bits) : bits_(std::move(bits)) {
    validate_bits(bits_, "external bits");
}

int ExternalBits::bit(std::size_t i) const {
    if (i >= bits_.size())
        throw SourceExhausted("external bit source exhausted at index " + std::to_string(i));
    return bits_[i] == '1' ? 1 : 0;
}

CellBox decode_cell(const BitWord& node, std::size_t d) {
    if (d == 0) throw DomainError("cell dimension must be positive");
    CellBox cell;
    cell.lo.assign(d, Rational(0));
    cell.hi.assign(d, Rational(1));
    std::vector<Int> nums(d, Int(0));
    std::vector<unsigned> counts(d, 0);
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::size_t coord = i % d;
        nums[coord] = (nums[coord] << 1) | node.bit(i);
        ++counts[coord];
    }
    for (std::size_t c = 0; c < d; ++c) {
        const Int den = Int(1) << counts[c];
        cell.lo[c] = Rational(nums[c], den);
        cell.hi[c] = cell.lo[c] + Rational(Int(1), den);
    }
    return cell;
}

}  // namespace ecl
