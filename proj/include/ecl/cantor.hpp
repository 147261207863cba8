#pragma once

// Points of Cantor space and the finite data used to talk about them.
//
// An instance is an infinite binary sequence.  The library never holds one
// directly; it holds finite generators (eventually periodic words, rational
// coordinate tuples under an interleaved binary encoding, finite variable
// assignments) plus finite prefixes (BitWord) and dyadic balls.
//
// Metric convention: d(x,y) = 2^-i where i is the first index at which x
// and y disagree.  The ball B_r(sigma) around a finite word sigma is the
// set of sequences that either extend sigma or first differ from it at
// place ceil(-log2 r) or later; equivalently, the cylinder of sigma cut to
// min(ceil(-log2 r), |sigma|) bits.

#include "ecl/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecl {

// A finite binary word; the name of a cylinder / tree node.
class BitWord {
  public:
    BitWord() = default;
    explicit BitWord(std::string_view bits);  // validates characters

    static BitWord zeros(std::size_t n);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    int bit(std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }
    void push_back(int b) { bits_.push_back(b ? '1' : '0'); }
    BitWord prefix(std::size_t n) const;
    BitWord extended(int b) const;
    bool is_prefix_of(const BitWord& other) const;
    const std::string& str() const { return bits_; }

    friend bool operator==(const BitWord&, const BitWord&) = default;
    friend auto operator<=>(const BitWord&, const BitWord&) = default;

  private:
    std::string bits_;  // '0'/'1' only
};

// Half-open box [lo, hi)^d that rational coordinates are rescaled from.
struct Box {
    Rational lo{0};
    Rational hi{1};

    bool is_default() const { return lo == 0 && hi == 1; }
    // (x - lo) / (hi - lo); must land in [0,1).
    Rational to_unit_point(const Rational& x) const;
    // Same map for region endpoints, where landing on 1 is allowed.
    Rational to_unit_extent(const Rational& x) const;
    std::string str() const;
};

Box make_box(const Rational& lo, const Rational& hi);

// Minimal eventually-periodic normal form of a bit stream.
struct EpForm {
    std::string pre;
    std::string per;  // nonempty, primitive
};

EpForm canonical_ep(std::string pre, std::string per);

// A finitely described point of Cantor space.
class PointGen {
  public:
    enum class Kind { EventuallyPeriodic, RationalPoint, Assignment };

    static PointGen eventually_periodic(std::string pre, std::string per);
    static PointGen rational_point(std::vector<Rational> coords, Box box = {});
    static PointGen assignment(std::map<std::uint32_t, int> values, int default_bit);

    // Grammar: "ep:PRE|PER", "ratD:q1,...,qD[@lo:hi]", "asgn:i=b,...|d".
    static PointGen parse(std::string_view text);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    int bit(std::size_t i) const;
    const std::string& description() const { return description_; }
    // Canonical eventually-periodic serialization; equal keys iff the two
    // generators denote the same bit stream.
    const std::string& canonical_key() const { return canonical_key_; }
    bool same_stream(const PointGen& other) const { return canonical_key_ == other.canonical_key_; }

    BitWord prefix(std::size_t n) const;

  private:
    PointGen() = default;

    Kind kind_{Kind::EventuallyPeriodic};
    std::size_t dim_{1};
    std::string description_;
    std::string canonical_key_;
    // EventuallyPeriodic
    std::string pre_, per_;
    // RationalPoint (coordinates already rescaled into [0,1))
    std::vector<Rational> unit_coords_;
    // Assignment
    std::map<std::uint32_t, int> values_;
    int default_bit_{0};
};

inline int bit_at(const PointGen& p, std::size_t i) { return p.bit(i); }

// Interleaves d rational coordinates into one bit stream: bit k of the
// stream is bit floor(k/d) of coordinate k mod d.
PointGen interleave_encode(const std::vector<Rational>& coords, const Box& box = {});

struct DyadicBall {
    BitWord center;
    Rational radius;  // 0 < radius <= 1

    unsigned cutoff() const { return ceil_neg_log2(radius); }
};

bool ball_contains(const DyadicBall& ball, const PointGen& p);

// Read-only stream of bits; PointGen always qualifies, recorded external
// bits qualify up to their length.
class BitSource {
  public:
    virtual ~BitSource() = default;
    virtual int bit(std::size_t i) const = 0;
    // Serialized PointGen when the source is one; nullopt for opaque bits.
    virtual std::optional<std::string> finite_description() const = 0;
    virtual std::string display() const = 0;
    BitWord prefix(std::size_t n) const;
};

class PointSource final : public BitSource {
  public:
    explicit PointSource(PointGen p) : point_(std::move(p)) {}
    int bit(std::size_t i) const override { return point_.bit(i); }
    std::optional<std::string> finite_description() const override { return point_.description(); }
    std::string display() const override { return point_.description(); }
    const PointGen& point() const { return point_; }

  private:
    PointGen point_;
};

class ExternalBits final : public BitSource {
  public:
    explicit ExternalBits(std::string bits);
    int bit(std::size_t i) const override;  // throws SourceExhausted past the end
    std::optional<std::string> finite_description() const override { return std::nullopt; }
    std::string display() const override { return "bits:" + bits_; }
    std::size_t size() const { return bits_.size(); }

  private:
    std::string bits_;
};

// Closed per-coordinate dyadic cell [lo_i, hi_i] named by an interleaved
// prefix; paths through the cylinder map onto exactly this closed box.
struct CellBox {
    std::vector<Rational> lo;
    std::vector<Rational> hi;
};

CellBox decode_cell(const BitWord& node, std::size_t d);

}  // namespace ecl
