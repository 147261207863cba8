#pragma once

#include <stdexcept>
#include <string>

namespace ecl {

// Malformed input values or violated operation preconditions.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed catalog / pool / distribution / report files.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A membership query stayed boundary-unresolved where a decision was required.
struct UndecidedMembership : std::runtime_error {
    std::string point;
    std::string concept_label;
    UndecidedMembership(std::string point_desc, std::string concept_desc)
        : std::runtime_error("undecided membership of point " + point_desc +
                             " in concept " + concept_desc),
          point(std::move(point_desc)),
          concept_label(std::move(concept_desc)) {}
};

// No hypothesis in the enumerated prefix agrees with every labeled example.
struct NoConsistentHypothesis : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rational rounding failed to reach the requested symmetric-difference mass.
struct ApproximationError : std::runtime_error {
    double achieved_mass;
    explicit ApproximationError(double achieved)
        : std::runtime_error("approximation tolerance not reached, achieved mass " +
                             std::to_string(achieved)),
          achieved_mass(achieved) {}
};

// A decision needed more input bits or precision than were available.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal signal: a finite external bit source ran out of bits.
struct SourceExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ecl
