#ifndef DORMANT_ERRORS_HPP
#define DORMANT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dormant {

// Two-tier error taxonomy, mirrored by the CLI exit codes:
//   * ValidationError (exit 2): the request or one of its mathematical
//     preconditions is invalid (bad prime, label outside its range,
//     empty moduli, failed hypothesis, ...).
//   * ConsistencyError (exit 3): an invariant that must hold for every
//     valid input was violated at runtime. This signals a bug in the
//     library, never a bad request.

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

// --- validation-tier conditions -------------------------------------------

// An invariant of an empty moduli space was requested; genus/degree values
// are defined only when the classifying set is nonempty.
class EmptyModuli : public ValidationError {
public:
    explicit EmptyModuli(const std::string& what) : ValidationError(what) {}
};

// The applicability hypothesis of the simplified genus formula (or of the
// quadratic-sum identity derived under it) fails for the given radii.
class HypothesisViolation : public ValidationError {
public:
    explicit HypothesisViolation(const std::string& what) : ValidationError(what) {}
};

// A tower certificate requires slack-class membership at every level; raised
// at the first level where membership fails.
class MembershipFailure : public ValidationError {
public:
    explicit MembershipFailure(const std::string& what) : ValidationError(what) {}
};

// A local exponent difference of 0 mod p admits no radius class.
class NonUnitRadius : public ValidationError {
public:
    explicit NonUnitRadius(const std::string& what) : ValidationError(what) {}
};

// The fourth marked point of a Heun operator must avoid {0, 1}.
class DegenerateT : public ValidationError {
public:
    explicit DegenerateT(const std::string& what) : ValidationError(what) {}
};

// --- consistency-tier conditions -------------------------------------------

// A genus evaluation came out non-integral (or negative): the enumerated
// counts and the closed formula disagree about a quantity that is a genuine
// nonnegative integer for every nonempty moduli space.
class IntegralityViolation : public ConsistencyError {
public:
    explicit IntegralityViolation(const std::string& what) : ConsistencyError(what) {}
};

} // namespace dormant

#endif // DORMANT_ERRORS_HPP
