#pragma once

#include <stdexcept>
#include <string>

namespace morp {

// Thrown when an iterative eigenvalue routine fails to converge.
struct EigenFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gain synthesis requested for a pair that is not stabilizable.
struct NotStabilizable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Riccati solve failed (stable subspace extraction or post-check).
struct CareFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed simulation configuration (grid, horizon, initial states).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A synthesis condition failed where a result was required to proceed.
struct ConditionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Benchmark preconditions not met for the given follower.
struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace morp
