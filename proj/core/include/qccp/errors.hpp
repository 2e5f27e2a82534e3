#pragma once

#include <stdexcept>
#include <string>

namespace qccp {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments outside their declared ranges (bad dimension, index, size cap).
struct DomainError : Error {
    using Error::Error;
};

// Structured objects violating their invariants (non-PSD state, broken POVM,
// unnormalized distribution). The message names the offending object.
struct ValidationError : Error {
    using Error::Error;
};

// Iterative procedures failing to meet their convergence contract; the
// message carries the best residual or certificate gap achieved.
struct NumericError : Error {
    using Error::Error;
};

// Requests outside the supported problem size (e.g. exact enumeration above
// its budget); the message points to the supported alternative.
struct CapabilityError : Error {
    using Error::Error;
};

// Malformed strategy documents; the message carries the location.
struct ParseError : Error {
    using Error::Error;
};

// Numerically dependent inputs where independence is required
// (orthonormalization of a near-singular family).
struct DegeneracyError : Error {
    using Error::Error;
};

}  // namespace qccp
