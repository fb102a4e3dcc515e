#pragma once

#include <stdexcept>
#include <string>

namespace qd {

// Error taxonomy used across the library. CLI maps these to exit code 1,
// anything else (bad flags, malformed files) to exit code 2.

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input is not a valid quantum state (non-Hermitian, wrong dimension,
// negative spectrum beyond tolerance).
struct invalid_state_error : error {
    using error::error;
};

// Bad argument value (out-of-range index, mismatched lengths).
struct argument_error : error {
    using error::error;
};

// A documented precondition of the operation does not hold.
struct precondition_error : error {
    using error::error;
};

// The request would exceed a hard size/cost limit.
struct resource_limit_error : error {
    using error::error;
};

// Internally inconsistent inputs (e.g. a norm result that cannot belong
// to the tensor it is paired with).
struct inconsistency_error : error {
    using error::error;
};

} // namespace qd
