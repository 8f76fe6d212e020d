// errors.hpp: error type for violated internal invariants.
#pragma once

#include <stdexcept>

namespace combhom {

// Thrown when a computed quantity breaks a physical invariant (for example
// a coincidence probability outside [0, 1] beyond rounding). Distinct from
// std::invalid_argument so callers can map it to a different exit status.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace combhom
