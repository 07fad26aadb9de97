#pragma once

#include <stdexcept>

namespace nbaa {

// Operands built over different bit widths.
struct width_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The objective offers no contrast the amplification loop can use:
// constant function, coinciding bounds, or theta at a degenerate value.
struct degenerate_objective_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The statevector left the physically valid regime (norm drift beyond
// tolerance, measurement of a zero-norm state).
struct simulation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed problem or report documents.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nbaa
