#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

// Invalid configuration or physically inadmissible parameters. The message
// names the offending key or constraint.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: root bracketing, tolerance not met, blow-up, NaN.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shocklab
