#pragma once

#include <stdexcept>
#include <string>

namespace duopoly {

// Numeric failures surfaced by the library. The CLI maps these to exit code 2;
// argument and config problems map to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coexistence denominator a*(c - p*delta_y) vanished; no isolated nontrivial
// fixed point at these parameters.
struct DegenerateEquilibrium : Error {
    using Error::Error;
};

// Price ratio is undefined at c = 1 (the coexistence point collapses).
struct DivisionByZero : Error {
    using Error::Error;
};

// Logistic seed outside the open unit interval.
struct InvalidSeed : Error {
    using Error::Error;
};

// A period doubling could not be bracketed inside the requested gamma range.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// Feigenbaum ratio needs at least three doubling points.
struct InsufficientPoints : Error {
    using Error::Error;
};

// Bad key, bad value, or unreadable file in a run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or unwritable destination; message carries the path.
struct IoError : Error {
    using Error::Error;
};

} // namespace duopoly
