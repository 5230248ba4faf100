#ifndef CONDPATH_ERRORS_HPP
#define CONDPATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace condpath {

// Base class for all library errors so callers can catch in one place.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed model / rate-function grammar.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

// Evaluation outside the declared domain / state space.
struct DomainError : Error {
    using Error::Error;
};

// Lagrangian requested where a birth or death rate vanishes.
struct DegenerateRateError : Error {
    using Error::Error;
};

// second_deriv_i at a point where i'' does not exist.
struct UndefinedCurvatureError : Error {
    using Error::Error;
};

// Operation not available for this model family.
struct UnsupportedModelError : Error {
    using Error::Error;
};

// Shooting found no bracket in the scan range.
struct NoSolutionError : Error {
    using Error::Error;
};

// equal_height_gap on a profile with fewer than two local minima.
struct FewMinimaError : Error {
    using Error::Error;
};

// Monte Carlo conditioning accepted too few paths to say anything.
struct UnderpoweredError : Error {
    UnderpoweredError(const std::string& msg, long accepted)
        : Error(msg), accepted(accepted) {}
    long accepted;
};

// Rejection-sampling envelope acceptance collapsed.
struct EnvelopeFailureError : Error {
    using Error::Error;
};

}  // namespace condpath

#endif
