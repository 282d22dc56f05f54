#pragma once

#include <stdexcept>
#include <string>

namespace csearch {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid model or algorithm parameter (out of range, inconsistent).
struct ParameterError : Error {
    using Error::Error;
};

/// Index outside its valid range (node id, community id, ...).
struct IndexError : Error {
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    long line_number;
};

/// File could not be opened or read.
struct IoError : Error {
    using Error::Error;
};

/// Matrix/vector shape mismatch.
struct DimensionError : Error {
    using Error::Error;
};

/// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

/// The k-th singular value of a moment matrix is too small to invert.
struct SingularWhitening : Error {
    using Error::Error;
};

/// The sign-fixing projection a = u1' W1' m1 vanished.
struct DegenerateProjection : Error {
    using Error::Error;
};

/// Automatic threshold selection failed (all coordinates equal).
struct DegenerateThreshold : Error {
    using Error::Error;
};

/// The union of thresholded quarter estimates is empty.
struct EmptyEstimate : Error {
    using Error::Error;
};

}  // namespace csearch
