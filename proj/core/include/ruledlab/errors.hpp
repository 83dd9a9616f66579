#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruledlab {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. Carries the byte offset of the
/// offending token in the input string.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluation failed: division by zero, log of a non-positive
/// value, unbound identifier, and similar. Never silently produces NaN.
class EvalError : public Error {
public:
    using Error::Error;
};

/// A geometric precondition was violated (degenerate grid, bad frame,
/// vanishing support function, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// The parameter of distribution dropped below the torsal guard; every
/// downstream formula divides by it.
class TorsalRulingError : public GeometryError {
public:
    explicit TorsalRulingError(double u)
        : GeometryError("parameter of distribution vanishes near u = " + std::to_string(u) +
                        " (torsal ruling)") {}
};

} // namespace ruledlab
