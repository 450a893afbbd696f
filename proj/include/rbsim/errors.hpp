#ifndef RBSIM_ERRORS_HPP
#define RBSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbsim {

/// Base class for all simulator errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text (speed profiles, scenario files).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Inputs violate a documented precondition or invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A train placed (or moved) outside the layout extent.
class PlacementError : public Error {
public:
    explicit PlacementError(const std::string& msg) : Error(msg) {}
};

/// Network solve failed to converge.
class SolveError : public Error {
public:
    SolveError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

/// Load exceeds what the network can physically deliver.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& msg, int train_index)
        : Error(msg), train_index(train_index) {}
    int train_index;
};

/// A state variable became non-finite during integration.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace rbsim

#endif
