#pragma once

#include <stdexcept>
#include <string>

namespace spaser {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter set violates a documented invariant (negative rate, zero linewidth, ...).
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// A density matrix / state violates its invariants beyond tolerance.
class InvalidState : public Error {
public:
    using Error::Error;
};

/// The parameters make a closed-form expression singular.
class DegenerateParameters : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace spaser
