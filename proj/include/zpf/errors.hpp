#pragma once

#include <stdexcept>
#include <string>

namespace zpf {

/// Base class for every error raised by the library. The CLI maps
/// ArgumentError to a usage failure and everything else to a model failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an input value was violated.
class ArgumentError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "argument"; }
};

/// Input outside the mathematical domain of an operation (e.g. nu <= 0).
class DomainError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "domain"; }
};

/// The physical model does not apply to the requested configuration.
class ModelError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "model"; }
};

/// An iterative solver failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "solver"; }
};

/// The equations admit no solution of the requested type.
class NoSolutionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "no-solution"; }
};

/// Numerical resolution is insufficient (aliasing, truncated tails, ...).
class ResolutionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "resolution"; }
};

namespace detail {
inline void require(bool ok, const std::string& what) {
    if (!ok) throw ArgumentError(what);
}
}  // namespace detail

}  // namespace zpf
