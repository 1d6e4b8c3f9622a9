#pragma once

#include <stdexcept>
#include <string>

namespace convexity_gate {

/// Base of every error raised by the library. `field()` names the input
/// that caused it so front ends can report it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Exact and floating values were combined in one computation.
class ModeMismatch : public Error {
public:
    explicit ModeMismatch(const std::string& what) : Error("mode", what) {}
    ModeMismatch(std::string field, const std::string& what) : Error(std::move(field), what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A point outside the open interval (or outside a function's natural domain).
class OutOfDomain : public Error {
public:
    explicit OutOfDomain(const std::string& what) : Error("x", what) {}
};

} // namespace convexity_gate
