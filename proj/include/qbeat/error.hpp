#pragma once

#include <stdexcept>
#include <string>

namespace qbeat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical parameter violates its admissible range.
class InvalidParameter : public Error {
public:
    InvalidParameter(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The interference factor P lies outside [0, 1].
class OutOfRangeP : public InvalidParameter {
public:
    explicit OutOfRangeP(const std::string& message) : InvalidParameter("P", message) {}
};

/// A closed-form denominator (D1 or D2) vanishes for the given parameters.
class DegenerateParameters : public Error {
public:
    using Error::Error;
};

/// An oracle linear system is singular. Refines DegenerateParameters so callers
/// that only care about "coefficients undefined" can catch the base.
class SingularSystem : public DegenerateParameters {
public:
    using DegenerateParameters::DegenerateParameters;
};

/// Integration produced a NaN or infinity.
class NonFiniteState : public Error {
public:
    NonFiniteState(double time, const std::string& message)
        : Error(message), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Moment set violates conjugate-pair consistency.
class NonPhysicalState : public Error {
public:
    using Error::Error;
};

/// Malformed configuration input. `location` is "file:line" or a flag name.
class ParseError : public Error {
public:
    ParseError(std::string location, const std::string& message)
        : Error(location + ": " + message), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

}  // namespace qbeat
