#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pdop {

/// Base class for all library errors. The `name()` of the concrete class is
/// embedded in `what()` so diagnostics always identify the failed invariant.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Line-of-sight geometry cannot support a 3D solve (rank/conditioning).
class DegenerateGeometry : public Error {
public:
    explicit DegenerateGeometry(const std::string& message) : Error("DegenerateGeometry", message) {}
};

/// Fewer than three satellites survive the elevation mask.
class InsufficientSatellites : public Error {
public:
    explicit InsufficientSatellites(const std::string& message) : Error("InsufficientSatellites", message) {}
};

/// Vector/matrix sizes do not agree with the satellite count.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& message) : Error("DimensionMismatch", message) {}
};

/// A matrix that must be (semi-)definite fails the eigenvalue check.
class NotPsd : public Error {
public:
    explicit NotPsd(const std::string& message) : Error("NotPsd", message) {}
};

/// A matrix that must be invertible is singular at the stated tolerance.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& message) : Error("SingularMatrix", message) {}
};

/// Monte Carlo runs need at least two samples for a standard error.
class InsufficientSamples : public Error {
public:
    explicit InsufficientSamples(const std::string& message) : Error("InsufficientSamples", message) {}
};

/// Scenario or matrix file is not syntactically well formed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error("ParseError", message) {}
};

/// Input parsed but violates a documented invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error("ValidationError", message) {}
};

}  // namespace pdop
