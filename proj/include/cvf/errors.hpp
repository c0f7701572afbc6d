#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvf {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not match.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Matrix is singular (or numerically so) where an inverse/solve is required.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Supplied metric is not symmetric positive definite.
class NotSpdError : public Error {
public:
    using Error::Error;
};

/// The matrix measure of the system is nonnegative, so contraction-based
/// quantities (condition number, certificates, step sizes) are undefined.
class NotContractiveError : public Error {
public:
    using Error::Error;
};

/// Certification evidence is internally inconsistent.
class CertificationError : public Error {
public:
    using Error::Error;
};

/// Numerical integration produced a non-finite state.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Sphere operation requested at or too close to the cut locus.
class AntipodalError : public Error {
public:
    using Error::Error;
};

/// Source text could not be parsed; carries position information.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) +
                ")"),
          offset_(offset),
          line_(line),
          column_(column) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace cvf
