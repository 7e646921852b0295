#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crisk {

/// Base class for every error the engine raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation
/// (non-positive price, zero total market cap, bad horizon, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Not enough observations to evaluate a window or horizon.
class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

/// Sell larger than the open position. Carries the missing quantity.
class OversellError : public Error {
public:
    OversellError(const std::string& msg, double shortfall)
        : Error(msg), shortfall_(shortfall) {}
    double shortfall() const noexcept { return shortfall_; }

private:
    double shortfall_;
};

/// Sell (or weighted-average query) before any buy established a cost basis.
class NoCostBasisError : public Error {
public:
    using Error::Error;
};

/// Portfolio-level operation on a fund with no assets.
class EmptyPortfolioError : public Error {
public:
    using Error::Error;
};

/// Correlation inputs imply a negative variance.
class InvalidCorrelationError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inconsistent or invalid configuration (mixed vol horizons, bad thresholds, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace crisk
