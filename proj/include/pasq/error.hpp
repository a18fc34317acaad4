// Exception hierarchy shared by all pasq modules.
#pragma once

#include <stdexcept>
#include <string>

namespace pasq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (K(m) for m >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result not representable as a finite double.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: caps exceeded, malformed parameters, bad geometry sizes.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A truncated Fock-space operation would discard more weight than the budget allows.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double lost_weight)
        : Error(what), lost_weight_(lost_weight) {}

    double lost_weight() const noexcept { return lost_weight_; }

private:
    double lost_weight_;
};

/// Input for which the requested quantity is undefined: subtraction from the vacuum,
/// divergent σx = 1 ratios, renormalizing a null outcome.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Phase-space grid too small or too coarse for the state placed on it.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported input file.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace pasq
