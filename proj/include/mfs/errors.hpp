#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mfs {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: wrong shape, non-positive count, non-finite input.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Unknown catalog name, malformed config file, unsupported configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: singular kernel, divergent series, rank loss, breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// max_j eps_j R_Omega >= 1; carries the (non-positive) margin 1 - q.
class ConstraintError : public NumericalError {
public:
    ConstraintError(const std::string& what, double margin)
        : NumericalError(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

/// Rank deficiency; `tail` holds the trailing singular values when known.
class RankError : public NumericalError {
public:
    explicit RankError(const std::string& what, std::vector<double> tail = {})
        : NumericalError(what), tail_(std::move(tail)) {}
    const std::vector<double>& tail() const noexcept { return tail_; }

private:
    std::vector<double> tail_;
};

/// Arnoldi breakdown or zero tangent; `step` is the failing index.
class DegenerateError : public NumericalError {
public:
    DegenerateError(const std::string& what, int step)
        : NumericalError(what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mfs
