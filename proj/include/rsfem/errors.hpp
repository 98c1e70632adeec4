#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class AssemblyFailure : public Error {
public:
    using Error::Error;
};

class UnsupportedDatum : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Iterative solve did not reach the requested residual.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double residual, std::size_t iterations)
        : Error(what), residual_(residual), iterations_(iterations)
    {
    }

    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }

private:
    double residual_;
    std::size_t iterations_;
};

/// Modal series cannot meet the requested tolerance within the mode cap.
class TruncationFailure : public Error {
public:
    TruncationFailure(const std::string& what, double bound)
        : Error(what), bound_(bound)
    {
    }

    [[nodiscard]] double bound() const noexcept { return bound_; }

private:
    double bound_;
};

} // namespace rsfem
