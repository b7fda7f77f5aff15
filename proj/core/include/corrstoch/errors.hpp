#pragma once

#include <stdexcept>
#include <string>

namespace corrstoch {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible dimensions.
struct DimensionError : Error {
    using Error::Error;
};

/// A vector or matrix violates a probability invariant (negative entry,
/// bad normalization).
struct InvalidDistribution : Error {
    using Error::Error;
};

/// The supplied input/output pairs do not determine a map (inputs linearly
/// dependent within tolerance).
struct RankDeficientError : Error {
    using Error::Error;
};

/// The unique linear map fitting the data is not a stochastic matrix: the
/// observed dynamics cannot be described by a state-to-state stochastic map.
struct NotStochasticError : Error {
    using Error::Error;
};

/// Conditioning on an outcome of probability zero.
struct ZeroMarginalError : Error {
    using Error::Error;
};

/// A tomography cell accepted no samples, so its conditional output is
/// undefined.
struct ZeroAcceptanceError : Error {
    using Error::Error;
};

/// An iterative solver failed to reach its target residual.
struct ConvergenceError : Error {
    using Error::Error;
};

/// Bad experiment configuration; the message names the offending field.
struct ConfigError : Error {
    ConfigError(std::string field_name, const std::string& what)
        : Error(what), field(std::move(field_name)) {}
    std::string field;
};

}  // namespace corrstoch
