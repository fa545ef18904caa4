#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tlsc {

/// Base class for all tlsc failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (caught before any solve starts).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Diffusion coefficient sampled nonpositive somewhere.
class CoercivityError : public Error {
public:
    using Error::Error;
};

/// Iterative solver (CG or Newton) failed to converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual,
                     std::vector<double> history = {})
        : Error(msg), final_residual(residual), history(std::move(history)) {}

    double final_residual = 0.0;
    /// Per-iteration residual or increment norms, for diagnostics.
    std::vector<double> history;
};

/// File format / IO mismatch on cached artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tlsc
