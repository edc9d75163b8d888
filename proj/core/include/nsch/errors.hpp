#pragma once

#include <stdexcept>
#include <string>

namespace nsch {

// Base for all errors thrown by the library. CLI maps SolverError -> exit 2
// and ConfigError -> exit 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : Error {
    using Error::Error;
};

// Iterative solver ran out of its iteration budget.
struct NonConvergence : SolverError {
    int iterations;
    double residual;
    NonConvergence(const std::string& what, int iters, double res)
        : SolverError(what + " (iterations=" + std::to_string(iters) +
                      ", residual=" + std::to_string(res) + ")"),
          iterations(iters),
          residual(res) {}
};

// Neumann problem with a right-hand side whose mean is not (numerically) zero.
struct IncompatibleRHS : SolverError {
    using SolverError::SolverError;
};

// Time step violates the advertised stability bound of a scheme.
struct StabilityViolation : SolverError {
    using SolverError::SolverError;
};

// NaN or Inf showed up in a state field.
struct NonFinite : SolverError {
    using SolverError::SolverError;
};

// Argument outside the domain of a singular function (log potential terms).
struct SingularArgument : Error {
    using Error::Error;
};

// Coefficient function dropped below its admissible lower bound.
struct CoefficientBelowBound : Error {
    using Error::Error;
};

// Trajectories or fields on different grids were combined.
struct MismatchedGrids : Error {
    using Error::Error;
};

// Snapshot/checkpoint container version is not the one this build writes.
struct FormatVersionMismatch : Error {
    using Error::Error;
};

// Snapshot/checkpoint payload failed its checksum or is truncated.
struct CorruptSnapshot : Error {
    using Error::Error;
};

// Bad or unknown configuration input.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nsch
