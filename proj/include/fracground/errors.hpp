#pragma once

#include <stdexcept>
#include <string>

namespace fracground {

// Invalid scalar argument or configuration value (bad sigma range, negative width, ...).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Two fields/spectra that must share a grid do not.
struct GridMismatchError : std::invalid_argument {
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// A field fails a structural precondition (nonnegativity, symmetry, monotone decay, ...).
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation is not defined for the requested problem variant.
struct UnsupportedVariantError : std::invalid_argument {
    explicit UnsupportedVariantError(const std::string& what) : std::invalid_argument(what) {}
};

// The defocusing-defocusing variant admits only the trivial state; solving it is refused.
struct TrivialityError : std::invalid_argument {
    explicit TrivialityError(const std::string& what) : std::invalid_argument(what) {}
};

// Constraint-set geometry breaks down: speed at/above the existence threshold, or a
// projection root ceases to exist (tangency).
struct ThresholdError : std::runtime_error {
    explicit ThresholdError(const std::string& what) : std::runtime_error(what) {}
};

// A scalar scaling equation has no positive root for the given field.
struct NoRootError : std::runtime_error {
    explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point iteration left the admissible regime.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration budget exhausted where a converged result is required.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity that must be positive at a constrained minimizer is not.
struct StationarityError : std::runtime_error {
    explicit StationarityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or report (CSV/JSON parse and schema problems).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracground
