#pragma once

#include <stdexcept>
#include <string>

namespace fracspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument and domain errors.
class DomainError : public Error { using Error::Error; };
class BranchCutViolation : public Error { using Error::Error; };

// Grid / signal shape errors.
class GridError : public Error { using Error::Error; };
class GridMismatch : public Error { using Error::Error; };
class TooFewPoints : public Error { using Error::Error; };

// Numerical certification failures.
class ConvergenceFailure : public Error { using Error::Error; };
class TruncationError : public Error { using Error::Error; };
class SingularityTooClose : public Error { using Error::Error; };
class MissingCoefficient : public Error { using Error::Error; };

// Linear algebra.
class SingularMatrix : public Error { using Error::Error; };
class DefectiveMatrix : public Error { using Error::Error; };

// Solvers.
class ResidualTooLarge : public Error { using Error::Error; };
class StepSizeTooLarge : public Error { using Error::Error; };

// Configuration and I/O.
class ConfigError : public Error { using Error::Error; };

}  // namespace fracspec
