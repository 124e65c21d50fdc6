#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace alkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr const char* kVersion = "alkit 1.0.0";

// Bad arguments, malformed files, violated preconditions. CLI exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

// Query point coincides with (or is too close to) a design row where a
// separation precondition applies.
struct PointInDesign : ValidationError {
    using ValidationError::ValidationError;
};

// Some coordinate of the query point is too close to the same coordinate of a
// design row, for computations that need per-coordinate separation.
struct CoordinateCollision : ValidationError {
    using ValidationError::ValidationError;
};

// Numerical breakdowns on otherwise valid input. CLI exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : NumericalError {
    using NumericalError::NumericalError;
};

struct ZeroVariance : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace alkit
