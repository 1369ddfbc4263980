#pragma once

#include <stdexcept>
#include <string>

namespace h14 {

// Numerical failures. The CLI maps these to exit code 1; std::invalid_argument
// (bad input) maps to 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

// D C^q - I is (nearly) rank deficient: the orbit is close to parabolic.
struct SingularJacobian : NumericalError {
    using NumericalError::NumericalError;
};

struct OutOfDomain : NumericalError {
    using NumericalError::NumericalError;
};

struct NoRealRoot : NumericalError {
    using NumericalError::NumericalError;
};

struct NotResonant : NumericalError {
    using NumericalError::NumericalError;
};

struct StepUnderflow : NumericalError {
    using NumericalError::NumericalError;
};

struct Degenerate : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace h14
