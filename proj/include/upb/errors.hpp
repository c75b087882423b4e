// errors.hpp — exception types thrown across the library
#pragma once

#include <stdexcept>
#include <string>

namespace upb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock cutoff too small for the requested operator or state.
struct InvalidCutoffError : Error { using Error::Error; };

// Operator/state dimensions or Hilbert spaces do not match.
struct ShapeError : Error { using Error::Error; };

// A closed-form denominator vanished for the supplied parameters.
struct SingularParameterError : Error { using Error::Error; };

// g2 requested for a mode with (numerically) zero occupation.
struct UndefinedCorrelationError : Error { using Error::Error; };

// The Liouvillian null space has dimension > 1.
struct NonuniqueSteadyStateError : Error { using Error::Error; };

// A solve produced a state violating density-matrix invariants.
struct NumericalFailureError : Error { using Error::Error; };

// Adaptive integrator step size underflowed.
struct StiffnessError : Error { using Error::Error; };

// Thermal-state truncation leakage above tolerance.
struct WidenCutoffError : Error { using Error::Error; };

// Optimal-parameter relations diverge (zero mechanical damping).
struct DivergenceError : Error { using Error::Error; };

// No root of the coincidence condition in the search bracket.
struct NoCoincidenceError : Error { using Error::Error; };

// Config file rejected (unknown key, unit mix, malformed number, ...).
struct ParseError : Error { using Error::Error; };

}  // namespace upb
