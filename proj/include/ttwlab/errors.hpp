#ifndef TTWLAB_ERRORS_HPP
#define TTWLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ttw {

// Base class for everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation at or too close to a singular point of the metric or the
// potential (radial wall, r -> 0, angular barrier).
struct PoleError : Error {
    using Error::Error;
};

// An operation was asked of a potential variant it is not defined for.
struct VariantError : Error {
    using Error::Error;
};

// The complex factorization needs a real sqrt(J2); J2 <= 0 is refused,
// never silently complexified.
struct NegativeJ2Error : Error {
    using Error::Error;
};

// Fixed-point iteration of the implicit midpoint stage stalled.
struct NoConvergenceError : Error {
    using Error::Error;
};

// An observable faulted inside a finite-difference stencil.
struct EvalError : Error {
    using Error::Error;
};

// Invalid parameter or state (NaN, out-of-range radius, bad config).
struct DomainError : Error {
    using Error::Error;
};

} // namespace ttw

#endif
