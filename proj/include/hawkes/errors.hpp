#pragma once

#include <stdexcept>

namespace hawkes {

// Kernel (or tilted kernel) fails the subcriticality requirement ||h||_L1 < 1.
struct InstabilityError : std::domain_error {
    using std::domain_error::domain_error;
};

// theta beyond the critical exponent: the fixed-point equation has no real root.
struct NoRealRootError : std::domain_error {
    using std::domain_error::domain_error;
};

// Per-step fixed-point iteration stopped contracting (grid too coarse for theta).
struct DivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A tail integral could not be resolved within the configured horizon.
struct HorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Saddle point sits on the critical boundary; derivative ladders blow up.
struct SingularSaddleError : std::domain_error {
    using std::domain_error::domain_error;
};

// t*x is not an integer: point-mass asymptotics are lattice-only.
struct LatticeError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace hawkes
