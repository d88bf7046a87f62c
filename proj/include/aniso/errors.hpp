#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scalar argument is outside its admissible range (t <= 0, p < 1, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

// A structured input (point, mask, field pair) violates a precondition.
struct InvalidInput : Error {
    using Error::Error;
};

// The grid cannot represent the requested object (unresolved annulus,
// multiplier not negligible at Nyquist, ...).
struct InvalidGrid : Error {
    using Error::Error;
};

// Input field carries zero-frequency mass where a mean-free field is required.
struct MeanNotRemoved : Error {
    MeanNotRemoved(const std::string& what, double mass)
        : Error(what), zero_mode_mass(mass) {}
    double zero_mode_mass;
};

// Calderon-Zygmund height so small that the level set covers the whole grid.
struct BetaTooSmall : Error {
    using Error::Error;
};

// A theorem hypothesis fails (p0 <= 1), so the experiment is vacuous.
struct HypothesisViolated : Error {
    using Error::Error;
};

} // namespace aniso
