#pragma once

#include <stdexcept>
#include <string>

namespace cvdyn {

// Thrown when an internally computed quantity is inconsistent beyond what
// roundoff can explain (e.g. a discriminant that should be nonnegative).
struct NumericalInconsistency : std::runtime_error {
    explicit NumericalInconsistency(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the adaptive integrator when the controlled step size underflows.
struct StiffnessError : std::runtime_error {
    explicit StiffnessError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a physical-regime guard is violated hard enough that the
// model expansion is meaningless and refusing is the only honest answer.
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cvdyn
