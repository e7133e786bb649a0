#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pslab {

inline constexpr const char* kVersion = "1.0.0";

// A FieldSpec violates its own constraints (site probability outside (0,1], ...).
struct invalid_spec_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An exact computation would exceed its enumeration budget.
struct feasibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A window or buffer request exceeds the memory budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented caller obligation was violated (window coverage, ...).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature refinement hit its panel cap before converging. Carries the last
// two estimates so the caller can judge how far apart they are.
struct accuracy_error : std::runtime_error {
    std::complex<double> last;
    std::complex<double> previous;
    accuracy_error(const std::string& msg, std::complex<double> last_est,
                   std::complex<double> previous_est)
        : std::runtime_error(msg), last(last_est), previous(previous_est) {}
};

}  // namespace pslab
