#pragma once

#include <stdexcept>
#include <string>

namespace tanfield {

// Bad argument values (out-of-range parameters, invalid indices, malformed
// configuration). Maps to CLI exit code 2.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Model/spectra combination rejected by the admissibility rules.
// Maps to CLI exit code 3.
struct AdmissibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not certify its accuracy target
// (series/asymptotic switch, quadrature non-convergence, failed
// covariance factorization). Maps to CLI exit code 4.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point evaluation requested inside the polar caps where the spherical
// frame is singular and no analytic limit is implemented.
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tanfield
