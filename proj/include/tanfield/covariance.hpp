#pragma once

#include <utility>
#include <vector>

#include "tanfield/model.hpp"
#include "tanfield/sphere.hpp"

namespace tanfield::covariance {

// Estar(t, z) = Gamma(2H+1) int_0^t u^{2b+2H-3}
//               E_{b,b}(-u^b z) E_{b,b+2H-1}(-u^b z) du,
// the per-mode noise variance multiplier. The endpoint singularity is
// absorbed by the substitution u = t w^{1/(2b+2H-2)}; panels are doubled
// until the value is stable to 1e-9. Requires beta + hurst > 1 (the
// integral diverges otherwise) and throws AccuracyError if violated.
double estar(double t, double z, double beta, double hurst);

// Per-degree weights of Prop-style covariance sums at time t:
//   first  = sig_hat2   * E_{b,1}(-t0^b psi)^2 + A1 * Estar(t, psi)
//   second = sig_tilde2 * E_{b,1}(-t0^b psi)^2 + A2 * Estar(t, psi)
// for ell = 1..L (index ell-1).
std::pair<std::vector<double>, std::vector<double>> degree_weights(
    const model::ModelParams& params, const model::PowerSpectra& spectra,
    double t);

// Equal-time covariance tensor of the combined solution between points x
// and y: sum over degrees of the Legendre tensor kernels weighted by
// degree_weights.
sphere::CMat3 covariance_matrix(const model::ModelParams& params,
                                const model::PowerSpectra& spectra, double t,
                                const sphere::SpherePoint& x,
                                const sphere::SpherePoint& y);

// trace of covariance_matrix(x, x); independent of x by rotational
// invariance of the kernels.
double variance_trace(const model::ModelParams& params,
                      const model::PowerSpectra& spectra, double t);

namespace detail {

// Fixed-panel evaluation backing estar; exposed for the mesh-doubling
// self-convergence checks.
double estar_panels(double t, double z, double beta, double hurst,
                    std::size_t panels);

}  // namespace detail

}  // namespace tanfield::covariance
