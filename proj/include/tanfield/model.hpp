#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tanfield/sphere.hpp"
#include "tanfield/stochastic.hpp"

namespace tanfield::model {

// Exponents of the fractional equation and the stage-switch time t0:
// alpha/gamma enter the diffusion symbol psi, beta is the order of the
// fractional time derivative, hurst the index of the driving fBm.
struct ModelParams {
  double alpha = 1.5;
  double gamma = 0.0;
  double beta = 0.8;
  double hurst = 0.7;
  double t0 = 0.0;
};

// Throws DomainError naming the violated constraint.
void validate_params(const ModelParams& params);

struct PowerLaw {
  double c = 1.0;
  double nu = 4.0;
};

// Per-degree variances, ell = 1..L: A1/A2 drive the divergence-free and
// curl-free noise, sig_hat2/sig_tilde2 the initial field. A parametric
// family A_ell = c ell^{-nu} is remembered when used, so admissibility can
// be decided from the decay exponent instead of a finite partial sum.
struct PowerSpectra {
  int L = 0;
  std::vector<double> A1, A2;
  std::vector<double> sig_hat2, sig_tilde2;
  std::optional<PowerLaw> noise_family;
  std::optional<PowerLaw> initial_family;

  static PowerSpectra zero(int L);
  static PowerSpectra power_law_noise(int L, double c, double nu);
  PowerSpectra& with_power_law_initial(double c, double nu);

  void validate() const;

  double a1(int ell) const { return A1[static_cast<std::size_t>(ell - 1)]; }
  double a2(int ell) const { return A2[static_cast<std::size_t>(ell - 1)]; }
  double sh2(int ell) const {
    return sig_hat2[static_cast<std::size_t>(ell - 1)];
  }
  double st2(int ell) const {
    return sig_tilde2[static_cast<std::size_t>(ell - 1)];
  }
};

// Diffusion symbol psi(lambda) = lambda^{alpha/2} (1+lambda)^{gamma/2}.
double psi(double lambda, const ModelParams& params);

// tau = max{(2/beta)(1 - beta - H), 0} from the solvability hypothesis.
double tau_exponent(const ModelParams& params);

struct AdmissibilityReport {
  bool params_ok = false;
  std::string violation;       // first violated constraint, empty if none
  double tau = 0.0;
  bool summable = false;       // sum (2l+1) psi(lambda_l)^tau A_l finite
  bool decided_from_decay = false;  // true when a parametric family decided it
  double weighted_partial_sum = 0.0;
  bool estar_direct_ok = false;  // beta + H > 1
  std::string note;

  bool admissible() const { return params_ok && summable; }
};

AdmissibilityReport check_admissibility(const ModelParams& params,
                                        const PowerSpectra& spectra);

// Field values on a set of points at one time; tangent at every point.
struct TangentFieldSample {
  std::vector<sphere::SpherePoint> points;
  std::vector<sphere::CVec3> values;
  double time = 0.0;
};

// Noise-driven solution sampled pathwise: one fresh complex fBm per
// (ell, m, family), integrated against the relaxation kernel on a graded
// mesh with `mesh_points` intervals, then synthesized on the grid nodes.
TangentFieldSample sample_solution_pathwise(const ModelParams& params,
                                            const PowerSpectra& spectra,
                                            double t,
                                            const sphere::SphereGrid& grid,
                                            std::uint64_t master_seed,
                                            std::uint64_t replicate = 0,
                                            std::size_t mesh_points = 512);

// Noise-driven solution drawn exactly in distribution at the single time t:
// each coefficient is centred complex Gaussian with the analytic per-mode
// variance A_ell Estar(t, psi(lambda_ell)).
sphere::SpectralCoefficients sample_solution_exact_time(
    const ModelParams& params, const PowerSpectra& spectra, double t,
    std::uint64_t master_seed, std::uint64_t replicate = 0);

// Cauchy problem: Gaussian initial coefficients with the initial spectra,
// damped by E_{beta,1}(-t^beta psi(lambda_ell)).
sphere::SpectralCoefficients sample_cauchy(const ModelParams& params,
                                           const PowerSpectra& spectra,
                                           double t, std::uint64_t master_seed,
                                           std::uint64_t replicate = 0);

// Same propagation applied to given initial coefficients.
sphere::SpectralCoefficients propagate_cauchy(
    const ModelParams& params, const sphere::SpectralCoefficients& initial,
    double t);

// Two-stage solution: initial field evolved to t0 by the Cauchy multiplier
// plus the (independent) noise contribution on [0, t], exact at time t.
sphere::SpectralCoefficients sample_combined(const ModelParams& params,
                                             const PowerSpectra& spectra,
                                             double t,
                                             std::uint64_t master_seed,
                                             std::uint64_t replicate = 0);

// Zero all degrees above L_keep (container width unchanged).
sphere::SpectralCoefficients truncate(const sphere::SpectralCoefficients& c,
                                      int L_keep);

namespace detail {

// Relaxation-kernel table on a mesh; the left endpoint 0 gets kernel value 0
// when beta < 1 (the singular first panel carries no left-point mass).
std::vector<double> kernel_table(double beta, double psi_l,
                                 const std::vector<double>& mesh);

// One pathwise coefficient: rs-integral of the tabulated kernel against a
// fresh complex fBm of total variance `a_ell` drawn from `stream`.
sphere::Complex pathwise_mode_coefficient(double hurst, double a_ell,
                                          const std::vector<double>& g,
                                          const std::vector<double>& mesh,
                                          const stochastic::RngStream& stream);

// Per-mode variance of the noise integral per unit spectrum weight:
// Estar(t, psi_l) on the direct path (beta+H > 1), the double-integral
// route otherwise.
double unit_mode_variance(const ModelParams& params, double psi_l, double t);

}  // namespace detail

}  // namespace tanfield::model
