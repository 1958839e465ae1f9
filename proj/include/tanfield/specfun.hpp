#pragma once

#include <tuple>

namespace tanfield::specfun {

// Index pair of the generalized Mittag-Leffler function E_{a,b}.
struct MlParams {
  double a;
  double b;
};

// Largest positive argument supported by mittag_leffler; only negative and
// small positive arguments are meaningful for the diffusion kernels.
inline constexpr double kMlMaxArgument = 5.0;

// Generalized Mittag-Leffler function E_{a,b}(z) = sum_k z^k / Gamma(a k + b)
// for real z <= kMlMaxArgument, a in (0, 2], b > 0.
//
// Evaluation switches between a compensated (double-double) Taylor sum and
// the negative-axis asymptotic expansion; both branches carry an error
// estimate and an AccuracyError is thrown if neither certifies the target
// of 1e-10 relative (1e-12 absolute far on the negative axis).
double mittag_leffler(double a, double b, double z);

// Relaxation kernel G_lambda(t) = t^{beta-1} E_{beta,beta}(-lambda t^beta),
// beta in (0,1], lambda >= 0, t > 0. Strictly positive; singular at t = 0
// when beta < 1 (callers use graded meshes, see stochastic::graded_mesh).
double ml_kernel(double beta, double lambda, double t);

// Legendre polynomial P_ell(t), t in [-1, 1], by the three-term recurrence.
double legendre(int ell, double t);

// P_ell(t) together with its first and second derivatives.
std::tuple<double, double, double> legendre_derivs(int ell, double t);

namespace detail {

// The two internal branches, exposed so tests can check that they agree in
// the switch-over window. Each returns {value, absolute error estimate}.
std::pair<double, double> ml_taylor(double a, double b, double z);
std::pair<double, double> ml_asymptotic(double a, double b, double z);

// Taylor/asymptotic switch point on the negative axis for index a:
// Taylor is used for z >= -ml_switch_point(a).
double ml_switch_point(double a);

}  // namespace detail

}  // namespace tanfield::specfun
