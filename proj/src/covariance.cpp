#include "tanfield/covariance.hpp"

#include <cmath>

#include "tanfield/detail/gauss.hpp"
#include "tanfield/errors.hpp"
#include "tanfield/specfun.hpp"

namespace tanfield::covariance {

namespace detail {

double estar_panels(double t, double z, double beta, double hurst,
                    std::size_t panels) {
  const double q = 2.0 * beta + 2.0 * hurst - 2.0;
  const double b2 = beta + 2.0 * hurst - 1.0;
  auto integrand = [&](double w) {
    const double u = t * std::pow(w, 1.0 / q);
    const double x = -std::pow(u, beta) * z;
    return specfun::mittag_leffler(beta, beta, x) *
           specfun::mittag_leffler(beta, b2, x);
  };
  static const tanfield::detail::GaussRule rule =
      tanfield::detail::gauss_legendre(16);
  const double core =
      tanfield::detail::composite_gauss(integrand, 0.0, 1.0, panels, rule);
  return std::tgamma(2.0 * hurst + 1.0) * std::pow(t, q) / q * core;
}

}  // namespace detail

double estar(double t, double z, double beta, double hurst) {
  if (!(beta > 0.0) || beta > 1.0) {
    throw DomainError("estar: requires beta in (0,1]");
  }
  if (!(hurst >= 0.5) || hurst >= 1.0) {
    throw DomainError("estar: requires hurst in [1/2,1)");
  }
  if (t < 0.0 || z < 0.0) throw DomainError("estar: requires t, z >= 0");
  if (t == 0.0) return 0.0;
  if (!(beta + hurst > 1.0)) {
    throw AccuracyError("estar: direct integral diverges for beta + H <= 1");
  }
  double prev = detail::estar_panels(t, z, beta, hurst, 8);
  for (std::size_t panels = 16; panels <= 4096; panels *= 2) {
    const double cur = detail::estar_panels(t, z, beta, hurst, panels);
    if (std::fabs(cur - prev) <=
        std::max(1e-9 * std::fabs(cur), 1e-300)) {
      return cur;
    }
    prev = cur;
  }
  throw AccuracyError("estar: panel refinement did not converge");
}

std::pair<std::vector<double>, std::vector<double>> degree_weights(
    const model::ModelParams& params, const model::PowerSpectra& spectra,
    double t) {
  model::validate_params(params);
  spectra.validate();
  if (t < 0.0) throw DomainError("degree_weights: requires t >= 0");
  const int L = spectra.L;
  std::vector<double> w1(static_cast<std::size_t>(L), 0.0);
  std::vector<double> w2(w1.size(), 0.0);
  for (int ell = 1; ell <= L; ++ell) {
    const double psi_l = model::psi(sphere::eigenvalue(ell), params);
    double damp2 = 1.0;
    if (params.t0 > 0.0) {
      const double e1 = specfun::mittag_leffler(
          params.beta, 1.0, -std::pow(params.t0, params.beta) * psi_l);
      damp2 = e1 * e1;
    }
    double noise = 0.0;
    if (t > 0.0 && (spectra.a1(ell) > 0.0 || spectra.a2(ell) > 0.0)) {
      noise = model::detail::unit_mode_variance(params, psi_l, t);
    }
    w1[static_cast<std::size_t>(ell - 1)] =
        spectra.sh2(ell) * damp2 + spectra.a1(ell) * noise;
    w2[static_cast<std::size_t>(ell - 1)] =
        spectra.st2(ell) * damp2 + spectra.a2(ell) * noise;
  }
  return {std::move(w1), std::move(w2)};
}

sphere::CMat3 covariance_matrix(const model::ModelParams& params,
                                const model::PowerSpectra& spectra, double t,
                                const sphere::SpherePoint& x,
                                const sphere::SpherePoint& y) {
  const auto [w1, w2] = degree_weights(params, spectra, t);
  sphere::CMat3 acc = sphere::CMat3::Zero();
  for (int ell = 1; ell <= spectra.L; ++ell) {
    const std::size_t k = static_cast<std::size_t>(ell - 1);
    if (w1[k] == 0.0 && w2[k] == 0.0) continue;
    const auto [dlg, clg] = sphere::tensor_kernels(ell, x, y);
    acc += w1[k] * dlg + w2[k] * clg;
  }
  return acc;
}

double variance_trace(const model::ModelParams& params,
                      const model::PowerSpectra& spectra, double t) {
  const auto [w1, w2] = degree_weights(params, spectra, t);
  double acc = 0.0;
  for (int ell = 1; ell <= spectra.L; ++ell) {
    const std::size_t k = static_cast<std::size_t>(ell - 1);
    acc += (2.0 * ell + 1.0) / (4.0 * M_PI) * (w1[k] + w2[k]);
  }
  return acc;
}

}  // namespace tanfield::covariance
