#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tanfield/model.hpp"
#include "tanfield/sphere.hpp"

namespace tanfield::studies {

// Ordinary least squares on (log x, log y).
struct RateFit {
  std::vector<double> log_xs;
  std::vector<double> log_ys;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square residual in log space
};

RateFit rate_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Exact L2(Omega x S2) norm of the part of the combined solution above
// truncation degree L_trunc at time t:
//   sqrt( sum_{l > L_trunc} (2l+1) (w1_l + w2_l) )
// with the per-degree weights of the covariance expansion.
double truncation_tail_norm(const model::ModelParams& params,
                            const model::PowerSpectra& spectra, double t,
                            int L_trunc);

// Fitted decay of the exact tail norm against the truncation degree.
RateFit truncation_rate_study(const model::ModelParams& params,
                              const model::PowerSpectra& spectra, double t,
                              const std::vector<int>& L_values);

struct ChebyshevReport {
  double eps = 0.0;
  std::size_t n_mc = 0;
  double empirical = 0.0;      // frequency of |tail field| >= eps at the point
  double bound = 0.0;          // exact tail variance at the point / eps^2
  double standard_error = 0.0; // binomial SE of the empirical frequency
  bool pass = false;           // empirical <= bound + 3 SE
};

// Monte Carlo check of the Chebyshev truncation bound at a fixed point.
ChebyshevReport chebyshev_tail_check(const model::ModelParams& params,
                                     const model::PowerSpectra& spectra,
                                     double t, int L_trunc, double eps,
                                     std::size_t n_mc,
                                     std::uint64_t master_seed,
                                     const sphere::SpherePoint& point);

// ||X(t) - X(tau)|| in L2(Omega x S2), from exact per-mode increment
// variances. Requires beta > 1 - H (the increment integrals diverge
// otherwise) and 0 <= tau < t.
double increment_norm(const model::ModelParams& params,
                      const model::PowerSpectra& spectra, double t,
                      double tau);

struct IncrementStudy {
  struct Row {
    double t = 0.0;
    double tau = 0.0;
    double gap = 0.0;       // t - tau
    double sum = 0.0;       // t + tau
    double norm2 = 0.0;     // squared increment norm
    double ratio_prop = 0.0;  // norm2 (t+tau)^{2(1-beta)} / gap^{2H}
    double ratio_cor = 0.0;   // norm2 (t+tau)^4 / gap^{2H}
  };
  std::vector<Row> rows;
  double spread_factor = 0.0;  // max over equal-sum groups of max/min ratio_prop
  bool spread_bounded = false;
  // with constants calibrated on the smallest t+tau group, is the
  // (t+tau)^4 bound the smaller one at the largest t+tau?
  bool cor_bound_tighter_at_large = false;
};

IncrementStudy increment_bound_study(
    const model::ModelParams& params, const model::PowerSpectra& spectra,
    const std::vector<std::pair<double, double>>& t_tau_pairs,
    double bound_factor = 4.0);

}  // namespace tanfield::studies
