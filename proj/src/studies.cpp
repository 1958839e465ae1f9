#include "tanfield/studies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "tanfield/covariance.hpp"
#include "tanfield/detail/parallel.hpp"
#include "tanfield/errors.hpp"
#include "tanfield/specfun.hpp"
#include "tanfield/stochastic.hpp"

namespace tanfield::studies {

namespace {

using sphere::Complex;
using sphere::CVec3;

}  // namespace

RateFit rate_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw DomainError("rate_fit: need at least three (x, y) pairs");
  }
  RateFit fit;
  fit.log_xs.reserve(xs.size());
  fit.log_ys.reserve(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError("rate_fit: data must be positive for log-log fit");
    }
    fit.log_xs.push_back(std::log(xs[i]));
    fit.log_ys.push_back(std::log(ys[i]));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += fit.log_xs[i];
    my += fit.log_ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (fit.log_xs[i] - mx) * (fit.log_xs[i] - mx);
    sxy += (fit.log_xs[i] - mx) * (fit.log_ys[i] - my);
  }
  if (!(sxx > 1e-24)) {
    throw DomainError("rate_fit: degenerate abscissae");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = fit.log_ys[i] - (fit.intercept + fit.slope * fit.log_xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

double truncation_tail_norm(const model::ModelParams& params,
                            const model::PowerSpectra& spectra, double t,
                            int L_trunc) {
  if (L_trunc < 0 || L_trunc > spectra.L) {
    throw DomainError("truncation_tail_norm: requires 0 <= L_trunc <= L");
  }
  const auto [w1, w2] = covariance::degree_weights(params, spectra, t);
  double acc = 0.0;
  for (int ell = spectra.L; ell > L_trunc; --ell) {
    const std::size_t k = static_cast<std::size_t>(ell - 1);
    acc += (2.0 * ell + 1.0) * (w1[k] + w2[k]);
  }
  return std::sqrt(acc);
}

RateFit truncation_rate_study(const model::ModelParams& params,
                              const model::PowerSpectra& spectra, double t,
                              const std::vector<int>& L_values) {
  if (L_values.size() < 3) {
    throw DomainError("truncation_rate_study: need at least three degrees");
  }
  std::vector<double> xs, ys;
  xs.reserve(L_values.size());
  ys.reserve(L_values.size());
  for (const int L : L_values) {
    xs.push_back(static_cast<double>(L));
    ys.push_back(truncation_tail_norm(params, spectra, t, L));
  }
  return rate_fit(xs, ys);
}

ChebyshevReport chebyshev_tail_check(const model::ModelParams& params,
                                     const model::PowerSpectra& spectra,
                                     double t, int L_trunc, double eps,
                                     std::size_t n_mc,
                                     std::uint64_t master_seed,
                                     const sphere::SpherePoint& point) {
  if (!(eps > 0.0)) throw DomainError("chebyshev_tail_check: eps must be > 0");
  if (L_trunc < 0 || L_trunc >= spectra.L) {
    throw DomainError("chebyshev_tail_check: requires 0 <= L_trunc < L");
  }
  const auto report_weights = covariance::degree_weights(params, spectra, t);
  const auto& w1 = report_weights.first;
  const auto& w2 = report_weights.second;

  // exact tail variance at the point (addition theorem at x = y)
  double tail_var = 0.0;
  for (int ell = L_trunc + 1; ell <= spectra.L; ++ell) {
    const std::size_t k = static_cast<std::size_t>(ell - 1);
    tail_var += (2.0 * ell + 1.0) / (4.0 * M_PI) * (w1[k] + w2[k]);
  }

  // basis values of the tail modes at the point, built once
  struct Mode {
    int ell, m;
    CVec3 y, z;
    double v1, v2;  // per-coefficient variances
  };
  std::vector<Mode> modes;
  const double tau0 = params.t0;
  for (int ell = L_trunc + 1; ell <= spectra.L; ++ell) {
    const double psi_l = model::psi(sphere::eigenvalue(ell), params);
    double damp2 = 1.0;
    if (tau0 > 0.0) {
      const double e1 = specfun::mittag_leffler(
          params.beta, 1.0, -std::pow(tau0, params.beta) * psi_l);
      damp2 = e1 * e1;
    }
    const double unit_var =
        (t > 0.0 && (spectra.a1(ell) > 0.0 || spectra.a2(ell) > 0.0))
            ? model::detail::unit_mode_variance(params, psi_l, t)
            : 0.0;
    for (int m = -ell; m <= ell; ++m) {
      const auto pair = sphere::vsh(ell, m, point);
      Mode mode;
      mode.ell = ell;
      mode.m = m;
      mode.y = pair.y;
      mode.z = pair.z;
      mode.v1 = spectra.sh2(ell) * damp2 + spectra.a1(ell) * unit_var;
      mode.v2 = spectra.st2(ell) * damp2 + spectra.a2(ell) * unit_var;
      modes.push_back(mode);
    }
  }

  // one stream per replicate (mode draws in fixed order), in an id range
  // disjoint from the per-mode sampler streams
  const std::size_t exceed = tanfield::detail::parallel_reduce<std::size_t>(
      n_mc,
      [&](std::size_t rep, std::size_t& count) {
        auto engine =
            stochastic::RngStream{master_seed, (1ull << 50) + rep}.make_engine();
        std::normal_distribution<double> normal(0.0, 1.0);
        CVec3 field = CVec3::Zero();
        for (const auto& mode : modes) {
          if (mode.v1 > 0.0) {
            const double s = std::sqrt(0.5 * mode.v1);
            field += Complex(s * normal(engine), s * normal(engine)) * mode.y;
          }
          if (mode.v2 > 0.0) {
            const double s = std::sqrt(0.5 * mode.v2);
            field += Complex(s * normal(engine), s * normal(engine)) * mode.z;
          }
        }
        if (field.norm() >= eps) ++count;
      },
      [](std::size_t& total, const std::size_t& part) { total += part; });

  ChebyshevReport report;
  report.eps = eps;
  report.n_mc = n_mc;
  report.empirical = static_cast<double>(exceed) / static_cast<double>(n_mc);
  report.bound = tail_var / (eps * eps);
  report.standard_error = std::sqrt(
      report.empirical * (1.0 - report.empirical) / static_cast<double>(n_mc));
  report.pass = report.empirical <= report.bound + 3.0 * report.standard_error;
  return report;
}

double increment_norm(const model::ModelParams& params,
                      const model::PowerSpectra& spectra, double t,
                      double tau) {
  model::validate_params(params);
  spectra.validate();
  if (!(tau >= 0.0) || !(t >= tau)) {
    throw DomainError("increment_norm: requires 0 <= tau <= t");
  }
  if (!(params.beta > 1.0 - params.hurst)) {
    throw DomainError(
        "increment_norm: hypothesis beta > 1 - H violated; increment "
        "variances are not finite");
  }
  if (t == tau) return 0.0;
  double acc = 0.0;
  for (int ell = 1; ell <= spectra.L; ++ell) {
    const double weight = spectra.a1(ell) + spectra.a2(ell);
    if (weight == 0.0) continue;
    const double psi_l = model::psi(sphere::eigenvalue(ell), params);
    auto kernel = [&](double s) {
      return specfun::ml_kernel(params.beta, psi_l, s);
    };
    const double v =
        stochastic::integral_variance(kernel, tau, t, params.hurst);
    acc += (2.0 * ell + 1.0) * weight * v;
  }
  return std::sqrt(acc);
}

IncrementStudy increment_bound_study(
    const model::ModelParams& params, const model::PowerSpectra& spectra,
    const std::vector<std::pair<double, double>>& t_tau_pairs,
    double bound_factor) {
  IncrementStudy study;
  for (const auto& [t, tau] : t_tau_pairs) {
    const double norm = increment_norm(params, spectra, t, tau);
    IncrementStudy::Row row;
    row.t = t;
    row.tau = tau;
    row.gap = t - tau;
    row.sum = t + tau;
    row.norm2 = norm * norm;
    const double gap_pow = std::pow(row.gap, 2.0 * params.hurst);
    row.ratio_prop =
        row.norm2 * std::pow(row.sum, 2.0 * (1.0 - params.beta)) / gap_pow;
    row.ratio_cor = row.norm2 * std::pow(row.sum, 4.0) / gap_pow;
    study.rows.push_back(row);
  }

  // boundedness of the Prop-normalized ratio across gap sweeps at fixed t+tau
  std::map<long long, std::pair<double, double>> groups;  // keyed by rounded sum
  for (const auto& row : study.rows) {
    const long long key = std::llround(row.sum * 1e9);
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups[key] = {row.ratio_prop, row.ratio_prop};
    } else {
      it->second.first = std::min(it->second.first, row.ratio_prop);
      it->second.second = std::max(it->second.second, row.ratio_prop);
    }
  }
  double spread = 1.0;
  for (const auto& [key, mm] : groups) {
    (void)key;
    if (mm.first > 0.0) spread = std::max(spread, mm.second / mm.first);
  }
  study.spread_factor = spread;
  study.spread_bounded = spread <= bound_factor;

  // calibrate both bounds on the smallest t+tau, compare at the largest
  if (groups.size() >= 2) {
    const auto& small = *std::min_element(
        study.rows.begin(), study.rows.end(),
        [](const auto& a, const auto& b) { return a.sum < b.sum; });
    const auto& large = *std::max_element(
        study.rows.begin(), study.rows.end(),
        [](const auto& a, const auto& b) { return a.sum < b.sum; });
    const double c_prop = small.ratio_prop;
    const double c_cor = small.ratio_cor;
    const double gap_pow = std::pow(large.gap, 2.0 * params.hurst);
    const double bound_prop =
        c_prop * gap_pow / std::pow(large.sum, 2.0 * (1.0 - params.beta));
    const double bound_cor = c_cor * gap_pow / std::pow(large.sum, 4.0);
    study.cor_bound_tighter_at_large = bound_cor < bound_prop;
  }
  return study;
}

}  // namespace tanfield::studies
