#include "tanfield/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tanfield/detail/double_double.hpp"
#include "tanfield/errors.hpp"

namespace tanfield::specfun {

namespace {

using detail_dd = tanfield::detail::DoubleDouble;
using mp50 = boost::multiprecision::cpp_bin_float_50;

// ---------------------------------------------------------------------------
// Gamma-ratio tables for the Taylor branch.
//
// The Taylor sum of E_{a,b} needs Gamma(a k + b) to better than double
// precision: near the series/asymptotic switch the alternating terms cancel
// down by ~1e16, so double-precision terms would lose everything. Terms are
// generated by the recurrence t_k = t_{k-1} * z * rho_k with
//   rho_0 = 1/Gamma(b),   rho_k = Gamma(a(k-1)+b)/Gamma(a k + b),
// where the ratios are computed once per (a, b) in 50-digit arithmetic and
// stored as double-doubles. Tables are cached and grown on demand.
// ---------------------------------------------------------------------------

detail_dd to_dd(const mp50& x) {
  const double hi = static_cast<double>(x);
  const double lo = static_cast<double>(x - mp50(hi));
  return {hi, lo};
}

struct TableKey {
  double a, b;
  bool operator<(const TableKey& o) const {
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

using Table = std::vector<detail_dd>;

std::shared_ptr<const Table> gamma_ratio_table(double a, double b,
                                               std::size_t min_size) {
  static std::mutex mtx;
  static std::map<TableKey, std::shared_ptr<const Table>> cache;

  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[TableKey{a, b}];
  if (slot && slot->size() >= min_size) return slot;

  const std::size_t new_size =
      std::max<std::size_t>(min_size, slot ? 2 * slot->size() : 64);
  auto table = std::make_shared<Table>();
  table->reserve(new_size);

  const mp50 am(a), bm(b);
  mp50 g_prev = boost::math::tgamma(bm);
  table->push_back(to_dd(1 / g_prev));
  for (std::size_t k = 1; k < new_size; ++k) {
    const mp50 g = boost::math::tgamma(am * k + bm);
    table->push_back(to_dd(g_prev / g));
    g_prev = g;
  }
  slot = table;
  return slot;
}

constexpr std::size_t kMaxTaylorTerms = 200000;

// 1/Gamma(y) as sign and log-magnitude; zero at the poles y = 0, -1, -2, ...
struct LogRecipGamma {
  bool zero;
  int sign;
  double log_mag;
};

LogRecipGamma log_recip_gamma(double y) {
  if (y > 0.0) {
    return {false, 1, -std::lgamma(y)};
  }
  // reflection: 1/Gamma(y) = Gamma(1-y) sin(pi y) / pi
  const double m = std::floor(y);
  const double r = y - m;
  if (r == 0.0) return {true, 0, 0.0};
  const double sin_pi_y =
      (static_cast<long long>(m) % 2 == 0 ? 1.0 : -1.0) * std::sin(M_PI * r);
  const int sign = sin_pi_y > 0.0 ? 1 : -1;
  return {false, sign,
          std::lgamma(1.0 - y) + std::log(std::fabs(sin_pi_y) / M_PI)};
}

bool certified(double value, double err) {
  return err <= std::max(1e-11 * std::fabs(value), 5e-13);
}

}  // namespace

namespace detail {

double ml_switch_point(double a) {
  // Both branches floor near exp(-s) with s = x^{1/a}; s ~ 37 balances the
  // double-double Taylor cancellation against the asymptotic truncation.
  if (a >= 2.0) return std::numeric_limits<double>::max();
  return std::pow(37.0, a);
}

std::pair<double, double> ml_taylor(double a, double b, double z) {
  using tanfield::detail::abs_hi;
  using tanfield::detail::add;
  using tanfield::detail::mul;

  auto table = gamma_ratio_table(a, b, 64);
  for (;;) {
    detail_dd sum = (*table)[0];
    detail_dd term = (*table)[0];
    double max_mag = abs_hi(term);
    double last_mag = max_mag;
    std::size_t k = 1;
    bool done = false;
    for (; k < kMaxTaylorTerms; ++k) {
      if (k >= table->size()) break;  // grow table and restart
      term = mul(mul(term, z), (*table)[k]);
      sum = add(sum, term);
      last_mag = abs_hi(term);
      max_mag = std::max(max_mag, last_mag);
      if (k >= 4 && last_mag <= 1e-40 * max_mag) {
        done = true;
        break;
      }
    }
    if (done) {
      const double value = sum.to_double();
      const double err =
          max_mag * static_cast<double>(k) * 1e-31 + 2.0 * last_mag;
      return {value, err};
    }
    if (k >= kMaxTaylorTerms) {
      throw AccuracyError("mittag_leffler: Taylor series did not converge");
    }
    table = gamma_ratio_table(a, b, 2 * table->size());
  }
}

std::pair<double, double> ml_asymptotic(double a, double b, double z) {
  // E_{a,b}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(b - a k), x -> +inf,
  // valid for a in (0, 2). Optimal truncation: stop before the first growing
  // term and report it as the error estimate.
  const double x = -z;
  const double log_x = std::log(x);
  double sum = 0.0;
  double last_mag = std::numeric_limits<double>::max();
  double omitted = 0.0;
  constexpr int kMaxTerms = 400;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const auto rg = log_recip_gamma(b - a * k);
    if (rg.zero) continue;
    const double log_mag = rg.log_mag - k * log_x;
    if (log_mag > 700.0) {  // far past optimal truncation
      omitted = std::numeric_limits<double>::max();
      break;
    }
    const double mag = std::exp(log_mag);
    if (mag >= last_mag) {  // divergence sets in
      omitted = mag;
      break;
    }
    const double sign = ((k % 2 == 1) ? 1.0 : -1.0) * rg.sign;
    sum += sign * mag;
    last_mag = mag;
    omitted = mag;  // if the loop ends by k-limit or smallness
    if (mag <= 1e-18 * std::fabs(sum)) break;
  }
  const double err = omitted + 1e-15 * std::fabs(sum);
  return {sum, err};
}

}  // namespace detail

double mittag_leffler(double a, double b, double z) {
  if (!(a > 0.0) || a > 2.0 || !(b > 0.0)) {
    throw DomainError("mittag_leffler: requires a in (0,2], b > 0");
  }
  if (!(z <= kMlMaxArgument)) {
    throw DomainError("mittag_leffler: argument above supported range");
  }
  if (a == 1.0 && b == 1.0) return std::exp(z);  // classical limit

  if (z >= -detail::ml_switch_point(a)) {
    const auto [value, err] = detail::ml_taylor(a, b, z);
    if (certified(value, err)) return value;
    throw AccuracyError("mittag_leffler: series branch lost accuracy");
  }
  const auto [value, err] = detail::ml_asymptotic(a, b, z);
  if (certified(value, err)) return value;
  const auto [tvalue, terr] = detail::ml_taylor(a, b, z);
  if (certified(tvalue, terr)) return tvalue;
  throw AccuracyError("mittag_leffler: no branch certifies the tolerance");
}

double ml_kernel(double beta, double lambda, double t) {
  if (!(beta > 0.0) || beta > 1.0) {
    throw DomainError("ml_kernel: requires beta in (0,1]");
  }
  if (lambda < 0.0) throw DomainError("ml_kernel: requires lambda >= 0");
  if (!(t > 0.0)) {
    throw DomainError("ml_kernel: kernel undefined at t <= 0");
  }
  if (beta == 1.0) return std::exp(-lambda * t);
  return std::pow(t, beta - 1.0) *
         mittag_leffler(beta, beta, -lambda * std::pow(t, beta));
}

double legendre(int ell, double t) {
  return std::get<0>(legendre_derivs(ell, t));
}

std::tuple<double, double, double> legendre_derivs(int ell, double t) {
  if (ell < 0) throw DomainError("legendre: degree must be >= 0");
  if (std::fabs(t) > 1.0 + 1e-10) {
    throw DomainError("legendre: argument outside [-1, 1]");
  }
  t = std::clamp(t, -1.0, 1.0);
  if (ell == 0) return {1.0, 0.0, 0.0};
  double p0 = 1.0, p1 = t;
  double d0 = 0.0, d1 = 1.0;
  double s0 = 0.0, s1 = 0.0;
  for (int k = 2; k <= ell; ++k) {
    const double a = (2.0 * k - 1.0) / k;
    const double c = (k - 1.0) / k;
    const double pk = a * t * p1 - c * p0;
    const double dk = a * (p1 + t * d1) - c * d0;
    const double sk = a * (2.0 * d1 + t * s1) - c * s0;
    p0 = p1; p1 = pk;
    d0 = d1; d1 = dk;
    s0 = s1; s1 = sk;
  }
  return {p1, d1, s1};
}

}  // namespace tanfield::specfun
