#include "tanfield/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tanfield/errors.hpp"

namespace tanfield::stochastic {

namespace {

using Complex = std::complex<double>;

void validate_times(const std::vector<double>& times) {
  if (times.size() < 2) {
    throw DomainError("fbm: need at least two time points");
  }
  if (times.front() != 0.0) {
    throw DomainError("fbm: time grid must start at 0");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw DomainError("fbm: time grid must be strictly increasing");
    }
  }
}

void validate_fbm_params(double hurst, double sigma2) {
  if (!(hurst >= 0.5) || hurst >= 1.0) {
    throw DomainError("fbm: Hurst index must lie in [1/2, 1)");
  }
  if (!(sigma2 > 0.0)) throw DomainError("fbm: sigma2 must be positive");
}

bool is_uniform(const std::vector<double>& times) {
  const double dt = times[1] - times[0];
  for (std::size_t k = 2; k < times.size(); ++k) {
    if (std::fabs(times[k] - times[k - 1] - dt) > 1e-12 * dt) return false;
  }
  return true;
}

// Precomputed unit-variance sampler for one (H, times) pair.
struct PathSampler {
  bool circulant = false;
  std::size_t n_increments = 0;
  std::vector<double> scale;  // circulant: sqrt(lambda_j)/sqrt(M)
  Eigen::MatrixXd chol;       // dense fallback, (n-1) x (n-1)
};

// fGn autocovariance at lag j for unit sigma2 and step dt
double fgn_autocov(std::size_t j, double dt, double hurst) {
  const double h2 = 2.0 * hurst;
  const double jd = static_cast<double>(j);
  return 0.5 * std::pow(dt, h2) *
         (std::pow(jd + 1.0, h2) + (j == 0 ? 1.0 : std::pow(jd - 1.0, h2)) -
          2.0 * std::pow(jd, h2));
}

std::shared_ptr<const PathSampler> build_sampler(
    double hurst, const std::vector<double>& times) {
  auto sampler = std::make_shared<PathSampler>();
  const std::size_t n_inc = times.size() - 1;
  sampler->n_increments = n_inc;

  if (is_uniform(times) && n_inc >= 2) {
    const double dt = times[1] - times[0];
    const std::size_t m = 2 * n_inc;
    std::vector<Complex> circ(m);
    for (std::size_t j = 0; j <= n_inc; ++j) circ[j] = fgn_autocov(j, dt, hurst);
    for (std::size_t j = 1; j < n_inc; ++j) circ[m - j] = circ[j];

    thread_local Eigen::FFT<double> fft;
    std::vector<Complex> lambda(m);
    fft.fwd(lambda, circ);
    double max_l = 0.0, min_l = 0.0;
    for (const auto& l : lambda) {
      max_l = std::max(max_l, l.real());
      min_l = std::min(min_l, l.real());
    }
    if (min_l >= -1e-8 * max_l) {
      sampler->circulant = true;
      sampler->scale.resize(m);
      const double root_m = std::sqrt(static_cast<double>(m));
      for (std::size_t j = 0; j < m; ++j) {
        sampler->scale[j] = std::sqrt(std::max(lambda[j].real(), 0.0)) / root_m;
      }
      return sampler;
    }
    // fall through to the dense factorization
  }

  Eigen::MatrixXd cov(n_inc, n_inc);
  for (std::size_t i = 0; i < n_inc; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = fbm_covariance(times[i + 1], times[j + 1], hurst, 1.0);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw AccuracyError("fbm: covariance factorization is not positive definite");
  }
  sampler->chol = llt.matrixL();
  return sampler;
}

std::uint64_t hash_times(double hurst, const std::vector<double>& times) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    h ^= bits;
    h *= 1099511628211ull;
  };
  mix(hurst);
  for (const double t : times) mix(t);
  return h;
}

std::shared_ptr<const PathSampler> sampler_for(
    double hurst, const std::vector<double>& times) {
  struct Entry {
    double hurst;
    std::vector<double> times;
    std::shared_ptr<const PathSampler> sampler;
  };
  static std::mutex mtx;
  static std::map<std::uint64_t, Entry> cache;

  const std::uint64_t key = hash_times(hurst, times);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end() && it->second.hurst == hurst &&
        it->second.times == times) {
      return it->second.sampler;
    }
  }
  auto sampler = build_sampler(hurst, times);
  std::lock_guard<std::mutex> lock(mtx);
  cache[key] = Entry{hurst, times, sampler};
  return sampler;
}

// path values at times[1..n] for unit sigma2
std::vector<double> draw_unit_path(const PathSampler& sampler,
                                   std::mt19937_64& engine) {
  const std::size_t n_inc = sampler.n_increments;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n_inc);
  if (sampler.circulant) {
    const std::size_t m = sampler.scale.size();
    std::vector<Complex> w(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double a = normal(engine);
      const double b = normal(engine);
      w[j] = sampler.scale[j] * Complex(a, b);
    }
    thread_local Eigen::FFT<double> fft;
    std::vector<Complex> e(m);
    fft.fwd(e, w);
    double level = 0.0;
    for (std::size_t k = 0; k < n_inc; ++k) {
      level += e[k].real();
      out[k] = level;
    }
  } else {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(n_inc));
    for (std::size_t k = 0; k < n_inc; ++k) {
      xi(static_cast<Eigen::Index>(k)) = normal(engine);
    }
    const Eigen::VectorXd b = sampler.chol * xi;
    for (std::size_t k = 0; k < n_inc; ++k) {
      out[k] = b(static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

}  // namespace

std::mt19937_64 RngStream::make_engine() const {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream_id),
      static_cast<std::uint32_t>(stream_id >> 32),
  };
  return std::mt19937_64(seq);
}

RngStream stream_for(std::uint64_t master_seed, int ell, int m, Family family,
                     std::uint64_t replicate, Stage stage) {
  if (ell < 0 || ell > 1023 || std::abs(m) > ell) {
    throw DomainError("stream_for: mode index out of packing range");
  }
  if (replicate >= (1ull << 24)) {
    throw DomainError("stream_for: replicate index out of packing range");
  }
  std::uint64_t id = static_cast<std::uint64_t>(stage);
  id = (id << 1) | static_cast<std::uint64_t>(family);
  id = (id << 11) | static_cast<std::uint64_t>(m + ell);
  id = (id << 10) | static_cast<std::uint64_t>(ell);
  id = (id << 24) | replicate;
  return RngStream{master_seed, id};
}

double fbm_covariance(double t, double s, double hurst, double sigma2) {
  const double h2 = 2.0 * hurst;
  return 0.5 * sigma2 *
         (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

std::vector<double> uniform_mesh(double t, std::size_t n) {
  if (!(t > 0.0) || n == 0) throw DomainError("uniform_mesh: bad arguments");
  std::vector<double> times(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    times[k] = t * static_cast<double>(k) / static_cast<double>(n);
  }
  return times;
}

std::vector<double> graded_mesh(double t, std::size_t n, double beta) {
  if (!(t > 0.0) || n == 0 || !(beta > 0.0) || beta > 1.0) {
    throw DomainError("graded_mesh: bad arguments");
  }
  if (beta == 1.0) return uniform_mesh(t, n);
  std::vector<double> times(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    times[k] = t * std::pow(static_cast<double>(k) / static_cast<double>(n),
                            1.0 / beta);
  }
  times[n] = t;
  return times;
}

FbmPath sample_real_fbm(double hurst, double sigma2,
                        const std::vector<double>& times,
                        const RngStream& stream) {
  validate_fbm_params(hurst, sigma2);
  validate_times(times);
  auto sampler = sampler_for(hurst, times);
  FbmPath path;
  path.hurst = hurst;
  path.sigma2 = sigma2;
  path.times = times;
  path.values.assign(times.size(), 0.0);
  auto engine = stream.make_engine();
  const double sigma = std::sqrt(sigma2);
  const auto unit = draw_unit_path(*sampler, engine);
  for (std::size_t k = 0; k < unit.size(); ++k) {
    path.values[k + 1] = sigma * unit[k];
  }
  return path;
}

ComplexFbmPath sample_complex_fbm(double hurst, double sigma2_total,
                                  const std::vector<double>& times,
                                  const RngStream& stream) {
  validate_fbm_params(hurst, sigma2_total);
  validate_times(times);
  auto sampler = sampler_for(hurst, times);
  ComplexFbmPath path;
  path.hurst = hurst;
  path.sigma2 = sigma2_total;
  path.times = times;
  path.values.assign(times.size(), Complex(0.0, 0.0));
  auto engine = stream.make_engine();
  const double sigma = std::sqrt(0.5 * sigma2_total);
  const auto re = draw_unit_path(*sampler, engine);
  const auto im = draw_unit_path(*sampler, engine);
  for (std::size_t k = 0; k < re.size(); ++k) {
    path.values[k + 1] = Complex(sigma * re[k], sigma * im[k]);
  }
  return path;
}

namespace {

template <typename Scalar>
Scalar rs_integral_impl(const std::vector<double>& g,
                        const std::vector<double>& times,
                        const std::vector<Scalar>& values) {
  const std::size_t n = times.size();
  if (g.size() + 1 != n) {
    throw DomainError("rs_integral: need one kernel value per left node");
  }
  for (const double v : g) {
    if (!std::isfinite(v)) {
      throw DomainError("rs_integral: kernel not finite at a node");
    }
  }
  // summation by parts; exact telescoping for constant kernels
  Scalar acc = g[n - 2] * values[n - 1];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    acc -= (g[j] - g[j - 1]) * values[j];
  }
  return acc;
}

std::vector<double> tabulate(const std::function<double(double)>& g,
                             const std::vector<double>& times) {
  std::vector<double> table(times.size() - 1);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) table[k] = g(times[k]);
  return table;
}

}  // namespace

double rs_integral(const std::vector<double>& g, const FbmPath& path) {
  return rs_integral_impl(g, path.times, path.values);
}

std::complex<double> rs_integral(const std::vector<double>& g,
                                 const ComplexFbmPath& path) {
  return rs_integral_impl(g, path.times, path.values);
}

double rs_integral(const std::function<double(double)>& g,
                   const FbmPath& path) {
  return rs_integral_impl(tabulate(g, path.times), path.times, path.values);
}

std::complex<double> rs_integral(const std::function<double(double)>& g,
                                 const ComplexFbmPath& path) {
  return rs_integral_impl(tabulate(g, path.times), path.times, path.values);
}

double integral_variance(const std::function<double(double)>& g, double t1,
                         double t2, double hurst) {
  if (!(hurst >= 0.5) || hurst >= 1.0) {
    throw DomainError("integral_variance: Hurst index must lie in [1/2, 1)");
  }
  if (!(t2 >= t1) || t1 < 0.0) {
    throw DomainError("integral_variance: bad interval");
  }
  if (t2 == t1) return 0.0;

  static thread_local boost::math::quadrature::tanh_sinh<double> quad(12);
  constexpr double kTol = 1e-9;

  try {
    if (hurst == 0.5) {
      double err = 0.0, l1 = 0.0;
      const double v = quad.integrate([&](double u) { return g(u) * g(u); },
                                      t1, t2, kTol, &err, &l1);
      if (!(std::isfinite(v)) || err > 1e-6 * std::max(std::fabs(v), 1e-300)) {
        throw AccuracyError("integral_variance: quadrature did not converge");
      }
      return v;
    }
    const double p = 2.0 * hurst - 1.0;
    auto outer = [&](double u) {
      const double wmax = std::pow(u - t1, p);
      if (!(wmax > 0.0)) return 0.0;
      double ierr = 0.0, il1 = 0.0;
      const double inner = quad.integrate(
          [&](double w) { return g(u - std::pow(w, 1.0 / p)); }, 0.0, wmax,
          kTol, &ierr, &il1);
      return g(u) * inner;
    };
    double err = 0.0, l1 = 0.0;
    const double v =
        2.0 * hurst * quad.integrate(outer, t1, t2, kTol, &err, &l1);
    if (!std::isfinite(v) ||
        err > 1e-6 * std::max(l1, 1e-300)) {
      throw AccuracyError(
          "integral_variance: quadrature did not converge on the diagonal");
    }
    return v;
  } catch (const std::exception& e) {
    throw AccuracyError(std::string("integral_variance: ") + e.what());
  }
}

}  // namespace tanfield::stochastic
