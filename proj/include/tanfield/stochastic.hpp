#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace tanfield::stochastic {

// Named, reproducible random stream. Distinct stream ids give independent
// engines; identical (master_seed, stream_id) reproduce identical draws no
// matter what other streams are consumed concurrently.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 make_engine() const;
};

enum class Family { div_free = 0, curl_free = 1 };
enum class Stage { noise = 0, initial = 1 };

// Collision-free packing of the mode/replicate identity into a stream id.
// Requires ell <= 1023 and replicate < 2^24.
RngStream stream_for(std::uint64_t master_seed, int ell, int m, Family family,
                     std::uint64_t replicate, Stage stage);

// Discretely sampled real fractional Brownian motion, values[0] = 0.
struct FbmPath {
  double hurst = 0.5;
  double sigma2 = 1.0;  // variance at t = 1
  std::vector<double> times;
  std::vector<double> values;
};

struct ComplexFbmPath {
  double hurst = 0.5;
  double sigma2 = 1.0;  // E|B(1)|^2, split evenly between the components
  std::vector<double> times;
  std::vector<std::complex<double>> values;
};

// Exact covariance R(t,s) = sigma2/2 (t^{2H} + s^{2H} - |t-s|^{2H}).
double fbm_covariance(double t, double s, double hurst, double sigma2);

// Mesh helpers. graded_mesh concentrates nodes near 0 as s_k = t (k/n)^{1/beta}
// so that the measure s^{beta-1} ds is uniform across panels; n intervals,
// n+1 points. beta = 1 reduces to the uniform mesh.
std::vector<double> uniform_mesh(double t, std::size_t n);
std::vector<double> graded_mesh(double t, std::size_t n, double beta);

// Exact-law samplers. Uniform grids use circulant embedding of the increment
// process (O(n log n)); non-uniform grids fall back to a cached Cholesky
// factorization of the full covariance. H in [1/2, 1), sigma2 > 0, times
// strictly increasing starting at 0.
FbmPath sample_real_fbm(double hurst, double sigma2,
                        const std::vector<double>& times,
                        const RngStream& stream);

// B = B1 + i B2 with independent components of variance sigma2_total/2 each,
// so that E|B(1)|^2 = sigma2_total.
ComplexFbmPath sample_complex_fbm(double hurst, double sigma2_total,
                                  const std::vector<double>& times,
                                  const RngStream& stream);

// Left-point Riemann-Stieltjes sum of a deterministic kernel against the
// path, evaluated by summation by parts so that g == 1 returns the path
// endpoint bit-identically. Kernel values must be finite at the evaluation
// nodes times[0..n-2].
double rs_integral(const std::function<double(double)>& g, const FbmPath& path);
std::complex<double> rs_integral(const std::function<double(double)>& g,
                                 const ComplexFbmPath& path);

// Tabulated-kernel variants for hot loops: g[k] = kernel(times[k]).
double rs_integral(const std::vector<double>& g, const FbmPath& path);
std::complex<double> rs_integral(const std::vector<double>& g,
                                 const ComplexFbmPath& path);

// Variance of int_{t1}^{t2} g dB^H for a unit-variance real fBm:
//   H = 1/2:  int g^2 du              (Ito isometry; the printed formula
//                                      degenerates to 0 * infinity there)
//   H > 1/2:  H(2H-1) int int g(u) g(v) |u-v|^{2H-2} du dv,
// computed by nested adaptive quadrature with the diagonal singularity
// absorbed by substitution. Multiply by the fBm variance externally.
double integral_variance(const std::function<double(double)>& g, double t1,
                         double t2, double hurst);

}  // namespace tanfield::stochastic
