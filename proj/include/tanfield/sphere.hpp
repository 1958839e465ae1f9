#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tanfield::sphere {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

inline double eigenvalue(int ell) { return static_cast<double>(ell) * (ell + 1); }

// Point on the unit sphere, kept in both angular and Cartesian form.
struct SpherePoint {
  double theta = 0.0;  // colatitude in [0, pi]
  double phi = 0.0;    // longitude in [0, 2 pi)
  Vec3 cartesian = Vec3::UnitZ();

  static SpherePoint from_angles(double theta, double phi);
  static SpherePoint from_cartesian(const Vec3& x);
};

// Quadrature grid: Gauss-Legendre in cos(theta) times uniform longitudes.
// Exact for spherical polynomials up to `degree`.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  int degree = 0;
  std::vector<SpherePoint> nodes;   // node (i, j) at index i * n_phi + j
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Grid adequate for analysing tangent fields that are band-limited at L:
// L+2 Gauss nodes in colatitude, 2L+3 longitudes (degree = 2L+2).
SphereGrid make_grid(int L);

// Divergence-free / curl-free expansion coefficients of a tangent field,
// degrees 1..L (degree 0 carries no tangent harmonics).
struct SpectralCoefficients {
  int L = 0;
  std::vector<Complex> div_free;
  std::vector<Complex> curl_free;

  SpectralCoefficients() = default;
  explicit SpectralCoefficients(int L_);

  static std::size_t flat_size(int L) {
    return static_cast<std::size_t>(L) * (L + 2);
  }
  // flat index of (ell, m), ell in [1, L], m in [-ell, ell]
  std::size_t index(int ell, int m) const;

  Complex& div(int ell, int m) { return div_free[index(ell, m)]; }
  Complex& curl(int ell, int m) { return curl_free[index(ell, m)]; }
  const Complex& div(int ell, int m) const { return div_free[index(ell, m)]; }
  const Complex& curl(int ell, int m) const { return curl_free[index(ell, m)]; }

  // sum of |coefficient|^2 over both families (the Parseval square norm)
  double parseval_norm2() const;
};

// Orthonormal complex spherical harmonic Y_{ell m} with Condon-Shortley
// phase; eigenfunction of the Laplace-Beltrami operator with eigenvalue
// -ell(ell+1).
Complex scalar_sh(int ell, int m, const SpherePoint& p);

struct VshPair {
  CVec3 y;  // divergence-free: surface-curl of Y / sqrt(ell(ell+1))
  CVec3 z;  // curl-free: surface-gradient of Y / sqrt(ell(ell+1))
};

// Vector spherical harmonics at p, ell >= 1. Within sin(theta) < 1e-8 of a
// pole the spherical frame degenerates; the analytic limit is returned for
// ell = 1 and PoleError is thrown otherwise.
VshPair vsh(int ell, int m, const SpherePoint& p);

// Legendre tensor kernels of degree ell: {divergence-free, curl-free}.
// Equal to the addition-theorem sums  sum_m y_{ell m}(x) (x) y_{ell m}(y)
// and the z analogue; computed from P_ell derivatives and the projector
// algebra instead of the O(ell) sum over m.
std::pair<CMat3, CMat3> tensor_kernels(int ell, const SpherePoint& x,
                                       const SpherePoint& y);

// Forward transform of nodal values living on `grid` (one complex 3-vector
// per node, tangent at that node) to coefficients of degree <= L. Requires
// grid.degree >= 2L+2 so that products of band-L fields are integrated
// exactly; throws DomainError otherwise.
SpectralCoefficients analyze(const SphereGrid& grid,
                             const std::vector<CVec3>& values, int L);

// Evaluate the expansion at arbitrary points.
std::vector<CVec3> synthesize(const SpectralCoefficients& coeffs,
                              const std::vector<SpherePoint>& points);

namespace detail {

// Fully normalized associated Legendre values (Condon-Shortley) for
// ell = m..L at fixed order m >= 0 and x = cos(theta):
// Y_{ell m}(theta, phi) = plm[ell - m] * exp(i m phi).
void normalized_plm_row(int L, int m, double x, std::vector<double>& plm);

// d/dtheta of the same normalized functions; needs sin(theta) > 0.
void normalized_plm_dtheta_row(int L, int m, double x, double sin_theta,
                               const std::vector<double>& plm,
                               std::vector<double>& dplm);

inline constexpr double kPoleTolerance = 1e-8;

}  // namespace detail

}  // namespace tanfield::sphere
