#include "tanfield/sphere.hpp"

#include <cmath>

#include "tanfield/detail/gauss.hpp"
#include "tanfield/errors.hpp"
#include "tanfield/specfun.hpp"

namespace tanfield::sphere {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Vec3 unit_from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

// column basis of the local tangent frame
Vec3 e_theta(const SpherePoint& p) {
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  return {ct * std::cos(p.phi), ct * std::sin(p.phi), -st};
}

Vec3 e_phi(const SpherePoint& p) {
  return {-std::sin(p.phi), std::cos(p.phi), 0.0};
}

Eigen::Matrix3d cross_matrix(const Vec3& x) {
  Eigen::Matrix3d q;
  q << 0.0, -x.z(), x.y(),
       x.z(), 0.0, -x.x(),
       -x.y(), x.x(), 0.0;
  return q;
}

Eigen::Matrix3d tangent_projector(const Vec3& x) {
  return Eigen::Matrix3d::Identity() - x * x.transpose();
}

// gradient of the degree-1 solid harmonic whose restriction is Y_{1m}
CVec3 degree_one_gradient(int m) {
  const double c0 = std::sqrt(3.0 / (4.0 * M_PI));
  const double c1 = std::sqrt(3.0 / (8.0 * M_PI));
  const Complex i(0.0, 1.0);
  switch (m) {
    case 0:
      return CVec3(0.0, 0.0, c0);
    case 1:
      return CVec3(-c1, -c1 * i, 0.0);
    case -1:
      return CVec3(c1, -c1 * i, 0.0);
    default:
      throw DomainError("degree_one_gradient: |m| must be <= 1");
  }
}

}  // namespace

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  if (theta < 0.0 || theta > M_PI) {
    throw DomainError("SpherePoint: colatitude outside [0, pi]");
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return {theta, phi, unit_from_angles(theta, phi)};
}

SpherePoint SpherePoint::from_cartesian(const Vec3& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("SpherePoint: zero vector");
  const Vec3 u = x / r;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  double phi = std::atan2(u.y(), u.x());
  if (phi < 0.0) phi += kTwoPi;
  return {theta, phi, u};
}

SpectralCoefficients::SpectralCoefficients(int L_) : L(L_) {
  if (L < 1) throw DomainError("SpectralCoefficients: L must be >= 1");
  div_free.assign(flat_size(L), Complex(0.0, 0.0));
  curl_free.assign(flat_size(L), Complex(0.0, 0.0));
}

std::size_t SpectralCoefficients::index(int ell, int m) const {
  if (ell < 1 || ell > L || m < -ell || m > ell) {
    throw DomainError("SpectralCoefficients: index out of range");
  }
  return static_cast<std::size_t>(ell) * ell - 1 + (m + ell);
}

double SpectralCoefficients::parseval_norm2() const {
  double s = 0.0;
  for (const auto& c : div_free) s += std::norm(c);
  for (const auto& c : curl_free) s += std::norm(c);
  return s;
}

namespace detail {

void normalized_plm_row(int L, int m, double x, std::vector<double>& plm) {
  if (m < 0 || L < m) throw DomainError("normalized_plm_row: bad order");
  plm.assign(static_cast<std::size_t>(L - m + 1), 0.0);
  // P~_m^m with Condon-Shortley sign, fully normalized on the sphere
  double pmm = 1.0;
  if (m > 0) {
    const double omx2 = (1.0 - x) * (1.0 + x);
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= omx2 * fact / (fact + 1.0);
      fact += 2.0;
    }
  }
  pmm = std::sqrt((2.0 * m + 1.0) * pmm / (4.0 * M_PI));
  if (m & 1) pmm = -pmm;
  plm[0] = pmm;
  if (L == m) return;
  double pprev = pmm;
  double pcur = x * std::sqrt(2.0 * m + 3.0) * pmm;
  plm[1] = pcur;
  double oldfact = std::sqrt(2.0 * m + 3.0);
  for (int ell = m + 2; ell <= L; ++ell) {
    const double fact = std::sqrt(
        (4.0 * ell * ell - 1.0) /
        (static_cast<double>(ell) * ell - static_cast<double>(m) * m));
    const double pnext = (x * pcur - pprev / oldfact) * fact;
    plm[static_cast<std::size_t>(ell - m)] = pnext;
    oldfact = fact;
    pprev = pcur;
    pcur = pnext;
  }
}

void normalized_plm_dtheta_row(int L, int m, double x, double sin_theta,
                               const std::vector<double>& plm,
                               std::vector<double>& dplm) {
  dplm.assign(plm.size(), 0.0);
  for (int ell = m; ell <= L; ++ell) {
    const std::size_t k = static_cast<std::size_t>(ell - m);
    double lower = 0.0;
    if (ell > m) {
      const double c = std::sqrt((2.0 * ell + 1.0) *
                                 (static_cast<double>(ell) * ell -
                                  static_cast<double>(m) * m) /
                                 (2.0 * ell - 1.0));
      lower = c * plm[k - 1];
    }
    dplm[k] = (ell * x * plm[k] - lower) / sin_theta;
  }
}

}  // namespace detail

SphereGrid make_grid(int L) {
  if (L < 1) throw DomainError("make_grid: L must be >= 1");
  const int n_theta = L + 2;
  const int n_phi = 2 * L + 3;
  const auto rule = tanfield::detail::gauss_legendre(
      static_cast<std::size_t>(n_theta));

  SphereGrid grid;
  grid.n_theta = n_theta;
  grid.n_phi = n_phi;
  grid.degree = 2 * L + 2;
  grid.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  grid.weights.reserve(grid.nodes.capacity());
  const double wphi = kTwoPi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double theta = std::acos(x);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = wphi * j;
      grid.nodes.push_back(SpherePoint::from_angles(theta, phi));
      grid.weights.push_back(rule.weights[static_cast<std::size_t>(i)] * wphi);
    }
  }
  return grid;
}

Complex scalar_sh(int ell, int m, const SpherePoint& p) {
  if (ell < 0 || std::abs(m) > ell) {
    throw DomainError("scalar_sh: requires ell >= 0, |m| <= ell");
  }
  const int ma = std::abs(m);
  std::vector<double> plm;
  detail::normalized_plm_row(ell, ma, std::cos(p.theta), plm);
  double v = plm.back();
  if (m < 0 && (ma & 1)) v = -v;  // Y_{l,-m} = (-1)^m conj(Y_{l,m})
  return v * std::polar(1.0, m * p.phi);
}

VshPair vsh(int ell, int m, const SpherePoint& p) {
  if (ell < 1 || std::abs(m) > ell) {
    throw DomainError("vsh: requires ell >= 1, |m| <= ell");
  }
  const double st = std::sin(p.theta);
  const double rt_lambda = std::sqrt(eigenvalue(ell));
  if (st < detail::kPoleTolerance) {
    if (ell != 1) {
      throw PoleError("vsh: evaluation at a pole is defined only for ell=1");
    }
    // closed polynomial form, valid everywhere for degree 1
    const CVec3 g = degree_one_gradient(m);
    const CVec3 x = p.cartesian.cast<Complex>();
    const Complex radial = x.x() * g.x() + x.y() * g.y() + x.z() * g.z();
    const CVec3 z = (g - x * radial) / rt_lambda;
    VshPair out;
    out.z = z;
    out.y = x.cross(z);
    return out;
  }

  const int ma = std::abs(m);
  std::vector<double> plm, dplm;
  detail::normalized_plm_row(ell, ma, std::cos(p.theta), plm);
  detail::normalized_plm_dtheta_row(ell, ma, std::cos(p.theta), st, plm, dplm);
  double pv = plm.back();
  double dv = dplm.back();
  if (m < 0 && (ma & 1)) {
    pv = -pv;
    dv = -dv;
  }
  const Complex phase = std::polar(1.0, m * p.phi);
  const Complex im(0.0, static_cast<double>(m));
  const Complex dtheta = dv * phase;
  const Complex dphi_over_sin = im * pv * phase / st;

  const Vec3 et = e_theta(p);
  const Vec3 ep = e_phi(p);
  VshPair out;
  out.z = (et.cast<Complex>() * dtheta + ep.cast<Complex>() * dphi_over_sin) /
          rt_lambda;
  out.y = (ep.cast<Complex>() * dtheta - et.cast<Complex>() * dphi_over_sin) /
          rt_lambda;
  return out;
}

std::pair<CMat3, CMat3> tensor_kernels(int ell, const SpherePoint& x,
                                       const SpherePoint& y) {
  if (ell < 1) throw DomainError("tensor_kernels: requires ell >= 1");
  const double c = (2.0 * ell + 1.0) / (4.0 * M_PI * eigenvalue(ell));
  const double dot = x.cartesian.dot(y.cartesian);
  const auto [p, dp, ddp] = specfun::legendre_derivs(ell, dot);
  (void)p;
  const Eigen::Matrix3d mixed =
      ddp * (y.cartesian * x.cartesian.transpose()) +
      dp * Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d qx = cross_matrix(x.cartesian);
  const Eigen::Matrix3d qy = cross_matrix(y.cartesian);
  const Eigen::Matrix3d px = tangent_projector(x.cartesian);
  const Eigen::Matrix3d py = tangent_projector(y.cartesian);
  const Eigen::Matrix3d dlg = c * (qx * mixed * qy.transpose());
  const Eigen::Matrix3d clg = c * (px * mixed * py);
  return {dlg.cast<Complex>(), clg.cast<Complex>()};
}

SpectralCoefficients analyze(const SphereGrid& grid,
                             const std::vector<CVec3>& values, int L) {
  if (L < 1) throw DomainError("analyze: L must be >= 1");
  if (grid.degree < 2 * L + 2) {
    throw DomainError("analyze: grid cannot resolve band limit L");
  }
  if (values.size() != grid.size()) {
    throw DomainError("analyze: one value per grid node required");
  }

  const int n_theta = grid.n_theta;
  const int n_phi = grid.n_phi;
  const int n_m = 2 * L + 1;
  const double wphi = kTwoPi / n_phi;

  // longitude transform of the local frame components, per colatitude ring
  std::vector<Complex> g_theta(static_cast<std::size_t>(n_m) * n_theta);
  std::vector<Complex> g_phi(g_theta.size());
  auto gidx = [&](int m, int i) {
    return static_cast<std::size_t>(m + L) * n_theta + i;
  };
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const auto& p = grid.nodes[static_cast<std::size_t>(i) * n_phi + j];
      const CVec3& f = values[static_cast<std::size_t>(i) * n_phi + j];
      const Vec3 et = e_theta(p);
      const Vec3 ep = e_phi(p);
      const Complex ft = et.x() * f.x() + et.y() * f.y() + et.z() * f.z();
      const Complex fp = ep.x() * f.x() + ep.y() * f.y() + ep.z() * f.z();
      const Complex u = std::polar(1.0, -p.phi);
      Complex pw(wphi, 0.0);
      for (int m = 0; m <= L; ++m) {
        g_theta[gidx(m, i)] += ft * pw;
        g_phi[gidx(m, i)] += fp * pw;
        if (m > 0) {
          g_theta[gidx(-m, i)] += ft * std::conj(pw);
          g_phi[gidx(-m, i)] += fp * std::conj(pw);
        }
        pw *= u;
      }
    }
  }

  SpectralCoefficients coeffs(L);
  std::vector<double> plm, dplm;
  for (int m = -L; m <= L; ++m) {
    const int ma = std::abs(m);
    const int l0 = std::max(1, ma);
    for (int i = 0; i < n_theta; ++i) {
      const auto& p = grid.nodes[static_cast<std::size_t>(i) * n_phi];
      const double x = std::cos(p.theta);
      const double st = std::sin(p.theta);
      detail::normalized_plm_row(L, ma, x, plm);
      detail::normalized_plm_dtheta_row(L, ma, x, st, plm, dplm);
      const double wtheta = grid.weights[static_cast<std::size_t>(i) * n_phi] / wphi;
      const Complex gt = g_theta[gidx(m, i)] * wtheta;
      const Complex gp = g_phi[gidx(m, i)] * wtheta;
      for (int ell = l0; ell <= L; ++ell) {
        double pv = plm[static_cast<std::size_t>(ell - ma)];
        double dv = dplm[static_cast<std::size_t>(ell - ma)];
        if (m < 0 && (ma & 1)) {
          pv = -pv;
          dv = -dv;
        }
        const double rt_lambda = std::sqrt(eigenvalue(ell));
        // local profiles of y and z without the exp(i m phi) factor
        const Complex im(0.0, static_cast<double>(m));
        const Complex y_t = -im * pv / st / rt_lambda;
        const Complex y_p = Complex(dv / rt_lambda, 0.0);
        const Complex z_t = y_p;
        const Complex z_p = im * pv / st / rt_lambda;
        coeffs.div(ell, m) += gt * std::conj(y_t) + gp * std::conj(y_p);
        coeffs.curl(ell, m) += gt * std::conj(z_t) + gp * std::conj(z_p);
      }
    }
  }
  return coeffs;
}

std::vector<CVec3> synthesize(const SpectralCoefficients& coeffs,
                              const std::vector<SpherePoint>& points) {
  const int L = coeffs.L;
  std::vector<CVec3> out;
  out.reserve(points.size());
  std::vector<double> plm, dplm;
  for (const auto& p : points) {
    const double st = std::sin(p.theta);
    if (st < detail::kPoleTolerance) {
      // only the ell = 1 limit exists in the polar caps
      CVec3 acc = CVec3::Zero();
      for (int ell = 1; ell <= L; ++ell) {
        for (int m = -ell; m <= ell; ++m) {
          const Complex cd = coeffs.div(ell, m);
          const Complex cc = coeffs.curl(ell, m);
          if (cd == Complex(0.0, 0.0) && cc == Complex(0.0, 0.0)) continue;
          const auto pair = vsh(ell, m, p);  // throws PoleError for ell >= 2
          acc += cd * pair.y + cc * pair.z;
        }
      }
      out.push_back(acc);
      continue;
    }
    const double x = std::cos(p.theta);
    Complex f_t(0.0, 0.0), f_p(0.0, 0.0);
    for (int ma = 0; ma <= L; ++ma) {
      const int l0 = std::max(1, ma);
      detail::normalized_plm_row(L, ma, x, plm);
      detail::normalized_plm_dtheta_row(L, ma, x, st, plm, dplm);
      for (int sign = 0; sign < (ma == 0 ? 1 : 2); ++sign) {
        const int m = sign == 0 ? ma : -ma;
        const Complex phase = std::polar(1.0, m * p.phi);
        const Complex im(0.0, static_cast<double>(m));
        for (int ell = l0; ell <= L; ++ell) {
          double pv = plm[static_cast<std::size_t>(ell - ma)];
          double dv = dplm[static_cast<std::size_t>(ell - ma)];
          if (m < 0 && (ma & 1)) {
            pv = -pv;
            dv = -dv;
          }
          const double rt_lambda = std::sqrt(eigenvalue(ell));
          const Complex y_t = -im * pv / st / rt_lambda * phase;
          const Complex y_p = dv / rt_lambda * phase;
          const Complex z_t = y_p;
          const Complex z_p = im * pv / st / rt_lambda * phase;
          const Complex cd = coeffs.div(ell, m);
          const Complex cc = coeffs.curl(ell, m);
          f_t += cd * y_t + cc * z_t;
          f_p += cd * y_p + cc * z_p;
        }
      }
    }
    out.push_back(e_theta(p).cast<Complex>() * f_t +
                  e_phi(p).cast<Complex>() * f_p);
  }
  return out;
}

}  // namespace tanfield::sphere
