#include "fthss/mie.hpp"

#include <cmath>
#include <stdexcept>

#include "fthss/special_functions.hpp"

namespace fthss {

MieReference::MieReference(double radius, const IncidentField& inc, double c, double series_tol)
    : a_(radius), c_(c), series_tol_(series_tol), inc_(inc) {
  if (radius <= 0.0) throw std::invalid_argument("MieReference: radius must be positive");
  if (inc.w1 <= 0.0)
    throw std::invalid_argument("MieReference: band must stay on the positive axis");
}

cplx MieReference::frequency_field(double omega, Vec2 r) const {
  const double kappa = omega / c_;
  const double rho = r.norm();
  if (rho < a_ * (1.0 - 1e-12))
    throw std::domain_error("MieReference: point inside the disk");
  const double th = std::atan2(r.y, r.x);
  const double thp = std::atan2(inc_.direction.y, inc_.direction.x);

  // the scattering coefficients J_m(ka)/H_m(ka) die superexponentially past
  // m ~ ka, so the boundary argument caps the order (not k rho)
  const int nmax =
      static_cast<int>(kappa * a_ + 24 + 12.0 * std::cbrt(kappa * a_ + 1.0));
  auto ja = bessel::jn_sequence(nmax, kappa * a_);
  auto ha = bessel::hn_sequence(nmax, kappa * a_);
  auto hr = bessel::hn_sequence(nmax, kappa * rho);

  cplx acc = 0.0;
  int quiet = 0;
  for (int m = 0; m <= nmax; ++m) {
    const double eps = (m == 0) ? 1.0 : 2.0;
    const cplx term = eps * std::pow(cplx(0, 1), double(m)) * (ja[static_cast<size_t>(m)] / ha[static_cast<size_t>(m)]) *
                      hr[static_cast<size_t>(m)] * std::cos(m * (th - thp));
    acc += term;
    quiet = (std::abs(term) < series_tol_ * std::max(1.0, std::abs(acc))) ? quiet + 1 : 0;
    if (m > kappa * a_ + 8 && quiet >= 3) break;
  }
  return acc;
}

std::vector<std::vector<cplx>> MieReference::time_field(const std::vector<Vec2>& points,
                                                        const std::vector<double>& t_grid,
                                                        double tol) const {
  const double w1 = inc_.w1, w2 = inc_.w2;
  double tmax = 1.0;
  for (double t : t_grid) tmax = std::max(tmax, std::abs(t));

  auto integrate = [&](int panels) {
    std::vector<std::vector<cplx>> u(points.size(),
                                     std::vector<cplx>(t_grid.size(), cplx(0, 0)));
    // 16-point Gauss-Legendre per panel, nodes shared across points and times
    static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    const double h = (w2 - w1) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = w1 + (p + 0.5) * h, s = 0.5 * h;
      for (int g = 0; g < 16; ++g) {
        const double x = (g < 8) ? -gx[7 - g % 8] : gx[g - 8];
        const double wgt = (g < 8) ? gw[7 - g % 8] : gw[g - 8];
        const double omega = mid + s * x;
        const cplx amp = inc_.bspec(omega) * (s * wgt);
        for (size_t q = 0; q < points.size(); ++q) {
          const cplx f = amp * frequency_field(omega, points[q]);
          for (size_t i = 0; i < t_grid.size(); ++i)
            u[q][i] += f * std::exp(cplx(0, -omega * t_grid[i]));
        }
      }
    }
    for (auto& row : u)
      for (auto& v : row) v /= 2.0 * M_PI;
    return u;
  };

  int panels = std::max(16, static_cast<int>(std::ceil((w2 - w1) * tmax / 4.0)));
  auto u = integrate(panels);
  for (int pass = 0; pass < 4; ++pass) {
    auto u2 = integrate(2 * panels);
    double diff = 0.0, scale = 1e-300;
    for (size_t q = 0; q < u.size(); ++q)
      for (size_t i = 0; i < u[q].size(); ++i) {
        diff = std::max(diff, std::abs(u[q][i] - u2[q][i]));
        scale = std::max(scale, std::abs(u2[q][i]));
      }
    u = std::move(u2);
    panels *= 2;
    if (diff < tol * std::max(1.0, scale)) break;
  }
  return u;
}

} // namespace fthss
