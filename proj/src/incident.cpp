#include "fthss/incident.hpp"

#include <cmath>
#include <stdexcept>

namespace fthss {

namespace {
double chirp_wave(double t) {
  const double g = 4.0 * t + 6.0 * std::cos(t / std::sqrt(12.0));
  return std::sin(g + g * g / 4000.0);
}
} // namespace

cplx IncidentField::bspec(cplx w) const {
  if (gaussian()) {
    const cplx d = w - omega0;
    const cplx shift = (delay == 0.0) ? cplx(1, 0) : std::exp(cplx(0, 1) * w * delay);
    return -std::exp(-d * d / sigma2) * shift;
  }
  auto a = [this](double t) { return amplitude(t); };
  return quad::signal_spectrum(a, chirp_s - chirp_h + delay, chirp_s + chirp_h + delay, w,
                               rate_hint);
}

cplx IncidentField::amplitude(double t) const {
  if (gaussian())
    throw std::logic_error("IncidentField::amplitude: gaussian profiles are spectrum-defined");
  // b = -u_inc with u_inc = -w(t - s; H) a(t): the signs cancel
  const double td = t - delay;
  return quad::window_value(td - chirp_s, chirp_h) * chirp_wave(td);
}

IncidentField make_gaussian_incidence(Vec2 p, double omega0, double sigma2, double band_lo,
                                      double band_hi) {
  if (std::abs(p.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("incidence: direction must be a unit vector");
  if (!(band_hi > band_lo)) throw std::invalid_argument("incidence: empty band");
  IncidentField f;
  f.profile = IncidentField::Profile::GaussianSpectrum;
  f.direction = p;
  f.omega0 = omega0;
  f.sigma2 = sigma2;
  f.w1 = band_lo;
  f.w2 = band_hi;
  f.tail_bound = std::max(std::abs(f.bspec(band_lo)), std::abs(f.bspec(band_hi)));
  f.t_inc = 0.0;
  f.rate_hint = std::abs(omega0) + 4.0 / std::sqrt(sigma2);
  return f;
}

IncidentField make_chirp_incidence(Vec2 p, double s, double h, double band_lo, double band_hi) {
  if (std::abs(p.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("incidence: direction must be a unit vector");
  if (!(band_hi > band_lo)) throw std::invalid_argument("incidence: empty band");
  IncidentField f;
  f.profile = IncidentField::Profile::WindowedChirp;
  f.direction = p;
  f.chirp_s = s;
  f.chirp_h = h;
  f.w1 = band_lo;
  f.w2 = band_hi;
  f.t_inc = s + h;
  // |d/dt (g + g^2/4000)| <= |g'| (1 + |g|/2000), g' = 4 - sqrt(3) sin(.)
  const double gmax = 4.0 * f.t_inc + 6.0;
  f.rate_hint = (4.0 + std::sqrt(3.0)) * (1.0 + gmax / 2000.0) + 1.0;
  f.tail_bound = std::max(std::abs(f.bspec(band_lo)), std::abs(f.bspec(band_hi)));
  return f;
}

} // namespace fthss
