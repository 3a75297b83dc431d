#pragma once

#include "fthss/geometry.hpp"
#include "fthss/quadrature.hpp"

namespace fthss {

/// Incident plane-pulse field u_inc(r,t) = a_inc(t - p.r/c). The solver works
/// with the boundary-data spectrum bspec = -FT[a_inc], so that the scattered
/// field is (1/2pi) int bspec(w) U_p(r,w) e^{-iwt} dw with U_p the unit
/// plane-wave-trace Helmholtz solution.
struct IncidentField {
  enum class Profile { GaussianSpectrum, WindowedChirp };
  Profile profile = Profile::GaussianSpectrum;
  Vec2 direction{0.0, 1.0};
  // gaussian-spectrum parameters: A(w) = e^{-(w-w0)^2/s2}
  double omega0 = 0.0, sigma2 = 1.0;
  // windowed chirp: a(t) = -w(t - s; H) sin(g + g^2/4000), g = 4t + 6 cos(t/sqrt(12))
  double chirp_s = 40.0, chirp_h = 30.0;
  double w1 = 0.0, w2 = 0.0;   // band I
  double delay = 0.0;          // time shift of the incident profile
  double tail_bound = 0.0;     // eps^I: |bspec| at the band edges
  double t_inc = 0.0;          // trace duration (0 for the analytic gaussian)
  double rate_hint = 0.0;      // instantaneous-frequency bound of the time signal

  bool gaussian() const { return profile == Profile::GaussianSpectrum; }

  /// boundary-data spectrum; analytic continuation below the real axis
  cplx bspec(cplx w) const;

  /// time-domain boundary amplitude b(t) at p.r = 0 (chirp only)
  cplx amplitude(double t) const;
};

IncidentField make_gaussian_incidence(Vec2 p, double omega0, double sigma2, double band_lo,
                                      double band_hi);
IncidentField make_chirp_incidence(Vec2 p, double s, double h, double band_lo, double band_hi);

} // namespace fthss
