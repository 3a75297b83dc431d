#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace fthss {

using cplx = std::complex<double>;

namespace quad {

/// erfc-tapered window: 1 on |t| < alpha H, half-erfc taper on alpha H <= |t| <= H,
/// zero beyond. Defaults reach below 1.1e-16 at |t| = H.
double window_value(double t, double H, double alpha = 0.5, double rho = 5.805);

/// Partition of unity with centers s_k = 3(k-1)H/2, k = 1..K, covering [0, t_inc].
struct WindowPartition {
  double H = 10.0;
  double alpha = 0.5;
  double rho = 5.805;
  double t_inc = 0.0;
  int K = 1;

  static WindowPartition for_duration(double t_inc, double H = 10.0, double alpha = 0.5,
                                      double rho = 5.805);
  double center(int k) const { return 1.5 * H * (k - 1); }  // 1-based index
  double value(int k, double t) const { return window_value(t - center(k), H, alpha, rho); }
  double sum(double t) const;
};

/// Composite Gauss-Legendre transform of a smooth signal segment:
/// integral_{t0}^{t1} a(t) e^{i w t} dt, panel count scaled to the phase rate.
/// Valid for complex w (used to continue spectra into the lower half plane).
cplx signal_spectrum(const std::function<cplx(double)>& a, double t0, double t1, cplx w,
                     double rate_hint = 0.0);

/// A_k^slow(w) = integral_{-H}^{H} w(t) a(t + s_k) e^{iwt} dt on a frequency grid.
struct WindowedSpectrum {
  int k = 1;
  std::vector<double> grid;
  std::vector<cplx> samples;
  double tail_bound = 0.0;  // max endpoint magnitude on the grid
};
WindowedSpectrum windowed_spectrum(const std::function<cplx(double)>& a, int k,
                                   const WindowPartition& part, const std::vector<double>& grid,
                                   double rate_hint = 0.0);

/// Chebyshev oscillatory moments M_n(s) = integral_{-1}^{1} T_n(x) e^{-isx} dx,
/// n = 0..nmax. Gauss-Legendre below the |s| ~ degree crossover, forward
/// recurrence (stable there) above; accuracy uniform in s.
std::vector<cplx> chebyshev_moments(double s, int nmax);

/// O(1)-in-t Fourier quadrature over a band from equispaced samples:
/// recenter, subtract a two-sided endpoint polynomial (integrated exactly via
/// Chebyshev moments), periodize the remainder with 12.5% zero padding, and
/// sum the resulting sinc series. Construction is O(M^2), eval O(M) per t.
class OscillatoryRule {
 public:
  struct Options {
    bool periodic = false;        // skip endpoint handling, period = band width
    double endpoint_tol = 1e-2;   // refuse larger relative endpoint magnitudes
    int smooth_order = 4;         // endpoint derivatives matched per side
    double pad_fraction = 0.125;
  };

  OscillatoryRule(const std::vector<cplx>& samples, double a, double b, Options opt);
  OscillatoryRule(const std::vector<cplx>& samples, double a, double b)
      : OscillatoryRule(samples, a, b, Options()) {}

  /// integral_a^b F(w) e^{-iwt} dw
  cplx eval(double t) const;
  int modes() const { return static_cast<int>(coef_.size()); }

 private:
  double delta_ = 0.0, W_ = 0.0, P_ = 0.0, omega_left_ = 0.0;
  std::vector<cplx> coef_;  // c_m, m = -M/2 .. M/2-1 (index m + M/2)
  std::vector<cplx> cheb_;  // endpoint-polynomial Chebyshev coefficients
};

/// Convenience wrapper for a single time.
cplx oscillatory_integral(const std::vector<cplx>& samples, double a, double b, double t,
                          bool periodic = false);

/// Modified Filon-Clenshaw-Curtis rule for integral_0^{w_c} F(w) e^{-iwt} dw
/// with F smooth on (0, w_c] up to a log singularity at 0: dyadic mesh graded
/// toward 0, first-kind Chebyshev interpolation per subinterval (the rule
/// never evaluates F at 0), exact oscillatory moments.
cplx fcc_log_integral(const std::function<cplx(double)>& f, double w_c, double t, int m_i = 8,
                      int q = 8);

/// Band inverse transform of per-frequency samples: (1/2pi) integral_I U e^{-iwt} dw.
/// If 0 lies inside I the caller must supply `center` for the [-w_c, w_c] band
/// (log branch point at w = 0); the band edges are snapped to grid points.
std::vector<cplx> inverse_transform(const std::vector<cplx>& u_samples,
                                    const std::vector<double>& grid,
                                    const std::vector<double>& t_grid, double w_c = 1.0,
                                    const std::function<cplx(double)>* center = nullptr,
                                    int fcc_m_i = 8, int fcc_q = 8);

} // namespace quad
} // namespace fthss
