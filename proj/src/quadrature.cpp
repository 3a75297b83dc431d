#include "fthss/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fthss::quad {

namespace {

// ---- Gauss-Legendre nodes (Newton on the recurrence), cached by order ------

struct GlRule {
  std::vector<double> x, w;
};

GlRule make_gl(int n) {
  GlRule r;
  r.x.resize(static_cast<size_t>(n));
  r.w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[static_cast<size_t>(i)] = x;
    r.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GlRule& gl_rule(int n) {
  static std::vector<GlRule> cache(257);
  n = std::max(1, std::min(n, 256));
  auto& slot = cache[static_cast<size_t>(n)];
  if (slot.x.empty()) slot = make_gl(n);
  return slot;
}

// first-kind Chebyshev interpolation coefficients from node values
std::vector<cplx> cheb_coeffs(const std::vector<cplx>& vals) {
  const int q = static_cast<int>(vals.size());
  std::vector<cplx> a(static_cast<size_t>(q));
  for (int n = 0; n < q; ++n) {
    cplx acc = 0.0;
    for (int k = 0; k < q; ++k)
      acc += vals[static_cast<size_t>(k)] * std::cos(n * M_PI * (2.0 * k + 1.0) / (2.0 * q));
    a[static_cast<size_t>(n)] = acc * ((n == 0 ? 1.0 : 2.0) / q);
  }
  return a;
}

} // namespace

double window_value(double t, double H, double alpha, double rho) {
  if (H <= 0.0 || alpha <= 0.0 || alpha >= 1.0 || rho <= 0.0)
    throw std::invalid_argument("window_value: need H > 0, 0 < alpha < 1, rho > 0");
  const double u = std::abs(t);
  if (u < alpha * H) return 1.0;
  if (u > H) return 0.0;
  return 0.5 * std::erfc(-rho + 2.0 * rho * (u - alpha * H) / ((1.0 - alpha) * H));
}

WindowPartition WindowPartition::for_duration(double t_inc, double H, double alpha, double rho) {
  WindowPartition p;
  p.H = H;
  p.alpha = alpha;
  p.rho = rho;
  p.t_inc = t_inc;
  // the partition sums to one up to s_K + alpha H
  int k = 1;
  while (p.center(k) + alpha * H < t_inc) ++k;
  p.K = k;
  return p;
}

double WindowPartition::sum(double t) const {
  double acc = 0.0;
  for (int k = 1; k <= K; ++k) acc += value(k, t);
  return acc;
}

cplx signal_spectrum(const std::function<cplx(double)>& a, double t0, double t1, cplx w,
                     double rate_hint) {
  if (t1 <= t0) return 0.0;
  const double rate = std::abs(w) + rate_hint;
  const int panels = std::max(8, static_cast<int>(std::ceil(rate * (t1 - t0) / 4.0)));
  const auto& gl = gl_rule(16);
  cplx acc = 0.0;
  const double h = (t1 - t0) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = t0 + (p + 0.5) * h, s = 0.5 * h;
    cplx panel = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) {
      const double t = c + s * gl.x[i];
      panel += gl.w[i] * a(t) * std::exp(cplx(0, 1) * w * t);
    }
    acc += panel * s;
  }
  return acc;
}

WindowedSpectrum windowed_spectrum(const std::function<cplx(double)>& a, int k,
                                   const WindowPartition& part, const std::vector<double>& grid,
                                   double rate_hint) {
  WindowedSpectrum ws;
  ws.k = k;
  ws.grid = grid;
  ws.samples.resize(grid.size());
  const double sk = part.center(k);
  auto integrand = [&](double t) -> cplx {
    return window_value(t, part.H, part.alpha, part.rho) * a(t + sk);
  };
  for (size_t j = 0; j < grid.size(); ++j)
    ws.samples[j] = signal_spectrum(integrand, -part.H, part.H, grid[j], rate_hint);
  if (!grid.empty())
    ws.tail_bound = std::max(std::abs(ws.samples.front()), std::abs(ws.samples.back()));
  return ws;
}

std::vector<cplx> chebyshev_moments(double s, int nmax) {
  std::vector<cplx> m(static_cast<size_t>(nmax) + 1, cplx(0, 0));
  const double as = std::abs(s);
  const double crossover = std::max(40.0, 1.5 * nmax);
  if (as <= crossover) {
    // pre-asymptotic: Gauss-Legendre resolves polynomial times phase
    const int nodes = std::min(256, static_cast<int>(std::ceil(0.75 * as + 0.5 * nmax + 16)));
    const auto& gl = gl_rule(nodes);
    std::vector<double> tn(static_cast<size_t>(nmax) + 1);
    for (size_t i = 0; i < gl.x.size(); ++i) {
      const double x = gl.x[i];
      const cplx e = std::exp(cplx(0, -s * x)) * gl.w[i];
      tn[0] = 1.0;
      if (nmax >= 1) tn[1] = x;
      for (int n = 2; n <= nmax; ++n)
        tn[static_cast<size_t>(n)] = 2.0 * x * tn[static_cast<size_t>(n) - 1] - tn[static_cast<size_t>(n) - 2];
      for (int n = 0; n <= nmax; ++n) m[static_cast<size_t>(n)] += tn[static_cast<size_t>(n)] * e;
    }
    return m;
  }
  // |s| well above the degree: the forward recurrence is stable
  const double sn = std::sin(s), cs = std::cos(s);
  m[0] = 2.0 * sn / s;
  if (nmax >= 1) m[1] = cplx(0, 2.0) * (cs / s - sn / (s * s));
  if (nmax >= 2) m[2] = 2.0 * sn / s - 8.0 * sn / (s * s * s) + 8.0 * cs / (s * s);
  for (int n = 2; n < nmax; ++n) {
    // integration by parts of T_n = ((T_{n+1}/(n+1) - T_{n-1}/(n-1))/2)'
    const double cn = -2.0 / (double(n) * n - 1.0);
    const cplx bn = (n % 2 == 0) ? cplx(2.0 * cs * cn, 0.0) : cplx(0.0, -2.0 * sn * cn);
    m[static_cast<size_t>(n) + 1] =
        double(n + 1) * (cplx(0, -2.0 / s) * (m[static_cast<size_t>(n)] - 0.5 * bn) +
                         m[static_cast<size_t>(n) - 1] / double(n - 1));
  }
  return m;
}

OscillatoryRule::OscillatoryRule(const std::vector<cplx>& samples, double a, double b, Options opt) {
  const int J = static_cast<int>(samples.size());
  if (J < 8) throw std::invalid_argument("OscillatoryRule: need at least 8 samples");
  if (!(b > a)) throw std::invalid_argument("OscillatoryRule: empty band");
  delta_ = 0.5 * (a + b);
  W_ = 0.5 * (b - a);
  const double dw = (b - a) / (J - 1);

  double fmax = 0.0;
  for (const cplx& v : samples) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) fmax = 1.0;

  std::vector<cplx> resid = samples;

  if (!opt.periodic) {
    const double edge = std::max(std::abs(samples.front()), std::abs(samples.back()));
    if (edge > opt.endpoint_tol * fmax)
      throw std::invalid_argument(
          "OscillatoryRule: samples do not vanish at the band edges; widen the band or flag the "
          "data periodic");

    const int p = std::max(1, std::min(opt.smooth_order, (J - 2) / 4));
    const int npts = std::min(J, 2 * p + 6);

    // value + p derivatives (w.r.t. x = (w - delta)/W) at each end, from a
    // one-sided Newton interpolant through the outermost npts samples
    auto end_fit = [&](bool left) {
      std::vector<cplx> dd(static_cast<size_t>(npts));
      std::vector<double> xs(static_cast<size_t>(npts));
      for (int i = 0; i < npts; ++i) {
        const int idx = left ? i : J - 1 - i;
        dd[static_cast<size_t>(i)] = samples[static_cast<size_t>(idx)];
        xs[static_cast<size_t>(i)] = (a + idx * dw - delta_) / W_;
      }
      for (int k = 1; k < npts; ++k)
        for (int i = npts - 1; i >= k; --i)
          dd[static_cast<size_t>(i)] =
              (dd[static_cast<size_t>(i)] - dd[static_cast<size_t>(i) - 1]) /
              (xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(i) - k]);
      // derivatives at the endpoint by Horner with derivative carry
      const double x0 = left ? -1.0 : 1.0;
      std::vector<cplx> d(static_cast<size_t>(p) + 1, 0.0);
      d[0] = dd[static_cast<size_t>(npts) - 1];
      for (int i = npts - 2; i >= 0; --i) {
        for (int k = p; k >= 1; --k)
          d[static_cast<size_t>(k)] = d[static_cast<size_t>(k)] * (x0 - xs[static_cast<size_t>(i)]) +
                                      d[static_cast<size_t>(k) - 1];
        d[0] = d[0] * (x0 - xs[static_cast<size_t>(i)]) + dd[static_cast<size_t>(i)];
      }
      double fact = 1.0;
      std::vector<cplx> derivs(static_cast<size_t>(p) + 1);
      for (int k = 0; k <= p; ++k) {
        derivs[static_cast<size_t>(k)] = d[static_cast<size_t>(k)] * fact;
        fact *= (k + 1.0);
      }
      return derivs;
    };
    const auto dl = end_fit(true), dr = end_fit(false);

    // two-point Hermite interpolant via divided differences with repeated nodes
    const int hn = 2 * (p + 1);
    std::vector<double> nodes(static_cast<size_t>(hn));
    for (int i = 0; i <= p; ++i) {
      nodes[static_cast<size_t>(i)] = -1.0;
      nodes[static_cast<size_t>(p + 1 + i)] = 1.0;
    }
    std::vector<double> inv_fact(static_cast<size_t>(p) + 1);
    double fact = 1.0;
    for (int k = 0; k <= p; ++k) {
      inv_fact[static_cast<size_t>(k)] = 1.0 / fact;
      fact *= (k + 1.0);
    }
    std::vector<cplx> newton(static_cast<size_t>(hn));
    std::vector<cplx> col(static_cast<size_t>(hn));
    for (int i = 0; i < hn; ++i) col[static_cast<size_t>(i)] = (i <= p) ? dl[0] : dr[0];
    newton[0] = col[0];
    for (int k = 1; k < hn; ++k) {
      std::vector<cplx> next(static_cast<size_t>(hn - k));
      for (int i = 0; i + k < hn; ++i) {
        const double xa = nodes[static_cast<size_t>(i)], xb = nodes[static_cast<size_t>(i + k)];
        if (xa == xb) {
          const auto& dv = (xa < 0) ? dl : dr;
          next[static_cast<size_t>(i)] = dv[static_cast<size_t>(k)] * inv_fact[static_cast<size_t>(k)];
        } else {
          next[static_cast<size_t>(i)] = (col[static_cast<size_t>(i + 1)] - col[static_cast<size_t>(i)]) / (xb - xa);
        }
      }
      col = next;
      newton[static_cast<size_t>(k)] = col[0];
    }
    auto hermite_eval = [&](double x) {
      cplx acc = newton[static_cast<size_t>(hn - 1)];
      for (int i = hn - 2; i >= 0; --i)
        acc = acc * (x - nodes[static_cast<size_t>(i)]) + newton[static_cast<size_t>(i)];
      return acc;
    };

    // Chebyshev coefficients of the endpoint polynomial (exact at this size)
    const int qn = hn + 2;
    std::vector<cplx> pv(static_cast<size_t>(qn));
    for (int kq = 0; kq < qn; ++kq)
      pv[static_cast<size_t>(kq)] = hermite_eval(std::cos(M_PI * (2.0 * kq + 1.0) / (2.0 * qn)));
    cheb_ = cheb_coeffs(pv);

    for (int i = 0; i < J; ++i)
      resid[static_cast<size_t>(i)] -= hermite_eval((a + i * dw - delta_) / W_);
  }

  // periodized remainder with zero padding (periodic data drops its duplicate endpoint)
  const int npad = opt.periodic ? 0 : std::max(2, static_cast<int>(std::ceil(0.5 * opt.pad_fraction * J)));
  int M = opt.periodic ? J - 1 : J + 2 * npad;
  if (!opt.periodic && M % 2 != 0) ++M;  // extra zero-pad slot; a periodic run must keep P = (J-1)dw
  P_ = M * dw;
  omega_left_ = (a - delta_) - npad * dw;

  std::vector<cplx> padded(static_cast<size_t>(M), cplx(0, 0));
  const int count = opt.periodic ? J - 1 : J;
  for (int i = 0; i < count; ++i) padded[static_cast<size_t>(i + npad)] = resid[static_cast<size_t>(i)];

  // c_m = e^{-2pi i m w_L/P} (1/M) sum_q G_q e^{-2pi i m q/M}
  coef_.assign(static_cast<size_t>(M), cplx(0, 0));
  for (int mi = 0; mi < M; ++mi) {
    const int m = mi - M / 2;
    cplx acc = 0.0;
    for (int qd = 0; qd < M; ++qd)
      acc += padded[static_cast<size_t>(qd)] * std::exp(cplx(0, -2.0 * M_PI * m * qd / double(M)));
    coef_[static_cast<size_t>(mi)] =
        acc / double(M) * std::exp(cplx(0, -2.0 * M_PI * m * omega_left_ / P_));
  }
}

cplx OscillatoryRule::eval(double t) const {
  const int M = static_cast<int>(coef_.size());
  const double alpha = P_ / (2.0 * M_PI);
  const double beta = 2.0 * W_ / P_;
  cplx acc = 0.0;
  for (int mi = 0; mi < M; ++mi) {
    const int m = mi - M / 2;
    const double x = alpha * t - m;
    double factor;
    if (std::abs(x) < 1e-6) {
      const double y = M_PI * beta * x;
      factor = 2.0 * W_ * (1.0 - y * y / 6.0);
    } else {
      factor = P_ / (M_PI * x) * std::sin(M_PI * beta * x);
    }
    acc += coef_[static_cast<size_t>(mi)] * factor;
  }
  if (!cheb_.empty()) {
    const auto mom = chebyshev_moments(W_ * t, static_cast<int>(cheb_.size()) - 1);
    cplx poly = 0.0;
    for (size_t n = 0; n < cheb_.size(); ++n) poly += cheb_[n] * mom[n];
    acc += W_ * poly;
  }
  return std::exp(cplx(0, -delta_ * t)) * acc;
}

cplx oscillatory_integral(const std::vector<cplx>& samples, double a, double b, double t,
                          bool periodic) {
  OscillatoryRule::Options opt;
  opt.periodic = periodic;
  return OscillatoryRule(samples, a, b, opt).eval(t);
}

cplx fcc_log_integral(const std::function<cplx(double)>& f, double w_c, double t, int m_i, int q) {
  if (q < 2) throw std::invalid_argument("fcc_log_integral: q must be at least 2");
  if (m_i < 1) throw std::invalid_argument("fcc_log_integral: need at least one subinterval");
  if (w_c <= 0.0) throw std::invalid_argument("fcc_log_integral: w_c must be positive");
  // the dyadic mesh continues past the requested m_i levels until the
  // innermost panel is negligible: the log singularity sits in that panel and
  // would otherwise dominate the error
  const int levels = std::max(m_i, 44);
  cplx acc = 0.0;
  for (int l = 1; l <= levels; ++l) {
    const double xb = w_c * std::pow(2.0, l - levels);
    const double xa = (l == 1) ? 0.0 : w_c * std::pow(2.0, l - 1 - levels);
    const double c = 0.5 * (xa + xb), s = 0.5 * (xb - xa);
    std::vector<cplx> vals(static_cast<size_t>(q));
    for (int k = 0; k < q; ++k)
      vals[static_cast<size_t>(k)] = f(c + s * std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * q)));
    const auto a_coef = cheb_coeffs(vals);
    const auto mom = chebyshev_moments(s * t, q - 1);
    cplx sub = 0.0;
    for (int n = 0; n < q; ++n) sub += a_coef[static_cast<size_t>(n)] * mom[static_cast<size_t>(n)];
    acc += s * std::exp(cplx(0, -c * t)) * sub;
  }
  return acc;
}

std::vector<cplx> inverse_transform(const std::vector<cplx>& u_samples,
                                    const std::vector<double>& grid,
                                    const std::vector<double>& t_grid, double w_c,
                                    const std::function<cplx(double)>* center, int fcc_m_i,
                                    int fcc_q) {
  if (u_samples.size() != grid.size() || grid.size() < 8)
    throw std::invalid_argument("inverse_transform: bad sample/grid sizes");
  const double w1 = grid.front(), w2 = grid.back();
  std::vector<cplx> out(t_grid.size());

  const bool zero_inside = (w1 < 0.0 && w2 > 0.0);
  if (!zero_inside) {
    OscillatoryRule rule(u_samples, w1, w2);
    for (size_t i = 0; i < t_grid.size(); ++i) out[i] = rule.eval(t_grid[i]) / (2.0 * M_PI);
    return out;
  }

  if (center == nullptr)
    throw std::invalid_argument(
        "inverse_transform: 0 lies inside the band; a center-band callable is required for the "
        "log-singular segment");

  // snap the cut points to the sample grid
  const double dw = (w2 - w1) / (static_cast<double>(grid.size()) - 1.0);
  auto snap_index = [&](double w) {
    int idx = static_cast<int>(std::lround((w - w1) / dw));
    return std::max(1, std::min(static_cast<int>(grid.size()) - 2, idx));
  };
  const int ia = snap_index(-w_c), ib = snap_index(w_c);
  if (!(grid[static_cast<size_t>(ia)] < 0.0) || !(grid[static_cast<size_t>(ib)] > 0.0))
    throw std::invalid_argument("inverse_transform: grid does not resolve the center band");
  const double ga = grid[static_cast<size_t>(ia)], gb = grid[static_cast<size_t>(ib)];

  std::vector<cplx> left(u_samples.begin(), u_samples.begin() + ia + 1);
  std::vector<cplx> right(u_samples.begin() + ib, u_samples.end());
  // interior cut points carry O(1) values; the endpoint subtraction absorbs them
  OscillatoryRule::Options open_ends;
  open_ends.endpoint_tol = 1e300;
  OscillatoryRule rule_l(left, w1, ga, open_ends);
  OscillatoryRule rule_r(right, gb, w2, open_ends);
  std::function<cplx(double)> f_neg = [&](double w) { return (*center)(-w); };

  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    cplx acc = rule_l.eval(t) + rule_r.eval(t);
    // integral_{ga}^{0} = integral_0^{|ga|} F(-w) e^{+iwt} dw
    acc += fcc_log_integral(f_neg, -ga, -t, fcc_m_i, fcc_q);
    acc += fcc_log_integral(*center, gb, t, fcc_m_i, fcc_q);
    out[i] = acc / (2.0 * M_PI);
  }
  return out;
}

} // namespace fthss::quad
