#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gsl/gsl_sf_bessel.h>

#include <complex>

#include "fthss/special_functions.hpp"
#include "oracles.hpp"

using fthss::cplx;
namespace fb = fthss::bessel;

namespace {
double rel_err(cplx got, cplx want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}
} // namespace

TEST_CASE("series-branch values match the long-double series oracle") {
  const double mags[] = {1e-8, 1e-3, 0.1, 1.0, 4.0, 9.0, 13.0, 14.9};
  const double phases[] = {0.0, -0.2, -0.9, -1.4};
  for (double m : mags) {
    for (double ph : phases) {
      const cplx z = std::polar(m, ph);
      if (z.imag() < -10.0) continue;
      oracle::cplxl zl(z.real(), z.imag());
      CHECK(rel_err(fb::j0(z), oracle::cplx(oracle::series_j0(zl))) < 1e-12);
      CHECK(rel_err(fb::y0(z), oracle::cplx(oracle::series_y0(zl))) < 1e-12);
      CHECK(rel_err(fb::j1(z), oracle::cplx(oracle::series_j1(zl))) < 1e-12);
      CHECK(rel_err(fb::y1(z), oracle::cplx(oracle::series_y1(zl))) < 1e-12);
      CHECK(rel_err(fb::h0(z), oracle::series_h0(z)) < 1e-12);
      CHECK(rel_err(fb::h1(z), oracle::series_h1(z)) < 1e-12);
    }
  }
}

TEST_CASE("real arguments match GSL across both branches") {
  const double xs[] = {0.5, 1.0, 2.405, 5.52, 9.0, 12.0, 14.99, 15.01, 20.0, 77.3, 443.0, 1000.0};
  for (double x : xs) {
    const cplx z(x, 0.0);
    CHECK(rel_err(fb::j0(z), cplx(gsl_sf_bessel_J0(x), 0)) < 1e-12);
    CHECK(rel_err(fb::y0(z), cplx(gsl_sf_bessel_Y0(x), 0)) < 1e-12);
    CHECK(rel_err(fb::j1(z), cplx(gsl_sf_bessel_J1(x), 0)) < 1e-12);
    CHECK(rel_err(fb::y1(z), cplx(gsl_sf_bessel_Y1(x), 0)) < 1e-12);
    // identity H0 = J0 + i Y0 on the real axis
    CHECK(rel_err(fb::h0(z), fb::j0(z) + cplx(0, 1) * fb::y0(z)) < 1e-12);
  }
}

TEST_CASE("branch switchover is seamless") {
  // compare both sides of |z| = 15 against the series oracle (still convergent there)
  for (double ph : {0.0, -0.35, -0.64}) {
    const cplx za = std::polar(14.999, ph), zb = std::polar(15.001, ph);
    CHECK(rel_err(fb::h0(za), oracle::series_h0(za)) < 1e-12);
    CHECK(rel_err(fb::h0(zb), oracle::series_h0(zb)) < 5e-12);
    CHECK(rel_err(fb::h1(zb), oracle::series_h1(zb)) < 5e-12);
  }
}

TEST_CASE("lower-half-plane values at moderate |z| and full depth") {
  // asymptotic branch vs the quad-precision series oracle
  const cplx zs[] = {{20.0, -5.0}, {18.0, -10.0}, {24.0, -3.0}, {16.0, -0.01}, {33.0, -7.0}};
  for (cplx z : zs) {
    CHECK(rel_err(fb::h0(z), oracle::series_h0_q(z)) < 1e-12);
    CHECK(rel_err(fb::h1(z), oracle::series_h1_q(z)) < 1e-12);
  }
}

namespace {
// Taylor continuation off the real axis from GSL values:
// H0(x + d) = sum_k d^k H0^(k)(x)/k!, derivatives via H_n' = (H_{n-1} - H_{n+1})/2.
cplx h_taylor(int order, double x, cplx delta) {
  const int K = 90, nmax = K + order + 2;
  std::vector<cplx> h(nmax + 1);
  for (int n = 0; n <= nmax; ++n) h[n] = cplx(gsl_sf_bessel_Jn(n, x), gsl_sf_bessel_Yn(n, x));
  // d[n] = coefficient of H_n in the current derivative of H_order (n can go negative; fold)
  std::vector<cplx> d(2 * nmax + 1, 0.0);
  auto at = [&](int n) -> cplx& { return d[static_cast<size_t>(n + nmax)]; };
  at(order) = 1.0;
  auto value = [&]() {
    cplx acc = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
      if (at(n) == cplx(0, 0)) continue;
      const int m = std::abs(n);
      const double parity = (n < 0 && m % 2 == 1) ? -1.0 : 1.0;
      if (m <= nmax) acc += at(n) * parity * h[static_cast<size_t>(m)];
    }
    return acc;
  };
  cplx sum = value(), dk = 1.0;
  for (int k = 1; k <= K; ++k) {
    std::vector<cplx> nd(2 * nmax + 1, 0.0);
    for (int n = -nmax + 1; n <= nmax - 1; ++n) {
      const cplx c = at(n);
      if (c == cplx(0, 0)) continue;
      nd[static_cast<size_t>(n - 1 + nmax)] += 0.5 * c;
      nd[static_cast<size_t>(n + 1 + nmax)] -= 0.5 * c;
    }
    d.swap(nd);
    dk *= delta / double(k);
    sum += dk * value();
  }
  return sum;
}
} // namespace

TEST_CASE("deep lower half plane at large |z| via Taylor continuation") {
  struct Case { double x, y; };
  const Case cs[] = {{60.0, -6.0}, {300.0, -2.0}, {995.0, -1.0}};
  for (const auto& c : cs) {
    const cplx z(c.x, c.y), delta(0.0, c.y);
    CHECK(rel_err(fb::h0(z), h_taylor(0, c.x, delta)) < 1e-12);
    CHECK(rel_err(fb::h1(z), h_taylor(1, c.x, delta)) < 1e-12);
  }
}

TEST_CASE("integer-order sequences agree with GSL on the real axis") {
  for (double x : {0.7, 3.0, 12.0, 40.0, 150.0}) {
    const int nmax = 30;
    auto j = fb::jn_sequence(nmax, cplx(x, 0));
    auto y = fb::yn_sequence(nmax, cplx(x, 0));
    for (int n = 0; n <= nmax; ++n) {
      CHECK(rel_err(j[n], cplx(gsl_sf_bessel_Jn(n, x), 0)) < 1e-11);
      CHECK(rel_err(y[n], cplx(gsl_sf_bessel_Yn(n, x), 0)) < 1e-11);
    }
  }
}

TEST_CASE("integer-order Wronskian holds for complex argument") {
  const cplx zs[] = {{2.0, -0.5}, {5.5, -1.5}, {30.0, -0.2}};
  for (cplx z : zs) {
    const int nmax = 12;
    auto j = fb::jn_sequence(nmax + 1, z);
    auto y = fb::yn_sequence(nmax + 1, z);
    for (int n = 0; n <= nmax; ++n) {
      // J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi z)
      const cplx w = j[n + 1] * y[n] - j[n] * y[n + 1];
      CHECK(rel_err(w, 2.0 / (M_PI * z)) < 1e-11);
    }
  }
}
