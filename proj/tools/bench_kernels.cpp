// Times the OpenMP kernels against their sequential reference implementations:
// operator assembly (closed and arc), potential evaluation, and the per-time
// synthesis loop.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "fthss/helmholtz.hpp"
#include "fthss/quadrature.hpp"

using namespace fthss;
using clk = std::chrono::steady_clock;

namespace {
double secs(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_best(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clk::now();
    f();
    best = std::min(best, secs(t0, clk::now()));
  }
  return best;
}
} // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 384;
  const int threads = omp_get_max_threads();
  std::printf("kernel benchmark, N = %d, %d threads\n", n, threads);
  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  auto disc_c = discretize(make_scatterer("unit-circle"), n);
  auto disc_a = discretize(make_scatterer("circular-arc", {1.0, 1.25}), n);
  const cplx w = 8.5;

  const double t_c_ser =
      time_best([&] { volatile auto a = serial_ref::assemble_closed_entries(disc_c, w, -8.5, 1.0); (void)a; });
  const double t_c_omp = time_best([&] { volatile auto a = assemble_closed(disc_c, w, -8.5, 1.0, 0); (void)a; });
  std::printf("%-28s %10.3f %10.3f %7.2fx\n", "assemble closed", t_c_ser, t_c_omp, t_c_ser / t_c_omp);

  const double t_a_ser =
      time_best([&] { volatile auto a = serial_ref::assemble_arc_entries(disc_a, w, 1.0); (void)a; });
  const double t_a_omp = time_best([&] { volatile auto a = assemble_arc(disc_a, w, 1.0, 0); (void)a; });
  std::printf("%-28s %10.3f %10.3f %7.2fx\n", "assemble arc", t_a_ser, t_a_omp, t_a_ser / t_a_omp);

  VectorXcd psi = VectorXcd::Random(n);
  std::vector<Vec2> pts;
  for (int i = 0; i < 400; ++i)
    pts.push_back({3.0 + 0.01 * i, 2.0 - 0.01 * i});
  const double t_p_ser = time_best(
      [&] { volatile auto u = serial_ref::eval_potential(disc_c, psi, w, -8.5, pts, Representation::CombinedField, 1.0); (void)u; });
  const double t_p_omp = time_best(
      [&] { volatile auto u = eval_potential(disc_c, psi, w, -8.5, pts, Representation::CombinedField, 1.0, 0.05, 0); (void)u; });
  std::printf("%-28s %10.3f %10.3f %7.2fx\n", "potential batch", t_p_ser, t_p_omp, t_p_ser / t_p_omp);

  // synthesis: sinc-series evaluation over a time grid
  std::vector<cplx> samples(400);
  for (int j = 0; j < 400; ++j) {
    const double om = 4.0 + 9.0 * j / 399.0;
    samples[static_cast<size_t>(j)] = std::exp(-(om - 8.5) * (om - 8.5) / 0.5);
  }
  quad::OscillatoryRule rule(samples, 4.0, 13.0);
  std::vector<cplx> out(4000);
  const double t_s_ser = time_best([&] {
    for (int i = 0; i < 4000; ++i) out[static_cast<size_t>(i)] = rule.eval(0.05 * i);
  });
  const double t_s_omp = time_best([&] {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < 4000; ++i) out[static_cast<size_t>(i)] = rule.eval(0.05 * i);
  });
  std::printf("%-28s %10.3f %10.3f %7.2fx\n", "synthesis loop", t_s_ser, t_s_omp, t_s_ser / t_s_omp);
  return 0;
}
