#include <cmath>

#include "fthss/helmholtz.hpp"

// Sequential baselines for the OpenMP kernels, written as straight loops.
// Tests check the parallel paths against these; tools/bench_kernels times both.

namespace fthss::serial_ref {

namespace {
constexpr double kEuler = 0.57721566490153286060651209;

std::vector<double> mk_weights(int N) {
  const int n = N / 2;
  std::vector<double> R(N);
  for (int k = 0; k < N; ++k) {
    double acc = 0.0;
    for (int m = 1; m < n; ++m) acc += std::cos(2.0 * M_PI * m * k / N) / m;
    R[k] = -(2.0 * M_PI / N) * (2.0 * acc + ((k % 2 == 0) ? 1.0 : -1.0) / n);
  }
  return R;
}

double g_sum(int N, double x) {
  double acc = 0.0;
  for (int n = 1; n < N; ++n) acc += std::cos(n * x) / n;
  return acc;
}
} // namespace

MatrixXcd assemble_closed_entries(const Discretization& disc, cplx omega, double eta, double c) {
  const auto& bd = disc.parts[0];
  const int N = static_cast<int>(bd.size());
  const cplx kappa = omega / c;
  const auto R = mk_weights(N);
  const double w_trap = 2.0 * M_PI / N;
  MatrixXcd A(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      cplx S, K;
      if (i == j) {
        const double jac = bd.jacobians[i];
        const cplx m2 = (cplx(0, 0.25) - kEuler / (2.0 * M_PI) -
                         std::log(0.5 * kappa * jac) / (2.0 * M_PI)) * jac;
        S = R[0] * (-jac / (4.0 * M_PI)) + w_trap * m2;
        const Vec2 d1 = bd.d1[i], d2 = bd.d2[i];
        K = w_trap * ((d1.y * d2.x - d1.x * d2.y) / (4.0 * M_PI * jac * jac));
      } else {
        const Vec2 xi = bd.nodes[i], xj = bd.nodes[j];
        const double jac_j = bd.jacobians[j];
        const double r = (xi - xj).norm();
        const cplx z = kappa * r;
        const double sn = std::sin(0.5 * (bd.params[i] - bd.params[j]));
        const double lg = std::log(4.0 * sn * sn);
        const cplx m1 = -bessel::j0(z) * jac_j / (4.0 * M_PI);
        const cplx m = cplx(0, 0.25) * bessel::h0(z) * jac_j;
        S = R[std::abs(i - j)] * m1 + w_trap * (m - m1 * lg);
        const Vec2 d1j = bd.d1[j];
        const double T = d1j.y * (xi.x - xj.x) - d1j.x * (xi.y - xj.y);
        const cplx l = cplx(0, 0.25) * kappa * bessel::h1(z) * T / r;
        const cplx l1 = -kappa * bessel::j1(z) * T / (4.0 * M_PI * r);
        K = R[std::abs(i - j)] * l1 + w_trap * (l - l1 * lg);
      }
      A(i, j) = K - cplx(0, eta) * S;
      if (i == j) A(i, j) += 0.5;
    }
  }
  return A;
}

MatrixXcd assemble_arc_entries(const Discretization& disc, cplx omega, double c) {
  const cplx kappa = omega / c;
  const int Ntot = static_cast<int>(disc.total());
  MatrixXcd A(Ntot, Ntot);
  std::vector<std::vector<double>> Gm, Gp;
  for (const auto& part : disc.parts) {
    const int N = static_cast<int>(part.size());
    std::vector<double> gm(N), gp(2 * N + 1);
    for (int k = 0; k < N; ++k) gm[k] = g_sum(N, M_PI * k / N);
    for (int l = 0; l <= 2 * N; ++l) gp[l] = g_sum(N, M_PI * l / N);
    Gm.push_back(std::move(gm));
    Gp.push_back(std::move(gp));
  }
  for (size_t pi_ = 0; pi_ < disc.parts.size(); ++pi_) {
    const auto& bi = disc.parts[pi_];
    for (size_t i = 0; i < bi.size(); ++i) {
      for (size_t pj = 0; pj < disc.parts.size(); ++pj) {
        const auto& bj = disc.parts[pj];
        const int N = static_cast<int>(bj.size());
        for (size_t j = 0; j < bj.size(); ++j) {
          cplx v;
          if (pi_ != pj) {
            const double r = (bi.nodes[i] - bj.nodes[j]).norm();
            v = (M_PI / N) * cplx(0, 0.25) * bessel::h0(kappa * r) * bj.jacobians[j];
          } else if (i == j) {
            const double Rlog = -(M_PI / N) * (std::log(2.0) + Gm[pi_][0] + Gp[pi_][i + j + 1]);
            const double jac = bi.jacobians[i];
            v = Rlog * (-jac / (2.0 * M_PI)) +
                (M_PI / N) * (jac * (cplx(0, 0.25) -
                                     (kEuler + std::log(0.5 * kappa * jac)) / (2.0 * M_PI)));
          } else {
            const double Rlog = -(M_PI / N) * (std::log(2.0) + Gm[pi_][std::abs(int(i) - int(j))] +
                                               Gp[pi_][i + j + 1]);
            const double r = (bi.nodes[i] - bj.nodes[j]).norm();
            const double jac = bj.jacobians[j];
            const cplx a = -bessel::j0(kappa * r) * jac / (2.0 * M_PI);
            const cplx b = cplx(0, 0.25) * bessel::h0(kappa * r) * jac -
                           a * std::log(std::abs(bi.params[i] - bj.params[j]));
            v = Rlog * a + (M_PI / N) * b;
          }
          A(static_cast<Eigen::Index>(disc.offsets[pi_] + i),
            static_cast<Eigen::Index>(disc.offsets[pj] + j)) = v;
        }
      }
    }
  }
  return A;
}

std::vector<cplx> eval_potential(const Discretization& disc, const VectorXcd& density, cplx omega,
                                 double eta, const std::vector<Vec2>& points, Representation rep,
                                 double c) {
  const cplx kappa = omega / c;
  std::vector<cplx> out(points.size());
  for (size_t q = 0; q < points.size(); ++q) {
    cplx acc = 0.0;
    size_t flat = 0;
    for (const auto& part : disc.parts) {
      for (size_t j = 0; j < part.size(); ++j, ++flat) {
        const Vec2 y = part.nodes[j];
        const double r = (points[q] - y).norm();
        const cplx z = kappa * r;
        cplx term;
        if (rep == Representation::SingleLayerArc) {
          term = cplx(0, 0.25) * bessel::h0(z);
        } else {
          const Vec2 d1 = part.d1[j];
          const double T = (d1.y * (points[q].x - y.x) - d1.x * (points[q].y - y.y)) / part.jacobians[j];
          term = cplx(0, 0.25) * kappa * bessel::h1(z) * T / r -
                 cplx(0, eta) * cplx(0, 0.25) * bessel::h0(z);
        }
        acc += part.pot_weights[j] * term * density(static_cast<Eigen::Index>(flat));
      }
    }
    out[q] = acc;
  }
  return out;
}

} // namespace fthss::serial_ref
