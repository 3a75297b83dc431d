#include "fthss/helmholtz.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fthss {

namespace {

constexpr double kEuler = 0.57721566490153286060651209;

int resolve_workers(int workers) { return workers > 0 ? workers : 0; }

// ---- closed-curve kernel split (Martensen-Kussmaul) ------------------------

// ln(4 sin^2((s-s')/2)) quadrature weights at the collocation nodes:
// R_k = -(2pi/N) [ 2 sum_{m=1}^{n-1} cos(2pi m k/N)/m + (-1)^k/n ], n = N/2.
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

// kernel values at kappa |r_i - r_j| shared across the symmetric pair
struct KernelTable {
  MatrixXcd j0, h0, j1, h1;
  std::vector<double> dist;  // flattened i*N+j distances
};

KernelTable build_table(const std::vector<Vec2>& nodes, cplx kappa, bool need_order1,
                        int workers) {
  const int N = static_cast<int>(nodes.size());
  KernelTable t;
  t.j0.resize(N, N);
  t.h0.resize(N, N);
  if (need_order1) {
    t.j1.resize(N, N);
    t.h1.resize(N, N);
  }
  t.dist.assign(static_cast<size_t>(N) * N, 0.0);
  const int nw = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nw)
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      const double r = (nodes[static_cast<size_t>(i)] - nodes[static_cast<size_t>(j)]).norm();
      t.dist[static_cast<size_t>(i) * N + j] = r;
      const auto v = bessel::order01(kappa * r);
      t.j0(i, j) = v.j0;
      t.h0(i, j) = v.h0;
      if (need_order1) {
        t.j1(i, j) = v.j1;
        t.h1(i, j) = v.h1;
      }
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) {
      t.dist[static_cast<size_t>(i) * N + j] = t.dist[static_cast<size_t>(j) * N + i];
      t.j0(i, j) = t.j0(j, i);
      t.h0(i, j) = t.h0(j, i);
      if (need_order1) {
        t.j1(i, j) = t.j1(j, i);
        t.h1(i, j) = t.h1(j, i);
      }
    }
  return t;
}

struct ClosedCtx {
  const BoundaryDiscretization* bd;
  const KernelTable* table;
  cplx kappa;
  double eta;
  std::vector<double> R;  // MK weights by |i-j|
  int N;
};

cplx closed_entry(const ClosedCtx& ctx, int i, int j) {
  const auto& bd = *ctx.bd;
  const cplx kappa = ctx.kappa;
  const double w_trap = 2.0 * M_PI / ctx.N;
  const double jac_j = bd.jacobians[j];
  cplx S, K;
  if (i == j) {
    const double jac = bd.jacobians[i];
    const cplx m2 = (cplx(0, 0.25) - kEuler / (2.0 * M_PI) -
                     std::log(0.5 * kappa * jac) / (2.0 * M_PI)) * jac;
    S = ctx.R[0] * (-jac / (4.0 * M_PI)) + w_trap * m2;
    const Vec2 d1 = bd.d1[i];
    const Vec2 d2 = bd.d2[i];
    const double l2 = (d1.y * d2.x - d1.x * d2.y) / (4.0 * M_PI * jac * jac);
    K = w_trap * l2;
  } else {
    const Vec2 xi = bd.nodes[i], xj = bd.nodes[j];
    const double r = ctx.table->dist[static_cast<size_t>(i) * ctx.N + j];
    const double sn = std::sin(0.5 * (bd.params[i] - bd.params[j]));
    const double lg = std::log(4.0 * sn * sn);
    const cplx m1 = -ctx.table->j0(i, j) * jac_j / (4.0 * M_PI);
    const cplx m = cplx(0, 0.25) * ctx.table->h0(i, j) * jac_j;
    S = ctx.R[std::abs(i - j)] * m1 + w_trap * (m - m1 * lg);
    const Vec2 d1j = bd.d1[j];
    const double T = d1j.y * (xi.x - xj.x) - d1j.x * (xi.y - xj.y);
    const cplx l = cplx(0, 0.25) * kappa * ctx.table->h1(i, j) * T / r;
    const cplx l1 = -kappa * ctx.table->j1(i, j) * T / (4.0 * M_PI * r);
    K = ctx.R[std::abs(i - j)] * l1 + w_trap * (l - l1 * lg);
  }
  cplx entry = K - cplx(0, ctx.eta) * S;
  if (i == j) entry += 0.5;
  return entry;
}

// ---- open-arc product quadrature -------------------------------------------

struct ArcCtx {
  const Discretization* disc;
  const KernelTable* table;  // over flat global indices
  cplx kappa;
  // per part: G tables for the exact log-cosine weights
  struct Part {
    std::vector<double> Gm;  // G(pi k/N), k = 0..N-1   (difference index)
    std::vector<double> Gp;  // G(pi l/N), l = 0..2N    (sum index)
  };
  std::vector<Part> tables;
};

// G(x) = sum_{n=1}^{N-1} cos(n x)/n
double g_sum(int N, double x) {
  double acc = 0.0;
  for (int n = 1; n < N; ++n) acc += std::cos(n * x) / n;
  return acc;
}

ArcCtx::Part arc_tables(int N) {
  ArcCtx::Part p;
  p.Gm.resize(N);
  p.Gp.resize(2 * N + 1);
  for (int k = 0; k < N; ++k) p.Gm[k] = g_sum(N, M_PI * k / N);
  for (int l = 0; l <= 2 * N; ++l) p.Gp[l] = g_sum(N, M_PI * l / N);
  return p;
}

cplx arc_entry(const ArcCtx& ctx, size_t pi_, size_t i, size_t pj, size_t j) {
  const auto& parts = ctx.disc->parts;
  const auto& bi = parts[pi_];
  const auto& bj = parts[pj];
  const cplx kappa = ctx.kappa;
  const int Nj = static_cast<int>(bj.size());
  const size_t gi = ctx.disc->offsets[pi_] + i, gj = ctx.disc->offsets[pj] + j;
  const size_t ntot = ctx.disc->total();
  if (pi_ != pj) {
    // disjoint arcs: smooth kernel, midpoint rule in theta
    return (M_PI / Nj) * cplx(0, 0.25) *
           ctx.table->h0(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(gj)) *
           bj.jacobians[j];
  }
  const int N = Nj;
  const auto& tab = ctx.tables[pi_];
  const double Rlog = -(M_PI / N) * (std::log(2.0) + tab.Gm[std::abs(int(i) - int(j))] +
                                     tab.Gp[i + j + 1]);
  if (i == j) {
    const double jac = bi.jacobians[i];
    const double a_diag = -jac / (2.0 * M_PI);
    const cplx b_diag = jac * (cplx(0, 0.25) -
                               (kEuler + std::log(0.5 * kappa * jac)) / (2.0 * M_PI));
    return Rlog * a_diag + (M_PI / N) * b_diag;
  }
  (void)ntot;
  const double jac = bj.jacobians[j];
  const cplx a = -ctx.table->j0(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(gj)) *
                 jac / (2.0 * M_PI);
  const cplx b = cplx(0, 0.25) *
                     ctx.table->h0(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(gj)) *
                     jac -
                 a * std::log(std::abs(bi.params[i] - bj.params[j]));
  return Rlog * a + (M_PI / N) * b;
}

void flat_index(const Discretization& disc, size_t flat, size_t& part, size_t& local) {
  for (size_t p = 0; p + 1 < disc.offsets.size(); ++p)
    if (flat < disc.offsets[p + 1]) {
      part = p;
      local = flat - disc.offsets[p];
      return;
    }
  throw std::out_of_range("flat_index");
}

cplx potential_term(const BoundaryDiscretization& bd, size_t j, Vec2 x, cplx kappa, double eta,
                    Representation rep) {
  const Vec2 y = bd.nodes[j];
  const double r = (x - y).norm();
  const cplx z = kappa * r;
  if (rep == Representation::SingleLayerArc) return cplx(0, 0.25) * bessel::h0(z);
  const auto v = bessel::order01(z);
  const Vec2 d1 = bd.d1[j];
  const double T = (d1.y * (x.x - y.x) - d1.x * (x.y - y.y)) / bd.jacobians[j];
  const cplx dlp = cplx(0, 0.25) * kappa * v.h1 * T / r;
  return dlp - cplx(0, eta) * cplx(0, 0.25) * v.h0;
}

} // namespace

cplx green(cplx omega, Vec2 r, Vec2 rp, double c) {
  const double d = (r - rp).norm();
  if (d == 0.0) throw std::domain_error("green: coincident points");
  if (omega == cplx(0, 0)) throw std::domain_error("green: omega must be nonzero");
  return cplx(0, 0.25) * bessel::h0(omega / c * d);
}

VectorXcd plane_wave_trace(const Discretization& disc, cplx omega, Vec2 p, double c) {
  if (std::abs(p.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("plane_wave_trace: direction must be a unit vector");
  const cplx kappa = omega / c;
  VectorXcd b(disc.total());
  for (size_t i = 0; i < disc.total(); ++i) {
    const Vec2 r = disc.node(i);
    b(static_cast<Eigen::Index>(i)) = std::exp(cplx(0, 1) * kappa * (p.x * r.x + p.y * r.y));
  }
  return b;
}

OperatorMatrix assemble_closed(const Discretization& disc, cplx omega, double eta, double c,
                               int workers) {
  if (!disc.closed()) throw std::invalid_argument("assemble_closed: needs one closed curve");
  if (omega == cplx(0, 0)) throw std::invalid_argument("assemble_closed: omega must be nonzero");
  const int N = static_cast<int>(disc.total());
  const KernelTable table = build_table(disc.parts[0].nodes, omega / c, true, workers);
  ClosedCtx ctx{&disc.parts[0], &table, omega / c, eta, mk_weights(N), N};
  MatrixXcd A(N, N);
  const int nw = resolve_workers(workers);
#pragma omp parallel for schedule(static) num_threads(nw > 0 ? nw : omp_get_max_threads())
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = closed_entry(ctx, i, j);
  return OperatorMatrix(std::move(A), &disc, omega, eta);
}

OperatorMatrix assemble_arc(const Discretization& disc, cplx omega, double c, int workers) {
  if (!disc.open()) throw std::invalid_argument("assemble_arc: needs open-arc discretization");
  if (omega == cplx(0, 0)) throw std::invalid_argument("assemble_arc: omega must be nonzero");
  const int N = static_cast<int>(disc.total());
  std::vector<Vec2> all_nodes;
  all_nodes.reserve(disc.total());
  for (const auto& part : disc.parts)
    all_nodes.insert(all_nodes.end(), part.nodes.begin(), part.nodes.end());
  const KernelTable table = build_table(all_nodes, omega / c, false, workers);
  ArcCtx ctx{&disc, &table, omega / c, {}};
  for (const auto& part : disc.parts) ctx.tables.push_back(arc_tables(static_cast<int>(part.size())));
  MatrixXcd A(N, N);
  const int nw = resolve_workers(workers);
#pragma omp parallel for schedule(static) num_threads(nw > 0 ? nw : omp_get_max_threads())
  for (int i = 0; i < N; ++i) {
    size_t pi_, li;
    flat_index(disc, static_cast<size_t>(i), pi_, li);
    for (int j = 0; j < N; ++j) {
      size_t pj, lj;
      flat_index(disc, static_cast<size_t>(j), pj, lj);
      A(i, j) = arc_entry(ctx, pi_, li, pj, lj);
    }
  }
  return OperatorMatrix(std::move(A), &disc, omega, 0.0);
}

OperatorMatrix assemble(const Discretization& disc, cplx omega, double eta, double c, int workers) {
  return disc.closed() ? assemble_closed(disc, omega, eta, c, workers)
                       : assemble_arc(disc, omega, c, workers);
}

void OperatorMatrix::ensure_factorized() const {
  if (lu_) return;
  lu_ = std::make_shared<Eigen::PartialPivLU<MatrixXcd>>(entries_);
}

double OperatorMatrix::condition_estimate() const {
  ensure_factorized();
  const Eigen::Index n = entries_.rows();
  // Hager's 1-norm estimator for ||A^{-1}||_1
  VectorXcd x = VectorXcd::Constant(n, cplx(1.0 / static_cast<double>(n), 0));
  double est = 0.0;
  Eigen::Index last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    VectorXcd y = lu_->solve(x);
    est = y.cwiseAbs().sum();
    VectorXcd xi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(y(i));
      xi(i) = a > 0 ? y(i) / a : cplx(1, 0);
    }
    VectorXcd z = lu_->adjoint().solve(xi);
    Eigen::Index jmax;
    z.cwiseAbs().maxCoeff(&jmax);
    if (jmax == last) break;
    last = jmax;
    x.setZero();
    x(jmax) = 1.0;
  }
  const double norm_a = entries_.cwiseAbs().colwise().sum().maxCoeff();
  return est * norm_a;
}

VectorXcd OperatorMatrix::solve(const VectorXcd& rhs) const {
  if (rhs.size() != entries_.rows()) throw std::invalid_argument("solve: rhs size mismatch");
  const bool first = !factorized();
  ensure_factorized();
  if (first) {
    const double cond = condition_estimate();
    if (cond > 1.0 / std::numeric_limits<double>::epsilon())
      throw SingularOperator(omega_, "solve_density: operator numerically singular (near-resonant frequency or eta misuse)");
  }
  return lu_->solve(rhs);
}

std::vector<cplx> eval_potential(const Discretization& disc, const VectorXcd& density, cplx omega,
                                 double eta, const std::vector<Vec2>& points, Representation rep,
                                 double c, double cutoff_frac, int workers) {
  if (density.size() != static_cast<Eigen::Index>(disc.total()))
    throw std::invalid_argument("eval_potential: density size mismatch");
  const bool arc = disc.open();
  if (arc && rep != Representation::SingleLayerArc)
    throw std::invalid_argument("eval_potential: open arcs use the single-layer representation");
  if (!arc && rep != Representation::CombinedField)
    throw std::invalid_argument("eval_potential: closed curves use the combined-field representation");
  const double cutoff = cutoff_frac * disc.diameter();
  for (const Vec2& p : points)
    if (disc.min_distance(p) < cutoff)
      throw std::domain_error(
          "eval_potential: point inside the near-field band; increase N or move the point "
          "(dedicated near-field quadrature is not provided)");
  const cplx kappa = omega / c;
  std::vector<cplx> out(points.size());
  const int nw = resolve_workers(workers);
  const int np = static_cast<int>(points.size());
#pragma omp parallel for schedule(static) num_threads(nw > 0 ? nw : omp_get_max_threads())
  for (int q = 0; q < np; ++q) {
    cplx acc = 0.0;
    size_t flat = 0;
    for (const auto& part : disc.parts)
      for (size_t j = 0; j < part.size(); ++j, ++flat)
        acc += part.pot_weights[j] * potential_term(part, j, points[static_cast<size_t>(q)], kappa, eta, rep) *
               density(static_cast<Eigen::Index>(flat));
    out[static_cast<size_t>(q)] = acc;
  }
  return out;
}

void dump_matrix(const OperatorMatrix& op, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("dump_matrix: cannot open " + path);
  const uint64_t n = static_cast<uint64_t>(op.entries().rows());
  const double wr = op.omega().real(), wi = op.omega().imag(), eta = op.eta();
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(&wr), 8);
  f.write(reinterpret_cast<const char*>(&wi), 8);
  f.write(reinterpret_cast<const char*>(&eta), 8);
  for (Eigen::Index i = 0; i < op.entries().rows(); ++i)
    for (Eigen::Index j = 0; j < op.entries().cols(); ++j) {
      const cplx v = op.entries()(i, j);
      const double re = v.real(), im = v.imag();
      f.write(reinterpret_cast<const char*>(&re), 8);
      f.write(reinterpret_cast<const char*>(&im), 8);
    }
}

void dump_density(const VectorXcd& density, cplx omega, double eta, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("dump_density: cannot open " + path);
  const uint64_t n = static_cast<uint64_t>(density.size());
  const double wr = omega.real(), wi = omega.imag();
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(&wr), 8);
  f.write(reinterpret_cast<const char*>(&wi), 8);
  f.write(reinterpret_cast<const char*>(&eta), 8);
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    const double re = density(i).real(), im = density(i).imag();
    f.write(reinterpret_cast<const char*>(&re), 8);
    f.write(reinterpret_cast<const char*>(&im), 8);
  }
}

} // namespace fthss
