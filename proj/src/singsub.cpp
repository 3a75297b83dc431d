#include "fthss/singsub.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace fthss {

SubtractedField subtract(const std::vector<std::vector<cplx>>& u_samples,
                         const std::vector<double>& grid, const std::vector<cplx>& poles,
                         const std::vector<std::vector<cplx>>& spatial_residues) {
  if (spatial_residues.size() != poles.size())
    throw std::invalid_argument("subtract: one residue row per pole required");
  for (const auto& row : spatial_residues)
    if (row.size() != u_samples.size())
      throw std::invalid_argument("subtract: missing residue for a requested point");

  SubtractedField out;
  out.grid = grid;
  out.poles = poles;
  out.samples = u_samples;
  for (size_t p = 0; p < u_samples.size(); ++p) {
    if (u_samples[p].size() != grid.size())
      throw std::invalid_argument("subtract: sample/grid size mismatch");
    for (size_t j = 0; j < grid.size(); ++j) {
      for (size_t n = 0; n < poles.size(); ++n) {
        const cplx term = spatial_residues[n][p] / (grid[j] - poles[n]);
        out.samples[p][j] -= term;
        out.max_subtracted = std::max(out.max_subtracted, std::abs(term));
      }
    }
  }
  return out;
}

void clenshaw_curtis(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("clenshaw_curtis: n must be even, >= 2");
  nodes.resize(static_cast<size_t>(n) + 1);
  weights.resize(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) nodes[static_cast<size_t>(k)] = std::cos(M_PI * k / n);
  // w_k = g_k (2/n) sum_{m even} g_m I_m cos(m k pi/n), I_m = 2/(1-m^2),
  // g halved at the first and last index
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int m = 0; m <= n; m += 2) {
      const double gm = (m == 0 || m == n) ? 0.5 : 1.0;
      acc += gm * 2.0 / (1.0 - double(m) * m) * std::cos(m * k * M_PI / n);
    }
    const double gk = (k == 0 || k == n) ? 0.5 : 1.0;
    weights[static_cast<size_t>(k)] = gk * 2.0 / n * acc;
  }
}

I2Evaluator::I2Evaluator(std::function<cplx(cplx)> spectrum, double w1, double w2,
                         std::vector<cplx> poles, double onset, double target_tol, double depth_h,
                         double tail_bound, int n_cheb, int n_cap)
    : spectrum_(std::move(spectrum)), w1_(w1), w2_(w2), poles_(std::move(poles)),
      target_tol_(target_tol), n_cap_(n_cap) {
  if (!(w2_ > w1_)) throw std::invalid_argument("I2Evaluator: empty band");
  for (const cplx& rho : poles_)
    if (rho.imag() >= 0.0)
      throw std::invalid_argument("I2Evaluator: poles must lie strictly below the real axis");
  a_rho_.resize(poles_.size());
  for (size_t n = 0; n < poles_.size(); ++n) a_rho_[n] = spectrum_(poles_[n]);

  Level l0;
  l0.n = std::max(64, n_cheb);
  levels_.push_back(std::move(l0));
  const Level& seed = level_for(0.0);
  for (const cplx& v : seed.a_values) scale_a_ = std::max(scale_a_, std::abs(v));

  switch_.onset = onset;
  switch_.unreachable = target_tol_ < tail_bound;
  if (switch_.unreachable)
    std::cerr << "[singsub] switch_time: target tolerance " << target_tol_
              << " sits below the band-edge tail " << tail_bound
              << "; the asymptotic floor is reported instead\n";
  const double tol_eff = std::max(target_tol_, tail_bound);

  if (poles_.empty()) {
    switch_.t_star = onset;
    switch_.constant = 0.0;
    return;
  }
  // one cross-validation point fixes the decay constant C
  const double t_probe = onset + 5.0 / depth_h;
  double gap = 0.0;
  for (size_t n = 0; n < poles_.size(); ++n)
    gap = std::max(gap, std::abs(quadrature_term(n, t_probe) - asymptotic_term(n, t_probe)));
  switch_.constant = gap * std::exp(depth_h * (t_probe - onset));
  switch_.t_star =
      std::max(onset, onset + std::log(std::max(switch_.constant, 1e-300) / tol_eff) / depth_h);
  size_t worst = 0;
  for (size_t n = 0; n < poles_.size(); ++n) {
    const double d =
        std::abs(quadrature_term(n, switch_.t_star) - asymptotic_term(n, switch_.t_star));
    if (d > branch_gap_) {
      branch_gap_ = d;
      worst = n;
    }
  }
  if (branch_gap_ > 10.0 * tol_eff)
    throw std::runtime_error(
        "I2Evaluator: quadrature and asymptotic branches disagree at the switch time; worst "
        "pole Re = " + std::to_string(poles_[worst].real()) +
        ", Im = " + std::to_string(poles_[worst].imag()));
}

const I2Evaluator::Level& I2Evaluator::level_for(double t) const {
  // resolve the e^{-iwt} phase: ~2.5 nodes per radian of half-band phase
  const double need = 1.25 * 0.5 * (w2_ - w1_) * std::abs(t) + 64;
  int n = levels_.front().n;
  while (n < need && n < n_cap_) n *= 2;
  if (static_cast<double>(n_cap_) < need)
    throw std::runtime_error("I2Evaluator: n_cheb cap insufficient for the requested time");
  if (n > n_cap_) n = n_cap_;
  for (auto& l : levels_) {
    if (l.n != n) continue;
    if (l.nodes.empty()) {
      std::vector<double> x, w;
      clenshaw_curtis(l.n, x, w);
      const double c = 0.5 * (w1_ + w2_), s = 0.5 * (w2_ - w1_);
      l.nodes.resize(x.size());
      l.weights.resize(x.size());
      l.a_values.resize(x.size());
      for (size_t k = 0; k < x.size(); ++k) {
        l.nodes[k] = c + s * x[k];
        l.weights[k] = s * w[k];
        l.a_values[k] = spectrum_(l.nodes[k]);
      }
    }
    return l;
  }
  Level fresh;
  fresh.n = n;
  levels_.push_back(std::move(fresh));
  return level_for(t);
}

cplx I2Evaluator::quadrature_term(size_t n, double t) const {
  const Level& l = level_for(t);
  const cplx rho = poles_[n];
  // A continued deep below the axis can dwarf its on-band values; there the
  // integrand is no longer near-singular and the plain rule is the accurate one
  if (std::abs(a_rho_[n]) > 10.0 * scale_a_) {
    cplx acc = 0.0;
    for (size_t k = 0; k < l.nodes.size(); ++k)
      acc += l.weights[k] * l.a_values[k] * std::exp(cplx(0, -l.nodes[k] * t)) /
             (l.nodes[k] - rho);
    return acc;
  }
  const cplx pole_factor = a_rho_[n] * std::exp(cplx(0, -1) * rho * t);
  cplx acc = 0.0;
  for (size_t k = 0; k < l.nodes.size(); ++k) {
    const cplx num = l.a_values[k] * std::exp(cplx(0, -l.nodes[k] * t)) - pole_factor;
    acc += l.weights[k] * num / (l.nodes[k] - rho);
  }
  // analytic remainder: A(rho) e^{-i rho t} log((W2-rho)/(W1-rho)), principal branch
  acc += pole_factor * std::log((w2_ - rho) / (w1_ - rho));
  return acc;
}

cplx I2Evaluator::asymptotic_term(size_t n, double t) const {
  return cplx(0, -2.0 * M_PI) * a_rho_[n] * std::exp(cplx(0, -1) * poles_[n] * t);
}

cplx I2Evaluator::term(size_t n, double t, bool quadrature_only) const {
  if (quadrature_only || t < switch_.t_star) return quadrature_term(n, t);
  return asymptotic_term(n, t);
}

std::vector<cplx> I2Evaluator::eval(const MatrixXcd& spatial, double t,
                                    bool quadrature_only) const {
  if (spatial.cols() != static_cast<Eigen::Index>(poles_.size()))
    throw std::invalid_argument("I2Evaluator: spatial residue matrix has wrong pole count");
  std::vector<cplx> out(static_cast<size_t>(spatial.rows()), cplx(0, 0));
  for (size_t n = 0; n < poles_.size(); ++n) {
    const cplx q = term(n, t, quadrature_only);
    for (Eigen::Index p = 0; p < spatial.rows(); ++p)
      out[static_cast<size_t>(p)] += spatial(p, static_cast<Eigen::Index>(n)) * q;
  }
  for (auto& v : out) v /= 2.0 * M_PI;
  return out;
}

} // namespace fthss
