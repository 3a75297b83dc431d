#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fthss/rational.hpp"

namespace fthss {

/// Per-point, per-frequency field samples with the pole contributions
/// sum_n c_n(r)/(w - rho_n) removed.
struct SubtractedField {
  std::vector<double> grid;
  std::vector<std::vector<cplx>> samples;  // [point][freq], regularized
  std::vector<cplx> poles;
  double max_subtracted = 0.0;             // diagnostics: largest removed term
};

/// u_samples[point][freq]; spatial_residues[pole][point].
SubtractedField subtract(const std::vector<std::vector<cplx>>& u_samples,
                         const std::vector<double>& grid, const std::vector<cplx>& poles,
                         const std::vector<std::vector<cplx>>& spatial_residues);

/// t* = onset + log(C / target_tol)/h with a measured constant C (clamped to
/// onset). onset = T_inc for compactly supported traces, h/sigma^2 for the
/// analytic Gaussian.
struct SwitchTime {
  double onset = 0.0;
  double t_star = 0.0;
  double constant = 0.0;   // measured cross-validation constant C
  bool unreachable = false;  // target_tol below the band-edge tail
};

/// Evaluator for the singular integrals
///   q_n(t) = int_{W1}^{W2} A(w)/(w - rho_n) e^{-iwt} dw,
/// pre-asymptotic by regularized Clenshaw-Curtis plus the analytic log term,
/// late-time by the residue asymptotics -2 pi i A(rho_n) e^{-i rho_n t}.
class I2Evaluator {
 public:
  I2Evaluator(std::function<cplx(cplx)> spectrum, double w1, double w2, std::vector<cplx> poles,
              double onset, double target_tol, double depth_h, double tail_bound = 0.0,
              int n_cheb = 256, int n_cap = 4096);

  cplx quadrature_term(size_t n, double t) const;
  cplx asymptotic_term(size_t n, double t) const;   // -2 pi i A(rho_n) e^{-i rho_n t}
  /// dispatched by t against t*; quadrature_only forces the pre-asymptotic branch
  cplx term(size_t n, double t, bool quadrature_only = false) const;

  /// I2 contribution at one time for every observation point:
  /// (1/2pi) sum_n c_n(r) q_n(t); `spatial` has one row per point.
  std::vector<cplx> eval(const MatrixXcd& spatial, double t, bool quadrature_only = false) const;

  const SwitchTime& switch_time() const { return switch_; }
  double branch_gap() const { return branch_gap_; }
  size_t pole_count() const { return poles_.size(); }
  cplx spectrum_at_pole(size_t n) const { return a_rho_[n]; }

 private:
  struct Level {
    int n = 0;
    std::vector<double> nodes;    // on [w1, w2]
    std::vector<double> weights;  // Clenshaw-Curtis
    std::vector<cplx> a_values;   // spectrum at the nodes
  };
  const Level& level_for(double t) const;

  std::function<cplx(cplx)> spectrum_;
  double w1_, w2_;
  std::vector<cplx> poles_;
  std::vector<cplx> a_rho_;
  double scale_a_ = 0.0;  // max |A| on the band
  double target_tol_;
  int n_cap_;
  mutable std::vector<Level> levels_;
  SwitchTime switch_;
  double branch_gap_ = 0.0;
};

/// Clenshaw-Curtis nodes/weights on [-1,1] (n+1 points including endpoints).
void clenshaw_curtis(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace fthss
