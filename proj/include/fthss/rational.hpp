#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fthss {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Barycentric rational approximant R(w) = sum v_j F_j/(w-w_j) / sum v_j/(w-w_j),
/// shared denominator across vector components.
struct RationalApproximant {
  std::vector<cplx> support;   // pairwise distinct support points
  VectorXcd weights;           // ||v||_2 = 1
  MatrixXcd values;            // N_dim x m, column j = F(support[j])
  double achieved_error = 0.0; // max |R - F| over the sample set
  double sample_scale = 0.0;   // max |F| over the sample set (tolerance reference)
  bool converged = false;
  // metadata for serialization / reproducibility
  double tol = 0.0;
  uint64_t seed = 0;
  int sketch_l = 0;
  double interval_lo = 0.0, interval_hi = 0.0;

  int order() const { return static_cast<int>(support.size()); }
  int dim() const { return static_cast<int>(values.rows()); }

  VectorXcd eval(cplx w) const;          // exact at support points
  cplx eval_component(cplx w, int n) const;
  cplx denominator(cplx w) const;        // sum v_j/(w - w_j)
  /// long-double accumulation: used close to poles, where the barycentric
  /// denominator cancels heavily
  VectorXcd eval_precise(cplx w) const;
  /// evaluation at center + offset with the sum formed in long double: keeps
  /// tiny contour radii exact relative to the pole location
  VectorXcd eval_offset(cplx center, cplx offset) const;

  /// |den(rho)| * dist(rho, support) / max|v|: small iff rho is a true
  /// denominator root (the no-fabricated-poles check).
  double denominator_root_defect(cplx rho) const;
};

struct PoleSet {
  std::vector<cplx> poles;
  std::vector<VectorXcd> residues;  // per pole, one value per component
};

/// Greedy AAA on scalar data: support point at the max-residual sample,
/// weights from the smallest right singular vector of the Loewner matrix.
RationalApproximant aaa_scalar(const std::vector<cplx>& samples, const std::vector<cplx>& f,
                               double tol = 1e-10, int m_max = 100);

/// Vector-valued AAA with a shared denominator (stacked block-Loewner system).
RationalApproximant aaa_vector(const std::vector<cplx>& samples, const MatrixXcd& f,
                               double tol = 1e-10, int m_max = 100);

/// Random-sketching AAA: runs aaa_vector on V^T f for a seeded complex Gaussian
/// V (N_dim x l), then substitutes the full vectors at the chosen support
/// points. achieved_error / converged are re-measured on the full data.
RationalApproximant aaa_sketch(const std::vector<cplx>& samples, const MatrixXcd& f, int l,
                               double tol = 1e-10, int m_max = 100, uint64_t seed = 1);

/// Poles as the finite eigenvalues of the (m+1)x(m+1) arrowhead pencil,
/// residues by the quotient-derivative rule.
PoleSet poles_and_residues(const RationalApproximant& r);

/// Froissart cleanup: drop poles whose max-component residue is below
/// drop_tol * sample scale by deleting the nearest support point and
/// re-solving the weights, iterated until clean.
RationalApproximant cleanup(const RationalApproximant& r, const std::vector<cplx>& samples,
                            const MatrixXcd& f, double drop_tol = 1e-13);

std::string to_text(const RationalApproximant& r);
RationalApproximant from_text(const std::string& text);
void save_approximant(const RationalApproximant& r, const std::string& path);
RationalApproximant load_approximant(const std::string& path);

} // namespace fthss
