#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "fthss/geometry.hpp"
#include "fthss/special_functions.hpp"

namespace fthss {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// 2D Helmholtz free-space Green function (i/4) H_0^(1)((w/c)|r-r'|).
cplx green(cplx omega, Vec2 r, Vec2 rp, double c = 1.0);

/// Plane-wave trace (e^{i k(w) p.r_i})_i, k = w/c.
VectorXcd plane_wave_trace(const Discretization& disc, cplx omega, Vec2 p, double c = 1.0);

enum class Representation { SingleLayerArc, CombinedField };

/// Dense Nystrom matrix of the combined-field operator (closed curves) or of
/// the cosine-transformed single-layer operator (open arcs), with a lazily
/// computed LU factorization reused across right-hand sides.
class OperatorMatrix {
 public:
  OperatorMatrix(MatrixXcd entries, const Discretization* disc, cplx omega, double eta)
      : entries_(std::move(entries)), disc_(disc), omega_(omega), eta_(eta) {}

  const MatrixXcd& entries() const { return entries_; }
  cplx omega() const { return omega_; }
  double eta() const { return eta_; }
  const Discretization* disc() const { return disc_; }
  bool factorized() const { return lu_ != nullptr; }

  /// Solve against one right-hand side; factorizes on first use. Throws
  /// SingularOperator if the 1-norm condition estimate exceeds 1/eps.
  VectorXcd solve(const VectorXcd& rhs) const;

  /// Hager-style 1-norm condition estimate (factorizes on first use).
  double condition_estimate() const;

 private:
  void ensure_factorized() const;
  MatrixXcd entries_;
  const Discretization* disc_;
  cplx omega_;
  double eta_;
  mutable std::shared_ptr<Eigen::PartialPivLU<MatrixXcd>> lu_;
};

struct SingularOperator : std::runtime_error {
  cplx omega;
  SingularOperator(cplx w, const std::string& msg) : std::runtime_error(msg), omega(w) {}
};

/// Combined-field matrix psi/2 + K_w psi - i eta S_w psi via the kernel-split
/// (Martensen-Kussmaul) spectral quadrature. Closed single curves only.
OperatorMatrix assemble_closed(const Discretization& disc, cplx omega, double eta, double c = 1.0,
                               int workers = 0);

/// Cosine-transformed single-layer matrix for one or more open arcs: the log
/// part is integrated exactly against cosine modes, the smooth remainder by
/// the midpoint rule in theta (spectral for the even periodic extension).
OperatorMatrix assemble_arc(const Discretization& disc, cplx omega, double c = 1.0, int workers = 0);

OperatorMatrix assemble(const Discretization& disc, cplx omega, double eta, double c = 1.0,
                        int workers = 0);

struct DensityVector {
  VectorXcd values;
  cplx omega;
  Vec2 direction{};
};

/// Layer-potential evaluation at exterior points. Points closer to the
/// boundary than cutoff_frac * diameter are refused (no near-field quadrature
/// is provided).
std::vector<cplx> eval_potential(const Discretization& disc, const VectorXcd& density, cplx omega,
                                 double eta, const std::vector<Vec2>& points, Representation rep,
                                 double c = 1.0, double cutoff_frac = 0.05, int workers = 0);

/// Debug dump: little-endian binary, header {u64 N, f64 Re w, f64 Im w, f64 eta},
/// then row-major complex entries.
void dump_matrix(const OperatorMatrix& op, const std::string& path);
void dump_density(const VectorXcd& density, cplx omega, double eta, const std::string& path);

/// Plain sequential implementations kept as the comparison baseline for the
/// OpenMP kernels (tests assert exact agreement; the bench tool times both).
namespace serial_ref {
MatrixXcd assemble_closed_entries(const Discretization& disc, cplx omega, double eta, double c);
MatrixXcd assemble_arc_entries(const Discretization& disc, cplx omega, double c);
std::vector<cplx> eval_potential(const Discretization& disc, const VectorXcd& density, cplx omega,
                                 double eta, const std::vector<Vec2>& points, Representation rep,
                                 double c);
}

} // namespace fthss
