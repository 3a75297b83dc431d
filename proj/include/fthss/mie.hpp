#pragma once

#include "fthss/geometry.hpp"
#include "fthss/incident.hpp"

namespace fthss {

/// Separation-of-variables reference for the closed disk: the cylindrical
/// harmonic series with coefficients J_m(ka)/H_m(ka), truncated adaptively,
/// and a self-refining composite Gauss-Legendre band inverse transform.
class MieReference {
 public:
  MieReference(double radius, const IncidentField& inc, double c = 1.0,
               double series_tol = 1e-14);

  /// Helmholtz solution with boundary data e^{i k p.r} on |r| = a, at omega > 0.
  cplx frequency_field(double omega, Vec2 r) const;

  /// u(r,t) = (1/2pi) int_I bspec(w) U_p(r,w) e^{-iwt} dw.
  std::vector<std::vector<cplx>> time_field(const std::vector<Vec2>& points,
                                            const std::vector<double>& t_grid,
                                            double tol = 1e-9) const;

 private:
  double a_, c_, series_tol_;
  IncidentField inc_;
};

} // namespace fthss
