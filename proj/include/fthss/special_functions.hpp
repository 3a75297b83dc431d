#pragma once

#include <complex>
#include <vector>

namespace fthss {

using cplx = std::complex<double>;

/// Cylinder functions of complex argument, built for the lower half plane
/// (Im z <= 0, |z| up to ~1e3) where frequency-domain scattering needs them.
/// Ascending series below |z| = 15, Hankel-type asymptotic expansions above;
/// the two branches agree to ~1e-13 in the overlap.
namespace bessel {

cplx j0(cplx z);
cplx y0(cplx z);
cplx j1(cplx z);
cplx y1(cplx z);
cplx h0(cplx z);   ///< H_0^(1)(z) = J_0 + i Y_0
cplx h1(cplx z);   ///< H_1^(1)(z)

struct Order01 {
  cplx j0, h0, j1, h1;
};
/// both orders in one pass; the kernel assembly hot path
Order01 order01(cplx z);

/// J_0..J_nmax by Miller's downward recurrence (any complex z != 0).
std::vector<cplx> jn_sequence(int nmax, cplx z);
/// Y_0..Y_nmax by upward recurrence (dominant solution, stable).
std::vector<cplx> yn_sequence(int nmax, cplx z);
/// H_0^(1)..H_nmax^(1).
std::vector<cplx> hn_sequence(int nmax, cplx z);

} // namespace bessel
} // namespace fthss
