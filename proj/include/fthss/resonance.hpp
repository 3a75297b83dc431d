#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "fthss/helmholtz.hpp"
#include "fthss/rational.hpp"

namespace fthss {

/// Search region M_h^I = { Re w in [w1,w2], Im w in [-depth, 0] }.
struct SearchBox {
  double w1 = 0.0, w2 = 0.0, depth = 0.5;
};

struct ResonancePair {
  cplx pole;
  VectorXcd density_residue;  // residue of the boundary density at the pole
  double residue_l2 = 0.0;    // L2(Gamma) norm of the density residue
  double relevance = 0.0;     // residue_l2 / |Im pole|
  int interval_id = -1;
};

struct SolveCounters {
  long assemblies = 0;
  long factorizations = 0;
  long solves = 0;          // right-hand sides pushed through a factorization
  long cache_hits = 0;
  long approximant_evals = 0;
};

/// Per-frequency boundary solver with a bit-stable solve cache (omega rounded
/// to 14 significant digits) and cost counters. Factorizations at distinct
/// frequencies run as independent parallel batch members.
class FrequencySolver {
 public:
  FrequencySolver(const Discretization* disc, double eta, double c = 1.0, int workers = 0);

  /// density for boundary data e^{i k p.r} (cached)
  VectorXcd density(cplx omega, Vec2 p);
  /// batch form: solves all missing frequencies in parallel, then serves from cache
  std::vector<VectorXcd> density_batch(const std::vector<cplx>& omegas, Vec2 p);

  std::vector<cplx> potential(const VectorXcd& dens, cplx omega, const std::vector<Vec2>& points,
                              double cutoff_frac = 0.05);

  const Discretization& disc() const { return *disc_; }
  double eta() const { return eta_; }
  double wavespeed() const { return c_; }
  int workers() const { return workers_; }
  Representation representation() const {
    return disc_->closed() ? Representation::CombinedField : Representation::SingleLayerArc;
  }

  SolveCounters counters;

 private:
  std::string key(cplx omega, Vec2 p) const;
  const Discretization* disc_;
  double eta_;
  double c_;
  int workers_;
  std::map<std::string, VectorXcd> cache_;
};

struct IEOptions {
  int j = 250;              // frequencies per interval
  double tol = 1e-10;       // AAA tolerance (relative to the sample scale)
  int m_max = 100;
  double depth = 0.5;       // box depth h
  int sketch_l = 4;
  uint64_t seed = 1;
  int max_recursion = 8;
  double residue_radius = 1e-5;
  int residue_points = 10;  // J_C
  double merge_tol = 1e-8;
  double drop_tol = 1e-13;  // Froissart cleanup
  bool adaptive = true;     // false: one pass with m_max = j/2, no bisection
};

struct IEInterval {
  double w1 = 0.0, w2 = 0.0;
  RationalApproximant approximant;
};

struct IEResult {
  std::vector<IEInterval> intervals;   // tile [w1, w2] left to right
  std::vector<ResonancePair> poles;
  SearchBox box;
  bool aborted = false;                // recursion limit hit; partial result
  int max_depth_reached = 0;

  /// density at a frequency from the owning interval's approximant
  VectorXcd density_from_approximants(double omega, SolveCounters* counters = nullptr) const;
  const IEInterval& interval_for(double omega) const;
};

/// Adaptive incidence-excited resonance search on real-frequency solves:
/// bisects until the random-sketch approximant converges per subinterval, then
/// extracts box poles, contour density residues, and relevance.
IEResult ie_adaptive(FrequencySolver& solver, Vec2 p, SearchBox box, IEOptions opt = {});

/// Contour density residue (1/2pi i) oint R(w) dw on |w - rho| = radius by the
/// J_C-point trapezoid rule, shrinking the radius up to three times if another
/// pole intrudes.
VectorXcd density_residues(const RationalApproximant& r, cplx rho, int j_c = 10,
                           double radius = 1e-5);

/// Spatial residues c(r) by applying the layer representation at the complex pole.
std::vector<cplx> spatial_residues(FrequencySolver& solver, cplx rho, const VectorXcd& chat,
                                   const std::vector<Vec2>& points);

/// ||chat||_{L2(Gamma)} / |Im rho|; infinite (flagged) for a real pole.
double relevance_metric(const VectorXcd& chat, const Discretization& disc, cplx rho);
double l2_norm(const VectorXcd& values, const Discretization& disc);

struct REOptions {
  int samples_per_edge = 40;
  double tol = 1e-10;
  int m_max = 100;
  uint64_t seed = 7;
  int max_depth = 6;
  double match_tol = 1e-7;  // "no new poles" comparison
};

struct REResult {
  std::vector<cplx> poles;
  std::vector<cplx> scalar_residues;
  bool aborted = false;
};

/// Random-excitation search: scalar AAA on u* H_w^{-1} v sampled along the box
/// boundary, dyadic subdivision until no new poles appear.
REResult re_adaptive(const std::function<OperatorMatrix(cplx)>& family, cplx corner_lo,
                     cplx corner_hi, REOptions opt = {});

/// Pole/residue table export: columns Re, Im, residue-norm, relevance, interval id.
void write_pole_csv(const std::vector<ResonancePair>& poles, const std::string& path);

} // namespace fthss
