#pragma once

#include <cstdint>

#include "fthss/geometry.hpp"
#include "fthss/incident.hpp"
#include "fthss/mie.hpp"
#include "fthss/resonance.hpp"
#include "fthss/singsub.hpp"

namespace fthss {

enum class RunMode { FTH, FTHSS };

struct SimulationConfig {
  std::string curve = "unit-circle";
  std::vector<double> curve_params;
  std::string curve_file;  // closed curve from Fourier coefficients, overrides `curve`
  int n_boundary = 256;
  IncidentField incident;
  int j_frequencies = 400;
  double depth_h = 0.5;
  bool eta_auto = true;  // band-constant coupling -max(1, |band midpoint|)
  double eta = 0.0;
  std::vector<Vec2> points{{0.0, 0.0}};
  double t_begin = 0.0, t_end = 20.0;
  int nt = 500;
  double tol = 1e-9;             // synthesis target (switch time, references)
  RunMode mode = RunMode::FTHSS;
  bool i2_quadrature_only = false;
  uint64_t seed = 1;
  int workers = 0;
  int sketch_l = 4;
  int m_max = 100;
  double ie_tol = 1e-10;
  double wavespeed = 1.0;
  double near_cutoff = 0.05;

  double eta_value() const;
  std::vector<double> frequency_grid() const;
  std::vector<double> time_grid() const;
};

struct Diagnostics {
  SolveCounters counters;
  long factorizations_search = 0;  // consumed by the resonance search
  long factorizations_total = 0;   // reuse contract: equals factorizations_search for FTH-SS
  double switch_time = 0.0;
  double branch_gap = 0.0;
  double tail_bound = 0.0;
  int ie_intervals = 0;
  bool ie_aborted = false;
  double wall_seconds = 0.0;
};

struct FieldResult {
  std::vector<double> t_grid;
  std::vector<std::vector<cplx>> u;  // [point][time], scattered field
  std::vector<ResonancePair> resonances;
  Diagnostics diag;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
};

FieldResult run_fth(const SimulationConfig& cfg);
FieldResult run_fth_ss(const SimulationConfig& cfg);

/// Test-grade reference: J x multiplier frequencies, 2 x boundary nodes,
/// subtraction on, I2 by quadrature at every time. Refuses > 1e5 solves.
FieldResult reference_brute_force(SimulationConfig cfg, int multiplier);

/// Disk-only separation-of-variables reference on the configured grids.
FieldResult mie_reference(const SimulationConfig& cfg);

/// Band-limited incident field at arbitrary points (for total-field output).
std::vector<std::vector<cplx>> incident_time_field(const SimulationConfig& cfg,
                                                   const std::vector<Vec2>& points);

/// Decay study at the first observation point: I1, quadrature-branch I2, and
/// eps2 = |I2 - I2_asymptotic| with a post-onset log-slope fit.
struct DecaySeries {
  std::vector<double> t;
  std::vector<cplx> i1, i2;
  std::vector<double> eps2;
  double onset = 0.0;
  double slope = 0.0;       // fitted d(log eps2)/dt past the onset
  bool fit_valid = false;   // needs >= 10 informative post-onset samples
  std::vector<ResonancePair> resonances;
};
DecaySeries run_decay(const SimulationConfig& cfg);

Scatterer scatterer_from_config(const SimulationConfig& cfg);
uint64_t config_hash(const SimulationConfig& cfg);  // FNV-1a of the canonical text

} // namespace fthss
