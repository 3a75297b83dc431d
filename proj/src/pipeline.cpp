#include "fthss/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <memory>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace fthss {

double SimulationConfig::eta_value() const {
  if (!eta_auto) return eta;
  const double mid = 0.5 * (incident.w1 + incident.w2);
  return -(mid >= 0 ? 1.0 : -1.0) * std::max(1.0, std::abs(mid));
}

std::vector<double> SimulationConfig::frequency_grid() const {
  std::vector<double> g(static_cast<size_t>(j_frequencies));
  for (int j = 0; j < j_frequencies; ++j)
    g[static_cast<size_t>(j)] =
        incident.w1 + (incident.w2 - incident.w1) * j / double(j_frequencies - 1);
  return g;
}

std::vector<double> SimulationConfig::time_grid() const {
  std::vector<double> t(static_cast<size_t>(nt));
  for (int i = 0; i < nt; ++i)
    t[static_cast<size_t>(i)] = (nt == 1) ? t_begin : t_begin + (t_end - t_begin) * i / double(nt - 1);
  return t;
}

Scatterer scatterer_from_config(const SimulationConfig& cfg) {
  if (!cfg.curve_file.empty()) {
    Scatterer sc;
    sc.parts.push_back(load_fourier_curve(cfg.curve_file));
    return sc;
  }
  return make_scatterer(cfg.curve, cfg.curve_params);
}

namespace {

// window phase factor bookkeeping for the chirp partition; a gaussian profile
// bypasses windowing entirely (its spectrum is already slow)
struct WindowPlan {
  bool windowed = false;
  quad::WindowPartition part;
  std::vector<std::vector<cplx>> a_slow;  // [k][freq]
};

WindowPlan make_window_plan(const SimulationConfig& cfg, const std::vector<double>& grid) {
  WindowPlan plan;
  if (cfg.incident.gaussian()) return plan;
  plan.windowed = true;
  plan.part = quad::WindowPartition::for_duration(cfg.incident.t_inc);
  plan.a_slow.resize(static_cast<size_t>(plan.part.K));
  auto amp = [&](double t) { return cfg.incident.amplitude(t); };
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers > 0 ? cfg.workers : omp_get_max_threads())
  for (int k = 1; k <= plan.part.K; ++k) {
    auto ws = quad::windowed_spectrum(amp, k, plan.part, grid, cfg.incident.rate_hint);
    plan.a_slow[static_cast<size_t>(k - 1)] = std::move(ws.samples);
  }
  return plan;
}

FieldResult run_impl(const SimulationConfig& cfg, bool with_subtraction) {
  const auto wall0 = std::chrono::steady_clock::now();
  if (cfg.j_frequencies < 8) throw std::invalid_argument("pipeline: need at least 8 frequencies");
  if (cfg.nt < 1) throw std::invalid_argument("pipeline: empty time grid");

  FieldResult out;
  out.seed = cfg.seed;
  out.config_hash = config_hash(cfg);
  out.t_grid = cfg.time_grid();
  out.diag.tail_bound = cfg.incident.tail_bound;

  Scatterer sc = scatterer_from_config(cfg);
  Discretization disc = discretize(sc, cfg.n_boundary);
  FrequencySolver solver(&disc, cfg.eta_value(), cfg.wavespeed, cfg.workers);
  const Vec2 p = cfg.incident.direction;
  const auto grid = cfg.frequency_grid();
  std::vector<cplx> grid_c(grid.begin(), grid.end());

  // resonance search (FTH-SS); its level-0 grid equals the integration grid,
  // so the densities on F are cache hits and never new factorizations
  IEResult ie;
  MatrixXcd spatial(static_cast<Eigen::Index>(cfg.points.size()), 0);
  if (with_subtraction) {
    IEOptions opt;
    opt.j = cfg.j_frequencies;
    opt.tol = cfg.ie_tol;
    opt.m_max = cfg.m_max;
    opt.depth = cfg.depth_h;
    opt.sketch_l = cfg.sketch_l;
    opt.seed = cfg.seed;
    opt.adaptive = cfg.j_frequencies >= 200;
    ie = ie_adaptive(solver, p, SearchBox{cfg.incident.w1, cfg.incident.w2, cfg.depth_h}, opt);
    out.resonances = ie.poles;
    out.diag.ie_intervals = static_cast<int>(ie.intervals.size());
    out.diag.ie_aborted = ie.aborted;

    spatial.resize(static_cast<Eigen::Index>(cfg.points.size()),
                   static_cast<Eigen::Index>(ie.poles.size()));
    for (size_t n = 0; n < ie.poles.size(); ++n) {
      auto col = spatial_residues(solver, ie.poles[n].pole, ie.poles[n].density_residue, cfg.points);
      for (size_t q = 0; q < cfg.points.size(); ++q)
        spatial(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n)) = col[q];
    }
  }
  out.diag.factorizations_search = solver.counters.factorizations;

  // densities on F: direct solves for plain FTH; for FTH-SS these are cache
  // hits from the search (approximant fallback if a frequency was never solved)
  std::vector<VectorXcd> densities;
  if (with_subtraction) {
    densities.resize(grid.size());
    auto cached = solver.density_batch(grid_c, p);  // all hits: level-0 grid == F
    for (size_t j = 0; j < grid.size(); ++j) densities[j] = std::move(cached[j]);
  } else {
    densities = solver.density_batch(grid_c, p);
  }

  // fields on F x R (quadrature only, no factorizations)
  std::vector<std::vector<cplx>> u_freq(cfg.points.size(), std::vector<cplx>(grid.size()));
  {
    const int nw = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    const int nj = static_cast<int>(grid.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(nw)
    for (int j = 0; j < nj; ++j) {
      auto vals = eval_potential(disc, densities[static_cast<size_t>(j)], grid[static_cast<size_t>(j)],
                                 solver.eta(), cfg.points, solver.representation(), cfg.wavespeed,
                                 cfg.near_cutoff, 1);
      for (size_t q = 0; q < cfg.points.size(); ++q) u_freq[q][static_cast<size_t>(j)] = vals[q];
    }
  }

  // subtraction
  std::vector<cplx> pole_locs;
  std::vector<std::vector<cplx>> res_rows;
  for (size_t n = 0; n < out.resonances.size(); ++n) {
    pole_locs.push_back(out.resonances[n].pole);
    std::vector<cplx> row(cfg.points.size());
    for (size_t q = 0; q < cfg.points.size(); ++q)
      row[q] = spatial(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n));
    res_rows.push_back(std::move(row));
  }
  SubtractedField us = subtract(u_freq, grid, pole_locs, res_rows);

  // window plan and per-(point, window) oscillatory rules for I1
  WindowPlan plan = make_window_plan(cfg, grid);
  const int n_windows = plan.windowed ? plan.part.K : 1;
  std::vector<std::vector<quad::OscillatoryRule>> rules(cfg.points.size());
  for (size_t q = 0; q < cfg.points.size(); ++q) {
    for (int k = 0; k < n_windows; ++k) {
      std::vector<cplx> f(grid.size());
      for (size_t j = 0; j < grid.size(); ++j) {
        const cplx aks = plan.windowed ? plan.a_slow[static_cast<size_t>(k)][j]
                                       : cfg.incident.bspec(grid[j]);
        f[j] = aks * us.samples[q][j];
      }
      // band-edge tails up to eps^I are part of the configured accuracy floor
      quad::OscillatoryRule::Options opt;
      opt.endpoint_tol = 0.9;
      rules[q].emplace_back(f, cfg.incident.w1, cfg.incident.w2, opt);
    }
  }

  // singular part
  std::unique_ptr<I2Evaluator> i2;
  if (with_subtraction && !pole_locs.empty()) {
    const double onset = cfg.incident.gaussian() ? cfg.depth_h / cfg.incident.sigma2
                                                 : cfg.incident.t_inc;
    auto spectrum = [inc = cfg.incident](cplx w) { return inc.bspec(w); };
    i2 = std::make_unique<I2Evaluator>(spectrum, cfg.incident.w1, cfg.incident.w2, pole_locs,
                                       onset, cfg.tol, cfg.depth_h, cfg.incident.tail_bound);
    out.diag.switch_time = i2->switch_time().t_star;
    out.diag.branch_gap = i2->branch_gap();
  }

  // synthesis over the time grid
  out.u.assign(cfg.points.size(), std::vector<cplx>(out.t_grid.size()));
  {
    const int nw = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    const int ntimes = static_cast<int>(out.t_grid.size());
#pragma omp parallel for schedule(static) num_threads(nw)
    for (int i = 0; i < ntimes; ++i) {
      const double t = out.t_grid[static_cast<size_t>(i)];
      std::vector<cplx> u2;
      if (i2) u2 = i2->eval(spatial, t, cfg.i2_quadrature_only);
      for (size_t q = 0; q < cfg.points.size(); ++q) {
        cplx acc = 0.0;
        for (int k = 0; k < n_windows; ++k) {
          const double shift = plan.windowed ? plan.part.center(k + 1) : 0.0;
          acc += rules[q][static_cast<size_t>(k)].eval(t - shift) / (2.0 * M_PI);
        }
        if (i2) acc += u2[q];
        out.u[q][static_cast<size_t>(i)] = acc;
      }
    }
  }

  out.diag.counters = solver.counters;
  out.diag.factorizations_total = solver.counters.factorizations;
  out.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return out;
}

} // namespace

FieldResult run_fth(const SimulationConfig& cfg) { return run_impl(cfg, false); }

FieldResult run_fth_ss(const SimulationConfig& cfg) { return run_impl(cfg, true); }

FieldResult reference_brute_force(SimulationConfig cfg, int multiplier) {
  if (multiplier < 4) throw std::invalid_argument("reference_brute_force: multiplier must be >= 4");
  if (static_cast<long>(cfg.j_frequencies) * multiplier > 100000)
    throw std::runtime_error("reference_brute_force: resource guard: refusing > 1e5 solves");
  cfg.j_frequencies *= multiplier;
  cfg.n_boundary *= 2;
  cfg.i2_quadrature_only = true;
  cfg.mode = RunMode::FTHSS;
  return run_fth_ss(cfg);
}

FieldResult mie_reference(const SimulationConfig& cfg) {
  if (cfg.curve != "unit-circle")
    throw std::invalid_argument("mie_reference: closed disk only");
  const double radius = cfg.curve_params.empty() ? 1.0 : cfg.curve_params[0];
  MieReference mie(radius, cfg.incident, cfg.wavespeed);
  FieldResult out;
  out.seed = cfg.seed;
  out.config_hash = config_hash(cfg);
  out.t_grid = cfg.time_grid();
  out.u = mie.time_field(cfg.points, out.t_grid, cfg.tol);
  out.diag.tail_bound = cfg.incident.tail_bound;
  return out;
}

DecaySeries run_decay(const SimulationConfig& cfg) {
  SimulationConfig c = cfg;
  c.mode = RunMode::FTHSS;
  c.points.resize(1);

  Scatterer sc = scatterer_from_config(c);
  Discretization disc = discretize(sc, c.n_boundary);
  FrequencySolver solver(&disc, c.eta_value(), c.wavespeed, c.workers);
  const auto grid = c.frequency_grid();
  std::vector<cplx> grid_c(grid.begin(), grid.end());

  IEOptions opt;
  opt.j = c.j_frequencies;
  opt.tol = c.ie_tol;
  opt.m_max = c.m_max;
  opt.depth = c.depth_h;
  opt.sketch_l = c.sketch_l;
  opt.seed = c.seed;
  opt.adaptive = c.j_frequencies >= 200;
  IEResult ie = ie_adaptive(solver, c.incident.direction,
                            SearchBox{c.incident.w1, c.incident.w2, c.depth_h}, opt);

  DecaySeries out;
  out.t = c.time_grid();
  out.resonances = ie.poles;
  out.onset = c.incident.gaussian() ? c.depth_h / c.incident.sigma2 : c.incident.t_inc;

  // spatial residues at the point, subtraction, I1 rules
  MatrixXcd spatial(1, static_cast<Eigen::Index>(ie.poles.size()));
  std::vector<cplx> pole_locs;
  std::vector<std::vector<cplx>> res_rows;
  for (size_t n = 0; n < ie.poles.size(); ++n) {
    auto col = spatial_residues(solver, ie.poles[n].pole, ie.poles[n].density_residue, c.points);
    spatial(0, static_cast<Eigen::Index>(n)) = col[0];
    pole_locs.push_back(ie.poles[n].pole);
    res_rows.push_back({col[0]});
  }

  auto densities = solver.density_batch(grid_c, c.incident.direction);
  std::vector<std::vector<cplx>> u_freq(1, std::vector<cplx>(grid.size()));
  for (size_t j = 0; j < grid.size(); ++j) {
    auto vals = eval_potential(disc, densities[j], grid[j], solver.eta(), c.points,
                               solver.representation(), c.wavespeed, c.near_cutoff, c.workers);
    u_freq[0][j] = vals[0];
  }
  SubtractedField us = subtract(u_freq, grid, pole_locs, res_rows);

  WindowPlan plan = make_window_plan(c, grid);
  const int n_windows = plan.windowed ? plan.part.K : 1;
  std::vector<quad::OscillatoryRule> rules;
  for (int k = 0; k < n_windows; ++k) {
    std::vector<cplx> f(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) {
      const cplx aks =
          plan.windowed ? plan.a_slow[static_cast<size_t>(k)][j] : c.incident.bspec(grid[j]);
      f[j] = aks * us.samples[0][j];
    }
    quad::OscillatoryRule::Options ropt;
    ropt.endpoint_tol = 0.9;
    rules.emplace_back(f, c.incident.w1, c.incident.w2, ropt);
  }

  std::unique_ptr<I2Evaluator> i2;
  if (!pole_locs.empty()) {
    auto spectrum = [inc = c.incident](cplx w) { return inc.bspec(w); };
    i2 = std::make_unique<I2Evaluator>(spectrum, c.incident.w1, c.incident.w2, pole_locs,
                                       out.onset, c.tol, c.depth_h, c.incident.tail_bound);
  }

  out.i1.resize(out.t.size());
  out.i2.resize(out.t.size());
  out.eps2.resize(out.t.size());
  for (size_t i = 0; i < out.t.size(); ++i) {
    const double t = out.t[i];
    cplx i1 = 0.0;
    for (int k = 0; k < n_windows; ++k) {
      const double shift = plan.windowed ? plan.part.center(k + 1) : 0.0;
      i1 += rules[static_cast<size_t>(k)].eval(t - shift) / (2.0 * M_PI);
    }
    out.i1[i] = i1;
    cplx q = 0.0, asym = 0.0;
    for (size_t n = 0; n < pole_locs.size(); ++n) {
      q += spatial(0, static_cast<Eigen::Index>(n)) * i2->quadrature_term(n, t);
      asym += spatial(0, static_cast<Eigen::Index>(n)) * i2->asymptotic_term(n, t);
    }
    out.i2[i] = q / (2.0 * M_PI);
    out.eps2[i] = std::abs(q - asym) / (2.0 * M_PI);
  }

  // least-squares slope of log eps2 past the onset
  std::vector<double> xs, ys;
  for (size_t i = 0; i < out.t.size(); ++i)
    if (out.t[i] > out.onset + 1.0 && out.eps2[i] > 1e-15) {
      xs.push_back(out.t[i]);
      ys.push_back(std::log(out.eps2[i]));
    }
  if (xs.size() >= 10) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.fit_valid = true;
  } else {
    std::cerr << "[pipeline] run_decay: fewer than 10 informative post-onset samples; fit refused\n";
  }
  return out;
}

std::vector<std::vector<cplx>> incident_time_field(const SimulationConfig& cfg,
                                                   const std::vector<Vec2>& points) {
  const auto grid = cfg.frequency_grid();
  const auto t_grid = cfg.time_grid();
  std::vector<std::vector<cplx>> out(points.size());
  const Vec2 p = cfg.incident.direction;
  for (size_t q = 0; q < points.size(); ++q) {
    std::vector<cplx> f(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) {
      const double phase = (p.x * points[q].x + p.y * points[q].y) / cfg.wavespeed;
      // u_inc = -(1/2pi) int bspec e^{i w p.r / c} e^{-iwt} dw
      f[j] = -cfg.incident.bspec(grid[j]) * std::exp(cplx(0, grid[j] * phase));
    }
    quad::OscillatoryRule::Options opt;
    opt.endpoint_tol = 0.9;
    quad::OscillatoryRule rule(f, cfg.incident.w1, cfg.incident.w2, opt);
    out[q].resize(t_grid.size());
    for (size_t i = 0; i < t_grid.size(); ++i) out[q][i] = rule.eval(t_grid[i]) / (2.0 * M_PI);
  }
  return out;
}

} // namespace fthss
