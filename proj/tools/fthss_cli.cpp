// Command-line front end: resonance tables, field time series, grid
// snapshots, decay studies, FTH vs FTH-SS comparisons, and window debugging.
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 resource guard.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "fthss/config.hpp"
#include "fthss/csv.hpp"
#include "fthss/pipeline.hpp"

using namespace fthss;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--override", args.overrides, "key=value config overrides");
  cmd->add_flag("-v", args.verbosity, "verbosity");
}

SimulationConfig load(const CommonArgs& args) {
  auto cfg = load_config(args.config_path, args.overrides);
  fs::create_directories(args.out_dir);
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool inside_closed(const Discretization& disc, Vec2 p) {
  if (!disc.closed()) return false;
  // crossing-number test on the node polygon
  const auto& nodes = disc.parts[0].nodes;
  bool in = false;
  for (size_t i = 0, j = nodes.size() - 1; i < nodes.size(); j = i++) {
    const Vec2 a = nodes[i], b = nodes[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

int cmd_resonances(const CommonArgs& args, bool cross_validate) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  Scatterer sc = scatterer_from_config(cfg);
  Discretization disc = discretize(sc, cfg.n_boundary);
  FrequencySolver solver(&disc, cfg.eta_value(), cfg.wavespeed, cfg.workers);

  IEOptions opt;
  opt.j = cfg.j_frequencies;
  opt.tol = cfg.ie_tol;
  opt.m_max = cfg.m_max;
  opt.depth = cfg.depth_h;
  opt.sketch_l = cfg.sketch_l;
  opt.seed = cfg.seed;
  opt.adaptive = cfg.j_frequencies >= 200;
  auto ie = ie_adaptive(solver, cfg.incident.direction,
                        SearchBox{cfg.incident.w1, cfg.incident.w2, cfg.depth_h}, opt);

  auto poles = ie.poles;
  std::sort(poles.begin(), poles.end(),
            [](const ResonancePair& a, const ResonancePair& b) { return a.relevance > b.relevance; });
  write_pole_csv(poles, join(args.out_dir, "poles.csv"));
  for (size_t l = 0; l < ie.intervals.size(); ++l)
    save_approximant(ie.intervals[l].approximant,
                     join(args.out_dir, "approximant_" + std::to_string(l) + ".txt"));

  if (cross_validate) {
    auto family = [&](cplx w) { return assemble(disc, w, cfg.eta_value(), cfg.wavespeed, 1); };
    REOptions ropt;
    ropt.seed = cfg.seed + 17;
    auto re = re_adaptive(family, cplx(cfg.incident.w1, -cfg.depth_h), cplx(cfg.incident.w2, 0.0),
                          ropt);
    std::ofstream f(join(args.out_dir, "cross_validation.csv"));
    f << "re_pole,im_pole,matched_by_ie,ie_distance\n";
    int missing = 0;
    for (const cplx& q : re.poles) {
      double best = 1e300;
      for (const auto& pr : ie.poles) best = std::min(best, std::abs(pr.pole - q));
      const bool matched = best < 1e-6;
      missing += matched ? 0 : 1;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.3e\n", q.real(), q.imag(), matched ? 1 : 0,
                    best);
      f << buf;
    }
    std::cout << "cross-validation: " << re.poles.size() << " RE poles, " << missing
              << " unmatched by IE\n";
  }

  std::cout << "resonances: " << poles.size() << " poles in ["
            << cfg.incident.w1 << ", " << cfg.incident.w2 << "] x [-" << cfg.depth_h << ", 0), "
            << solver.counters.factorizations << " solves\n";
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

int cmd_field(const CommonArgs& args, const std::string& mode_flag,
              const std::string& error_against) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  if (mode_flag == "fth") cfg.mode = RunMode::FTH;
  if (mode_flag == "fth-ss") cfg.mode = RunMode::FTHSS;
  FieldResult r = (cfg.mode == RunMode::FTH) ? run_fth(cfg) : run_fth_ss(cfg);
  write_timeseries_csv(join(args.out_dir, "timeseries.csv"), r.t_grid, r.u);
  if (!r.resonances.empty()) write_pole_csv(r.resonances, join(args.out_dir, "poles.csv"));

  if (!error_against.empty()) {
    auto ref = read_timeseries_csv(error_against);
    if (ref.t.size() != r.t_grid.size() || ref.u.size() != r.u.size())
      throw std::runtime_error("--error-against: reference grid mismatch");
    for (size_t i = 0; i < ref.t.size(); ++i)
      if (std::abs(ref.t[i] - r.t_grid[i]) > 1e-12)
        throw std::runtime_error("--error-against: reference grid mismatch");
    double err = 0.0;
    for (size_t q = 0; q < r.u.size(); ++q)
      for (size_t i = 0; i < r.u[q].size(); ++i)
        err = std::max(err, std::abs(r.u[q][i] - ref.u[q][i]));
    std::cout << "max-all-time error vs reference: " << err << "\n";
    std::ofstream f(join(args.out_dir, "error_summary.txt"));
    f << err << "\n";
  }

  std::cout << "field: " << r.u.size() << " points x " << r.t_grid.size() << " times, "
            << r.diag.counters.factorizations << " solves, switch t* = " << r.diag.switch_time
            << "\n";
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

int cmd_snapshot(const CommonArgs& args, std::vector<double> grid_spec,
                 std::vector<double> snap_times) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  if (grid_spec.size() != 6) throw ConfigError("--grid expects nx ny x0 x1 y0 y1");
  if (snap_times.empty()) throw ConfigError("--at expects at least one time");
  const int nx = static_cast<int>(grid_spec[0]), ny = static_cast<int>(grid_spec[1]);
  const double x0 = grid_spec[2], x1 = grid_spec[3], y0 = grid_spec[4], y1 = grid_spec[5];

  Scatterer sc = scatterer_from_config(cfg);
  Discretization disc = discretize(sc, cfg.n_boundary);
  const double cutoff = cfg.near_cutoff * disc.diameter();

  std::vector<Vec2> pts;
  std::vector<char> mask(static_cast<size_t>(nx) * ny, 0);
  std::vector<size_t> live;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 p{x0 + (x1 - x0) * ix / std::max(1, nx - 1),
                   y0 + (y1 - y0) * iy / std::max(1, ny - 1)};
      const size_t idx = static_cast<size_t>(iy) * nx + ix;
      if (disc.min_distance(p) < cutoff || inside_closed(disc, p)) {
        mask[idx] = 1;
      } else {
        live.push_back(idx);
        pts.push_back(p);
      }
    }
  size_t masked = 0;
  for (char m : mask) masked += m ? 1 : 0;
  if (masked > 0)
    std::cerr << "[snapshot] " << masked << " grid points inside or near the boundary masked\n";

  std::sort(snap_times.begin(), snap_times.end());
  auto cfg_run = cfg;
  cfg_run.points = pts;
  cfg_run.nt = static_cast<int>(snap_times.size());
  cfg_run.t_begin = snap_times.front();
  cfg_run.t_end = snap_times.back();
  FieldResult r = (cfg.mode == RunMode::FTH) ? run_fth(cfg_run) : run_fth_ss(cfg_run);
  auto uinc = incident_time_field(cfg_run, pts);

  for (size_t it = 0; it < snap_times.size(); ++it) {
    std::vector<cplx> vals(static_cast<size_t>(nx) * ny, cplx(0, 0));
    for (size_t q = 0; q < live.size(); ++q) vals[live[q]] = r.u[q][it] + uinc[q][it];
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%05zu.txt", it);
    write_snapshot(join(args.out_dir, name), nx, ny, x0, x1, y0, y1, snap_times[it], vals, mask);
  }
  std::cout << "snapshot: " << snap_times.size() << " frames, " << live.size() << " live points, "
            << masked << " masked\n";
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

int cmd_decay(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  if (cfg.points.size() != 1) throw ConfigError("decay: exactly one observation point required");
  auto d = run_decay(cfg);
  write_decay_csv(join(args.out_dir, "decay.csv"), d.t, d.i1, d.i2, d.eps2);
  std::cout << "decay: onset t = " << d.onset;
  if (d.fit_valid)
    std::cout << ", fitted eps2 log-slope = " << d.slope << "\n";
  else
    std::cout << ", slope fit refused (too few informative samples)\n";
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

int cmd_compare(const CommonArgs& args, std::vector<int> j_list, int ref_multiplier) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  if (j_list.empty()) j_list = {25, 50, 100, 200};
  std::sort(j_list.begin(), j_list.end());

  auto ref_cfg = cfg;
  ref_cfg.j_frequencies = j_list.back();
  auto ref = reference_brute_force(ref_cfg, ref_multiplier);

  std::ofstream f(join(args.out_dir, "compare.csv"));
  f << "j,err_fth,err_fthss,solves_fth,solves_fthss\n";
  for (int j : j_list) {
    auto c = cfg;
    c.j_frequencies = j;
    auto a = run_fth(c);
    auto b = run_fth_ss(c);
    double ea = 0, eb = 0;
    for (size_t q = 0; q < ref.u.size(); ++q)
      for (size_t i = 0; i < ref.u[q].size(); ++i) {
        ea = std::max(ea, std::abs(a.u[q][i] - ref.u[q][i]));
        eb = std::max(eb, std::abs(b.u[q][i] - ref.u[q][i]));
      }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e,%ld,%ld\n", j, ea, eb,
                  a.diag.counters.factorizations, b.diag.counters.factorizations);
    f << buf;
    std::cout << buf;
  }
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

int cmd_window_debug(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = load(args);
  const double t_inc = cfg.incident.gaussian() ? 70.0 : cfg.incident.t_inc;
  auto part = quad::WindowPartition::for_duration(t_inc);
  {
    std::ofstream f(join(args.out_dir, "windows.csv"));
    f << "t";
    for (int k = 1; k <= part.K; ++k) f << ",w" << k;
    f << ",sum\n";
    for (int i = 0; i <= 2000; ++i) {
      const double t = t_inc * i / 2000.0;
      f << t;
      for (int k = 1; k <= part.K; ++k) f << "," << part.value(k, t);
      f << "," << part.sum(t) << "\n";
    }
  }
  if (!cfg.incident.gaussian()) {
    std::ofstream f(join(args.out_dir, "window_spectra.csv"));
    const auto grid = cfg.frequency_grid();
    auto amp = [&](double t) { return cfg.incident.amplitude(t); };
    f << "omega";
    std::vector<quad::WindowedSpectrum> specs;
    for (int k = 1; k <= part.K; ++k) {
      specs.push_back(quad::windowed_spectrum(amp, k, part, grid, cfg.incident.rate_hint));
      f << ",re_a" << k << ",im_a" << k;
    }
    f << "\n";
    for (size_t j = 0; j < grid.size(); ++j) {
      f << grid[j];
      for (const auto& s : specs)
        f << "," << s.samples[j].real() << "," << s.samples[j].imag();
      f << "\n";
    }
  }
  std::cout << "window-debug: K = " << part.K << " windows over [0, " << t_inc << "]\n";
  write_manifest(join(args.out_dir, "manifest.json"), cfg, wall_since(t0));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-domain acoustic scattering via frequency solves, rational resonance "
               "search, and singularity subtraction"};
  app.require_subcommand(1);

  CommonArgs a_res, a_field, a_snap, a_decay, a_cmp, a_win;
  bool cross_validate = false;
  std::string mode_flag, error_against;
  std::vector<double> grid_spec, snap_times;
  std::vector<int> j_list;
  int ref_multiplier = 10;

  auto* c_res = app.add_subcommand("resonances", "resonance search and pole/residue table");
  add_common(c_res, a_res);
  c_res->add_flag("--cross-validate", cross_validate, "also run the random-excitation search");

  auto* c_field = app.add_subcommand("field", "time series at the observation points");
  add_common(c_field, a_field);
  c_field->add_option("--mode", mode_flag, "fth or fth-ss (overrides config)");
  c_field->add_option("--error-against", error_against, "reference time-series CSV");

  auto* c_snap = app.add_subcommand("snapshot", "total-field grid snapshots");
  add_common(c_snap, a_snap);
  c_snap->add_option("--grid", grid_spec, "nx ny x0 x1 y0 y1")->expected(6);
  c_snap->add_option("--at", snap_times, "snapshot times")->required();

  auto* c_decay = app.add_subcommand("decay", "I1/I2/eps2 decay study with slope fit");
  add_common(c_decay, a_decay);

  auto* c_cmp = app.add_subcommand("compare", "FTH vs FTH-SS error sweep over solve budgets");
  add_common(c_cmp, a_cmp);
  c_cmp->add_option("--j-list", j_list, "solve budgets to sweep");
  c_cmp->add_option("--ref-multiplier", ref_multiplier, "reference density multiplier");

  auto* c_win = app.add_subcommand("window-debug", "dump window shapes and slow spectra");
  add_common(c_win, a_win);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_res->parsed()) return cmd_resonances(a_res, cross_validate);
    if (c_field->parsed()) return cmd_field(a_field, mode_flag, error_against);
    if (c_snap->parsed()) return cmd_snapshot(a_snap, grid_spec, snap_times);
    if (c_decay->parsed()) return cmd_decay(a_decay);
    if (c_cmp->parsed()) return cmd_compare(a_cmp, j_list, ref_multiplier);
    if (c_win->parsed()) return cmd_window_debug(a_win);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("resource guard") != std::string::npos ? 4 : 3;
  }
  return 0;
}
