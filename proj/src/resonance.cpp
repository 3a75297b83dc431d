#include "fthss/resonance.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>

namespace fthss {

FrequencySolver::FrequencySolver(const Discretization* disc, double eta, double c, int workers)
    : disc_(disc), eta_(eta), c_(c), workers_(workers) {}

std::string FrequencySolver::key(cplx omega, Vec2 p) const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.14e_%.14e_%.6f_%.6f", omega.real(), omega.imag(), p.x, p.y);
  return buf;
}

VectorXcd FrequencySolver::density(cplx omega, Vec2 p) {
  const std::string k = key(omega, p);
  auto it = cache_.find(k);
  if (it != cache_.end()) {
    ++counters.cache_hits;
    return it->second;
  }
  OperatorMatrix op = assemble(*disc_, omega, eta_, c_, workers_);
  ++counters.assemblies;
  VectorXcd psi = op.solve(plane_wave_trace(*disc_, omega, p, c_));
  ++counters.factorizations;
  ++counters.solves;
  cache_.emplace(k, psi);
  return psi;
}

std::vector<VectorXcd> FrequencySolver::density_batch(const std::vector<cplx>& omegas, Vec2 p) {
  // collect cache misses, solve them in parallel, then serve in order
  std::vector<size_t> missing;
  for (size_t i = 0; i < omegas.size(); ++i)
    if (cache_.find(key(omegas[i], p)) == cache_.end())
      missing.push_back(i);
    else
      ++counters.cache_hits;

  std::vector<VectorXcd> solved(missing.size());
  const int nw = workers_ > 0 ? workers_ : omp_get_max_threads();
  const int nm = static_cast<int>(missing.size());
#pragma omp parallel for schedule(dynamic) num_threads(nw)
  for (int q = 0; q < nm; ++q) {
    const cplx w = omegas[missing[static_cast<size_t>(q)]];
    OperatorMatrix op = assemble(*disc_, w, eta_, c_, 1);
    solved[static_cast<size_t>(q)] = op.solve(plane_wave_trace(*disc_, w, p, c_));
  }
  for (size_t q = 0; q < missing.size(); ++q) {
    cache_.emplace(key(omegas[missing[q]], p), solved[q]);
    ++counters.assemblies;
    ++counters.factorizations;
    ++counters.solves;
  }

  std::vector<VectorXcd> out(omegas.size());
  for (size_t i = 0; i < omegas.size(); ++i) out[i] = cache_.at(key(omegas[i], p));
  return out;
}

std::vector<cplx> FrequencySolver::potential(const VectorXcd& dens, cplx omega,
                                             const std::vector<Vec2>& points, double cutoff_frac) {
  return eval_potential(*disc_, dens, omega, eta_, points, representation(), c_, cutoff_frac,
                        workers_);
}

double l2_norm(const VectorXcd& values, const Discretization& disc) {
  double acc = 0.0;
  for (size_t i = 0; i < disc.total(); ++i) {
    const double a = std::abs(values(static_cast<Eigen::Index>(i)));
    acc += disc.l2_weight(i) * a * a;
  }
  return std::sqrt(acc);
}

double relevance_metric(const VectorXcd& chat, const Discretization& disc, cplx rho) {
  const double nrm = l2_norm(chat, disc);
  if (rho.imag() == 0.0) {
    std::cerr << "[resonance] pole on the real axis: infinite relevance (check the eta sign)\n";
    return std::numeric_limits<double>::infinity();
  }
  return nrm / std::abs(rho.imag());
}

VectorXcd density_residues(const RationalApproximant& r, cplx rho, int j_c, double radius) {
  PoleSet ps = poles_and_residues(r);
  for (int shrink = 0; shrink <= 3; ++shrink) {
    bool clean = true;
    for (const cplx& q : ps.poles) {
      const double d = std::abs(q - rho);
      if (d > 1e-13 * (1.0 + std::abs(rho)) && d <= radius) clean = false;
    }
    if (clean) {
      VectorXcd acc = VectorXcd::Zero(r.dim());
      for (int j = 0; j < j_c; ++j) {
        const double th = 2.0 * M_PI * j / j_c;
        const cplx e(std::cos(th), std::sin(th));
        acc += r.eval_offset(rho, radius * e) * e;
      }
      return acc * (radius / static_cast<double>(j_c));
    }
    radius *= 0.1;
  }
  throw std::runtime_error("density_residues: another pole intrudes even after shrinking the contour");
}

std::vector<cplx> spatial_residues(FrequencySolver& solver, cplx rho, const VectorXcd& chat,
                                   const std::vector<Vec2>& points) {
  if (rho.imag() >= 0.0)
    throw std::invalid_argument("spatial_residues: pole must lie strictly below the real axis");
  return solver.potential(chat, rho, points);
}

namespace {

struct IEWork {
  FrequencySolver* solver;
  Vec2 p;
  IEOptions opt;
  IEResult* out;
};

void ie_recurse(IEWork& w, double w1, double w2, int depth) {
  auto& opt = w.opt;
  w.out->max_depth_reached = std::max(w.out->max_depth_reached, depth);

  std::vector<cplx> grid(static_cast<size_t>(opt.j));
  for (int i = 0; i < opt.j; ++i)
    grid[static_cast<size_t>(i)] = w1 + (w2 - w1) * i / double(opt.j - 1);

  auto densities = w.solver->density_batch(grid, w.p);
  const int n = static_cast<int>(w.solver->disc().total());
  MatrixXcd f(n, opt.j);
  for (int i = 0; i < opt.j; ++i) f.col(i) = densities[static_cast<size_t>(i)];

  const int m_max = opt.adaptive ? opt.m_max : std::min(opt.m_max, opt.j / 2);
  RationalApproximant r = aaa_sketch(grid, f, opt.sketch_l, opt.tol, m_max, opt.seed);

  if (!r.converged && opt.adaptive) {
    if (depth >= opt.max_recursion) {
      std::cerr << "[resonance] ie_adaptive: recursion limit at [" << w1 << ", " << w2
                << "]; keeping the partial approximant\n";
      w.out->aborted = true;
    } else {
      const double mid = 0.5 * (w1 + w2);
      ie_recurse(w, w1, mid, depth + 1);
      ie_recurse(w, mid, w2, depth + 1);
      return;
    }
  }

  r = cleanup(r, grid, f, opt.drop_tol);
  r.interval_lo = w1;
  r.interval_hi = w2;

  const int interval_id = static_cast<int>(w.out->intervals.size());
  PoleSet ps = poles_and_residues(r);
  for (const cplx& rho : ps.poles) {
    if (rho.real() < w1 || rho.real() > w2) continue;
    if (rho.imag() >= 0.0 || rho.imag() < -opt.depth) continue;
    ResonancePair pair;
    pair.pole = rho;
    pair.density_residue = density_residues(r, rho, opt.residue_points, opt.residue_radius);
    pair.residue_l2 = l2_norm(pair.density_residue, w.solver->disc());
    pair.relevance = pair.residue_l2 / std::abs(rho.imag());
    pair.interval_id = interval_id;
    w.out->poles.push_back(std::move(pair));
  }
  w.out->intervals.push_back(IEInterval{w1, w2, std::move(r)});
}

} // namespace

IEResult ie_adaptive(FrequencySolver& solver, Vec2 p, SearchBox box, IEOptions opt) {
  if (opt.j < 8) throw std::invalid_argument("ie_adaptive: need at least 8 frequencies");
  if (!(box.w2 > box.w1) || box.depth <= 0.0) throw std::invalid_argument("ie_adaptive: bad box");
  IEResult out;
  out.box = box;
  IEWork w{&solver, p, opt, &out};
  ie_recurse(w, box.w1, box.w2, 0);

  // dedup poles straddling interval boundaries: keep the copy whose interval
  // contains its real part
  std::vector<ResonancePair> merged;
  for (auto& pr : out.poles) {
    bool dup = false;
    for (auto& kept : merged) {
      if (std::abs(kept.pole - pr.pole) < opt.merge_tol) {
        dup = true;
        const auto& iv_new = out.intervals[static_cast<size_t>(pr.interval_id)];
        const bool new_owns = pr.pole.real() >= iv_new.w1 && pr.pole.real() <= iv_new.w2;
        const auto& iv_old = out.intervals[static_cast<size_t>(kept.interval_id)];
        const bool old_owns = kept.pole.real() >= iv_old.w1 && kept.pole.real() <= iv_old.w2;
        if (new_owns && !old_owns) kept = pr;
        break;
      }
    }
    if (!dup) merged.push_back(pr);
  }
  out.poles = std::move(merged);
  std::sort(out.poles.begin(), out.poles.end(),
            [](const ResonancePair& a, const ResonancePair& b) { return a.pole.real() < b.pole.real(); });
  return out;
}

const IEInterval& IEResult::interval_for(double omega) const {
  for (const auto& iv : intervals)
    if (omega >= iv.w1 && omega <= iv.w2) return iv;
  throw std::out_of_range("IEResult: frequency outside the searched interval");
}

VectorXcd IEResult::density_from_approximants(double omega, SolveCounters* counters) const {
  const auto& iv = interval_for(omega);
  if (counters) ++counters->approximant_evals;
  return iv.approximant.eval(omega);
}

namespace {

struct REState {
  const std::function<OperatorMatrix(cplx)>* family;
  VectorXcd u, v;
  REOptions opt;
  std::map<std::string, cplx> cache;
  bool aborted = false;

  cplx scalarized(cplx w) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.14e_%.14e", w.real(), w.imag());
    auto it = cache.find(buf);
    if (it != cache.end()) return it->second;
    OperatorMatrix op = (*family)(w);
    const cplx s = u.dot(op.solve(v));  // u^* H^{-1} v
    cache.emplace(buf, s);
    return s;
  }

  std::pair<std::vector<cplx>, std::vector<cplx>> poles_in(cplx lo, cplx hi) {
    const int spe = opt.samples_per_edge;
    std::vector<cplx> z;
    z.reserve(static_cast<size_t>(4 * spe));
    for (int i = 0; i < spe; ++i) {
      const double fx = double(i) / spe;
      z.push_back(cplx(lo.real() + fx * (hi.real() - lo.real()), lo.imag()));
      z.push_back(cplx(hi.real(), lo.imag() + fx * (hi.imag() - lo.imag())));
      z.push_back(cplx(hi.real() - fx * (hi.real() - lo.real()), hi.imag()));
      z.push_back(cplx(lo.real(), hi.imag() - fx * (hi.imag() - lo.imag())));
    }
    std::vector<cplx> s(z.size());
    for (size_t i = 0; i < z.size(); ++i) s[i] = scalarized(z[i]);
    auto r = aaa_scalar(z, s, opt.tol, std::min(opt.m_max, static_cast<int>(z.size()) / 2));
    PoleSet ps = poles_and_residues(r);
    std::vector<cplx> inside, res;
    for (size_t k = 0; k < ps.poles.size(); ++k) {
      const cplx q = ps.poles[k];
      if (q.real() > lo.real() && q.real() < hi.real() && q.imag() > lo.imag() &&
          q.imag() < hi.imag() &&
          std::abs(ps.residues[k](0)) > 1e-13 * r.sample_scale) {
        inside.push_back(q);
        res.push_back(ps.residues[k](0));
      }
    }
    return {inside, res};
  }

  void search(cplx lo, cplx hi, int depth, std::vector<cplx>& poles, std::vector<cplx>& residues) {
    auto [parent, parent_res] = poles_in(lo, hi);
    const cplx mid = 0.5 * (lo + hi);
    const cplx quads[4][2] = {{lo, mid},
                              {cplx(mid.real(), lo.imag()), cplx(hi.real(), mid.imag())},
                              {cplx(lo.real(), mid.imag()), cplx(mid.real(), hi.imag())},
                              {mid, hi}};
    std::vector<cplx> refined, refined_res;
    for (const auto& q : quads) {
      auto [p, res] = poles_in(q[0], q[1]);
      for (size_t i = 0; i < p.size(); ++i) {
        refined.push_back(p[i]);
        refined_res.push_back(res[i]);
      }
    }
    // converged when the quadrant pass reproduces the parent pass
    bool match = refined.size() == parent.size();
    if (match)
      for (const cplx& q : refined) {
        double best = 1e300;
        for (const cplx& pp : parent) best = std::min(best, std::abs(pp - q));
        if (best > opt.match_tol) {
          match = false;
          break;
        }
      }
    if (match || depth >= opt.max_depth) {
      if (!match) {
        std::cerr << "[resonance] re_adaptive: depth limit inside ["
                  << lo.real() << "," << hi.real() << "]x[" << lo.imag() << "," << hi.imag()
                  << "]; keeping the partial result\n";
        aborted = true;
      }
      for (size_t i = 0; i < refined.size(); ++i) {
        poles.push_back(refined[i]);
        residues.push_back(refined_res[i]);
      }
      return;
    }
    for (const auto& q : quads) search(q[0], q[1], depth + 1, poles, residues);
  }
};

} // namespace

REResult re_adaptive(const std::function<OperatorMatrix(cplx)>& family, cplx corner_lo,
                     cplx corner_hi, REOptions opt) {
  if (!(corner_hi.real() > corner_lo.real()) || !(corner_hi.imag() > corner_lo.imag()))
    throw std::invalid_argument("re_adaptive: degenerate box");
  REState st;
  st.family = &family;
  st.opt = opt;
  {
    // probe the dimension once; u, v fixed across the whole search
    OperatorMatrix probe = family(0.5 * (corner_lo + corner_hi));
    const Eigen::Index n = probe.entries().rows();
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g(0.0, M_SQRT1_2);
    st.u.resize(n);
    st.v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      st.u(i) = cplx(g(rng), g(rng));
      st.v(i) = cplx(g(rng), g(rng));
    }
  }
  REResult out;
  st.search(corner_lo, corner_hi, 0, out.poles, out.scalar_residues);
  out.aborted = st.aborted;

  // deduplicate across quadrant boundaries
  std::vector<cplx> poles;
  std::vector<cplx> res;
  for (size_t i = 0; i < out.poles.size(); ++i) {
    bool dup = false;
    for (const cplx& q : poles)
      if (std::abs(q - out.poles[i]) < opt.match_tol) dup = true;
    if (!dup) {
      poles.push_back(out.poles[i]);
      res.push_back(out.scalar_residues[i]);
    }
  }
  out.poles = std::move(poles);
  out.scalar_residues = std::move(res);
  std::sort(out.poles.begin(), out.poles.end(),
            [](cplx a, cplx b) { return a.real() < b.real(); });
  return out;
}

void write_pole_csv(const std::vector<ResonancePair>& poles, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_pole_csv: cannot open " + path);
  f << "re_pole,im_pole,residue_l2,relevance,interval_id\n";
  char buf[256];
  for (const auto& p : poles) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", p.pole.real(), p.pole.imag(),
                  p.residue_l2, p.relevance, p.interval_id);
    f << buf;
  }
}

} // namespace fthss
