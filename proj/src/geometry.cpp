#include "fthss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fthss {

namespace {

Curve circle_curve(double radius) {
  Curve c;
  c.kind = CurveKind::ClosedAnalytic;
  c.name = "unit-circle";
  c.position = [radius](double s) { return Vec2{radius * std::cos(s), radius * std::sin(s)}; };
  c.derivative = [radius](double s) { return Vec2{-radius * std::sin(s), radius * std::cos(s)}; };
  c.second_derivative = [radius](double s) { return Vec2{-radius * std::cos(s), -radius * std::sin(s)}; };
  return c;
}

// Arc covering the unit circle minus an opening of `aperture` radians, gap
// centered on the +y axis; t in [-1,1] with phi(t) affine.
Curve circular_arc_curve(double radius, double aperture) {
  if (aperture <= 0.0 || aperture >= 2.0 * M_PI)
    throw std::invalid_argument("circular-arc: aperture must lie in (0, 2pi)");
  const double phi0 = 0.5 * M_PI + 0.5 * aperture;
  const double span = 2.0 * M_PI - aperture;
  Curve c;
  c.kind = CurveKind::OpenArc;
  c.name = "circular-arc";
  auto phi = [phi0, span](double t) { return phi0 + 0.5 * (t + 1.0) * span; };
  const double dphi = 0.5 * span;
  c.position = [radius, phi](double t) {
    const double p = phi(t);
    return Vec2{radius * std::cos(p), radius * std::sin(p)};
  };
  c.derivative = [radius, phi, dphi](double t) {
    const double p = phi(t);
    return Vec2{-radius * std::sin(p) * dphi, radius * std::cos(p) * dphi};
  };
  c.second_derivative = [radius, phi, dphi](double t) {
    const double p = phi(t);
    return Vec2{-radius * std::cos(p) * dphi * dphi, -radius * std::sin(p) * dphi * dphi};
  };
  return c;
}

struct RocketRadius {
  // C(s) = 0.35 + 0.1 cos s + 0.12 cos 2s + 0.15 cos 3s + 0.1 cos 4s + 0.1 cos 6s + 0.05 cos 8s
  static constexpr int kModes[6] = {1, 2, 3, 4, 6, 8};
  static constexpr double kCoef[6] = {0.1, 0.12, 0.15, 0.1, 0.1, 0.05};
  static double value(double s) {
    double r = 0.35;
    for (int m = 0; m < 6; ++m) r += kCoef[m] * std::cos(kModes[m] * s);
    return r;
  }
  static double d1(double s) {
    double r = 0.0;
    for (int m = 0; m < 6; ++m) r -= kCoef[m] * kModes[m] * std::sin(kModes[m] * s);
    return r;
  }
  static double d2(double s) {
    double r = 0.0;
    for (int m = 0; m < 6; ++m) r -= kCoef[m] * kModes[m] * kModes[m] * std::cos(kModes[m] * s);
    return r;
  }
};

Vec2 radial_pos(double C, double s) { return {C * std::cos(s), C * std::sin(s)}; }
Vec2 radial_d1(double C, double C1, double s) {
  return {C1 * std::cos(s) - C * std::sin(s), C1 * std::sin(s) + C * std::cos(s)};
}
Vec2 radial_d2(double C, double C1, double C2, double s) {
  return {C2 * std::cos(s) - 2.0 * C1 * std::sin(s) - C * std::cos(s),
          C2 * std::sin(s) + 2.0 * C1 * std::cos(s) - C * std::sin(s)};
}

Curve rocket_closed_curve() {
  Curve c;
  c.kind = CurveKind::ClosedAnalytic;
  c.name = "rocket";
  c.position = [](double s) { return radial_pos(RocketRadius::value(s), s); };
  c.derivative = [](double s) { return radial_d1(RocketRadius::value(s), RocketRadius::d1(s), s); };
  c.second_derivative = [](double s) {
    return radial_d2(RocketRadius::value(s), RocketRadius::d1(s), RocketRadius::d2(s), s);
  };
  return c;
}

Curve rocket_open_curve(double s_lo, double s_hi) {
  // open variant: parameter runs from s_hi around to s_lo + 2pi
  const double span = 2.0 * M_PI - (s_hi - s_lo);
  Curve c;
  c.kind = CurveKind::OpenArc;
  c.name = "rocket-open";
  auto smap = [s_hi, span](double t) { return s_hi + 0.5 * (t + 1.0) * span; };
  const double ds = 0.5 * span;
  c.position = [smap](double t) {
    const double s = smap(t);
    return radial_pos(RocketRadius::value(s), s);
  };
  c.derivative = [smap, ds](double t) {
    const double s = smap(t);
    Vec2 d = radial_d1(RocketRadius::value(s), RocketRadius::d1(s), s);
    return d * ds;
  };
  c.second_derivative = [smap, ds](double t) {
    const double s = smap(t);
    Vec2 d = radial_d2(RocketRadius::value(s), RocketRadius::d1(s), RocketRadius::d2(s), s);
    return d * (ds * ds);
  };
  return c;
}

// Circle with a smooth von-Mises dimple: rho(s) = 1 - depth*exp(conc*(cos(s-center)-1)).
Curve cavity_curve(double depth, double conc, double center) {
  Curve c;
  c.kind = CurveKind::ClosedAnalytic;
  c.name = "cavity";
  auto rho = [=](double s) { return 1.0 - depth * std::exp(conc * (std::cos(s - center) - 1.0)); };
  auto rho1 = [=](double s) {
    return depth * conc * std::sin(s - center) * std::exp(conc * (std::cos(s - center) - 1.0));
  };
  auto rho2 = [=](double s) {
    const double e = std::exp(conc * (std::cos(s - center) - 1.0));
    return depth * conc * e * (std::cos(s - center) - conc * std::sin(s - center) * std::sin(s - center));
  };
  c.position = [rho](double s) { return radial_pos(rho(s), s); };
  c.derivative = [rho, rho1](double s) { return radial_d1(rho(s), rho1(s), s); };
  c.second_derivative = [rho, rho1, rho2](double s) { return radial_d2(rho(s), rho1(s), rho2(s), s); };
  return c;
}

// y = x^2/(4f) over x in [-a, a], shifted/flipped; the pair faces each other.
Curve parabola_curve(double focal, double halfwidth, double y_offset, bool flip) {
  Curve c;
  c.kind = CurveKind::OpenArc;
  c.name = "parabolic-mirror";
  const double sgn = flip ? -1.0 : 1.0;
  c.position = [=](double t) {
    const double x = halfwidth * t;
    return Vec2{x, y_offset + sgn * x * x / (4.0 * focal)};
  };
  c.derivative = [=](double t) {
    const double x = halfwidth * t;
    return Vec2{halfwidth, sgn * halfwidth * x / (2.0 * focal)};
  };
  c.second_derivative = [=](double) {
    return Vec2{0.0, sgn * halfwidth * halfwidth / (2.0 * focal)};
  };
  return c;
}

} // namespace

double Curve::diameter() const {
  const auto dom = parameter_domain();
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (int i = 0; i <= 256; ++i) {
    const Vec2 p = position(dom[0] + (dom[1] - dom[0]) * i / 256.0);
    lo_x = std::min(lo_x, p.x); hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y); hi_y = std::max(hi_y, p.y);
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

Scatterer make_scatterer(const std::string& name, const std::vector<double>& params) {
  auto p = [&params](size_t i, double dflt) { return params.size() > i ? params[i] : dflt; };
  Scatterer sc;
  if (name == "unit-circle") {
    sc.parts.push_back(circle_curve(p(0, 1.0)));
  } else if (name == "circular-arc") {
    sc.parts.push_back(circular_arc_curve(p(0, 1.0), p(1, 1.25)));
  } else if (name == "rocket" || name == "rocket-closed") {
    sc.parts.push_back(rocket_closed_curve());
  } else if (name == "rocket-open") {
    sc.parts.push_back(rocket_open_curve(p(0, 5.338), p(1, 5.427)));
  } else if (name == "cavity") {
    sc.parts.push_back(cavity_curve(p(0, 0.75), p(1, 12.0), p(2, 0.5 * M_PI)));
  } else if (name == "parabolic-mirror-pair") {
    const double f = p(0, 1.0), hw = p(1, 2.0), sep = p(2, 4.0);
    sc.parts.push_back(parabola_curve(f, hw, -0.5 * sep, false));
    sc.parts.push_back(parabola_curve(f, hw, +0.5 * sep, true));
  } else {
    throw std::invalid_argument("make_scatterer: unknown builtin '" + name + "'");
  }
  return sc;
}

Curve make_curve(const std::string& name, const std::vector<double>& params) {
  auto sc = make_scatterer(name, params);
  if (sc.parts.size() != 1)
    throw std::invalid_argument("make_curve: builtin '" + name + "' is not a single curve");
  return sc.parts[0];
}

Curve load_fourier_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_fourier_curve: cannot open " + path);
  struct Mode { int k; double ax, bx, ay, by; };
  std::vector<Mode> modes;
  std::string line;
  while (std::getline(in, line)) {
    const auto h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    Mode m{};
    if (ls >> m.k >> m.ax >> m.bx >> m.ay >> m.by) modes.push_back(m);
  }
  if (modes.empty()) throw std::runtime_error("load_fourier_curve: no coefficient rows in " + path);
  Curve c;
  c.kind = CurveKind::ClosedAnalytic;
  c.name = "fourier-curve";
  c.position = [modes](double s) {
    Vec2 r{};
    for (const auto& m : modes) {
      r.x += m.ax * std::cos(m.k * s) + m.bx * std::sin(m.k * s);
      r.y += m.ay * std::cos(m.k * s) + m.by * std::sin(m.k * s);
    }
    return r;
  };
  c.derivative = [modes](double s) {
    Vec2 r{};
    for (const auto& m : modes) {
      r.x += m.k * (-m.ax * std::sin(m.k * s) + m.bx * std::cos(m.k * s));
      r.y += m.k * (-m.ay * std::sin(m.k * s) + m.by * std::cos(m.k * s));
    }
    return r;
  };
  c.second_derivative = [modes](double s) {
    Vec2 r{};
    for (const auto& m : modes) {
      r.x -= m.k * m.k * (m.ax * std::cos(m.k * s) + m.bx * std::sin(m.k * s));
      r.y -= m.k * m.k * (m.ay * std::cos(m.k * s) + m.by * std::sin(m.k * s));
    }
    return r;
  };
  return c;
}

BoundaryDiscretization discretize(const Curve& curve, int n) {
  if (n < 2) throw std::invalid_argument("discretize: N must be at least 2");
  if (curve.kind == CurveKind::ClosedAnalytic && n % 2 != 0)
    throw std::invalid_argument("discretize: N must be even for closed curves");
  if (n < 16)
    std::cerr << "[geometry] warning: N=" << n << " is very coarse for '" << curve.name << "'\n";

  BoundaryDiscretization d;
  d.kind = curve.kind;
  d.curve = &curve;
  d.nodes.resize(n);
  d.params.resize(n);
  d.jacobians.resize(n);
  d.d1.resize(n);
  d.d2.resize(n);
  d.l2_weights.resize(n);
  d.pot_weights.resize(n);

  if (curve.kind == CurveKind::ClosedAnalytic) {
    d.normals.resize(n);
    for (int i = 0; i < n; ++i) {
      const double s = 2.0 * M_PI * i / n;
      d.params[i] = s;
      d.nodes[i] = curve.position(s);
      const Vec2 dp = curve.derivative(s);
      d.d1[i] = dp;
      d.jacobians[i] = dp.norm();
      if (d.jacobians[i] < 1e-14)
        throw std::invalid_argument("discretize: curve derivative vanishes (irregular curve)");
      // counterclockwise parametrization: exterior normal is (y', -x')/|g'|
      d.normals[i] = Vec2{dp.y, -dp.x} * (1.0 / d.jacobians[i]);
      d.d2[i] = curve.second_derivative(s);
      d.l2_weights[i] = 2.0 * M_PI / n * d.jacobians[i];
      d.pot_weights[i] = d.l2_weights[i];
    }
  } else {
    d.thetas.resize(n);
    for (int j = 0; j < n; ++j) {
      const double theta = M_PI * (2.0 * j + 1.0) / (2.0 * n);
      const double t = std::cos(theta);
      d.thetas[j] = theta;
      d.params[j] = t;
      d.nodes[j] = curve.position(t);
      const Vec2 dp = curve.derivative(t);
      d.d1[j] = dp;
      d.jacobians[j] = dp.norm();
      if (d.jacobians[j] < 1e-14)
        throw std::invalid_argument("discretize: curve derivative vanishes (irregular curve)");
      d.d2[j] = curve.second_derivative(t);
      d.pot_weights[j] = M_PI / n * d.jacobians[j];
      d.l2_weights[j] = d.pot_weights[j] * std::sin(theta);
    }
  }

  // crude resolution warning: arclength per node vs curvature scale
  double arclen = 0.0;
  for (int i = 0; i < n; ++i) arclen += (curve.kind == CurveKind::ClosedAnalytic ? 2.0 * M_PI / n : 2.0 / n) * d.jacobians[i];
  if (arclen / n > 0.5)
    std::cerr << "[geometry] warning: N=" << n << " may under-resolve curve '" << curve.name << "'\n";
  return d;
}

Discretization discretize(const Scatterer& sc, int n) {
  if (sc.parts.empty()) throw std::invalid_argument("discretize: empty scatterer");
  const bool any_closed = std::any_of(sc.parts.begin(), sc.parts.end(),
                                      [](const Curve& c) { return c.kind == CurveKind::ClosedAnalytic; });
  if (any_closed && sc.parts.size() > 1)
    throw std::invalid_argument("discretize: multi-part scatterers must consist of open arcs");
  Discretization d;
  size_t off = 0;
  for (const auto& c : sc.parts) {
    d.parts.push_back(discretize(c, n));
    d.offsets.push_back(off);
    off += d.parts.back().size();
  }
  d.offsets.push_back(off);
  return d;
}

Vec2 Discretization::node(size_t i) const {
  for (size_t p = 0; p + 1 < offsets.size(); ++p)
    if (i < offsets[p + 1]) return parts[p].nodes[i - offsets[p]];
  throw std::out_of_range("Discretization::node");
}

double Discretization::l2_weight(size_t i) const {
  for (size_t p = 0; p + 1 < offsets.size(); ++p)
    if (i < offsets[p + 1]) return parts[p].l2_weights[i - offsets[p]];
  throw std::out_of_range("Discretization::l2_weight");
}

double Discretization::min_distance(Vec2 pt) const {
  double dmin = 1e300;
  for (const auto& part : parts)
    for (const auto& nd : part.nodes) dmin = std::min(dmin, (pt - nd).norm());
  return dmin;
}

double Discretization::diameter() const {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& part : parts)
    for (const auto& nd : part.nodes) {
      lo_x = std::min(lo_x, nd.x); hi_x = std::max(hi_x, nd.x);
      lo_y = std::min(lo_y, nd.y); hi_y = std::max(hi_y, nd.y);
    }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

} // namespace fthss
