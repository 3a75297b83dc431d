#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fthss {

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {a * x, a * y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

enum class CurveKind { ClosedAnalytic, OpenArc };

/// Parametrized boundary curve with analytically exact derivatives.
/// Closed curves live on [0, 2pi] (2pi-periodic); open arcs on [-1, 1].
struct Curve {
  CurveKind kind = CurveKind::ClosedAnalytic;
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> derivative;
  std::function<Vec2(double)> second_derivative;
  std::string name;

  std::array<double, 2> parameter_domain() const {
    return kind == CurveKind::ClosedAnalytic ? std::array<double, 2>{0.0, 2.0 * M_PI}
                                             : std::array<double, 2>{-1.0, 1.0};
  }
  /// Diameter estimate from a parameter sweep (used for near-field cutoffs).
  double diameter() const;
};

/// A scattering obstacle: one closed curve, one open arc, or several open arcs
/// (disjoint). Mixed open/closed collections are not supported.
struct Scatterer {
  std::vector<Curve> parts;
};

/// Quadrature-ready boundary sampling of a single curve.
///
/// Closed: s_i = 2pi i/N equispaced, trapezoid weights.
/// Open:   theta_j = pi(2j+1)/(2N), t_j = cos(theta_j) (no endpoint nodes, so
///         the edge-singular density factor 1/sqrt(1-t^2) is never sampled at
///         the singular points).
struct BoundaryDiscretization {
  CurveKind kind = CurveKind::ClosedAnalytic;
  std::vector<Vec2> nodes;
  std::vector<double> params;        // s_i (closed) or t_j (open)
  std::vector<double> thetas;        // open arcs only: theta_j with t_j = cos(theta_j)
  std::vector<double> jacobians;     // |gamma'(s_i)| resp. |dr/dt(t_j)|
  std::vector<Vec2> normals;         // closed curves only, pointing into the exterior
  std::vector<Vec2> d1;              // first derivative at the nodes
  std::vector<Vec2> d2;              // second derivative at the nodes
  /// Weight w_i such that  integral_Gamma f ds  ~=  sum_i w_i f(node_i).
  std::vector<double> l2_weights;
  /// Weight for integrals of the *smooth* density representation: closed
  /// curves integral f(s)|g'(s)| ds, arcs integral f(theta)|dr/dt| dtheta
  /// (arclength and sqrt factors already cancelled).
  std::vector<double> pot_weights;
  const Curve* curve = nullptr;

  size_t size() const { return nodes.size(); }
};

/// One or more discretized curves stacked into a single solve-ready object.
struct Discretization {
  std::vector<BoundaryDiscretization> parts;
  std::vector<size_t> offsets;  // offsets[i] = start index of part i; back() = total N

  size_t total() const { return offsets.empty() ? 0 : offsets.back(); }
  bool closed() const { return parts.size() == 1 && parts[0].kind == CurveKind::ClosedAnalytic; }
  bool open() const { return !parts.empty() && parts[0].kind == CurveKind::OpenArc; }
  Vec2 node(size_t i) const;
  double l2_weight(size_t i) const;
  double min_distance(Vec2 p) const;
  double diameter() const;
};

/// Builtin scatterers:
///   unit-circle
///   circular-arc(radius, aperture)      arc spans 2pi - aperture of the circle,
///                                       gap centered on the +y axis
///   rocket(closed) / rocket(open)       cosine-radius rocket; the open variant
///                                       removes the parameter interval [5.338, 5.427]
///   cavity                              circle with a smooth deep dimple
///   parabolic-mirror-pair               two facing parabolic arcs
Scatterer make_scatterer(const std::string& name, const std::vector<double>& params = {});

/// Single-curve convenience used throughout the tests.
Curve make_curve(const std::string& name, const std::vector<double>& params = {});

/// Closed curve from a text file of Fourier coefficients, rows "k ax bx ay by":
/// x(s) = sum ax_k cos(ks) + bx_k sin(ks), same for y.
Curve load_fourier_curve(const std::string& path);

BoundaryDiscretization discretize(const Curve& curve, int n);
Discretization discretize(const Scatterer& sc, int n);  // n per part

} // namespace fthss
