#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "fthss/geometry.hpp"
#include "oracles.hpp"

using namespace fthss;

TEST_CASE("unit circle parametrization") {
  auto c = make_curve("unit-circle");
  CHECK(c.position(0.0).x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.position(0.0).y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.derivative(0.0).x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.derivative(0.0).y == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("circular arc spans 2pi minus the aperture") {
  auto c = make_curve("circular-arc", {1.0, 1.25});
  // arclength along the unit circle equals the spanned angle
  auto f = [&](double t) {
    return oracle::cplx(c.derivative(t).norm(), 0.0);
  };
  const double len = oracle::integrate(f, -1.0, 1.0, 1e-13).real();
  CHECK(len == doctest::Approx(2.0 * M_PI - 1.25).epsilon(1e-12));
}

TEST_CASE("rocket radius at s = 0") {
  auto c = make_curve("rocket");
  CHECK(c.position(0.0).x == doctest::Approx(0.97).epsilon(1e-14));
  CHECK(c.position(0.0).y == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("open rocket excludes the published parameter interval") {
  auto c = make_curve("rocket-open");
  auto closed = make_curve("rocket");
  const Vec2 a = c.position(-1.0), b = c.position(1.0);
  const Vec2 ca = closed.position(5.427), cb = closed.position(5.338);
  CHECK((a - ca).norm() < 1e-13);
  CHECK((b - cb).norm() < 1e-13);
}

TEST_CASE("unknown builtin and bad aperture are rejected") {
  CHECK_THROWS_AS(make_curve("dodecahedron"), std::invalid_argument);
  CHECK_THROWS_AS(make_curve("circular-arc", {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_curve("circular-arc", {1.0, 7.0}), std::invalid_argument);
}

TEST_CASE("small-N discretizations warn but work") {
  auto c = make_curve("unit-circle");
  auto d = discretize(c, 4);
  REQUIRE(d.size() == 4);
  CHECK((d.nodes[0] - Vec2{1, 0}).norm() < 1e-15);
  CHECK((d.nodes[1] - Vec2{0, 1}).norm() < 1e-15);
  CHECK((d.nodes[2] - Vec2{-1, 0}).norm() < 1e-15);
  CHECK((d.nodes[3] - Vec2{0, -1}).norm() < 1e-15);
}

TEST_CASE("trapezoid circumference of the unit circle") {
  auto d = discretize(make_curve("unit-circle"), 64);
  double len = 0.0;
  for (int i = 0; i < 64; ++i) len += d.jacobians[i] * (2.0 * M_PI / 64);
  CHECK(std::abs(len - 2.0 * M_PI) < 1e-13);
}

TEST_CASE("open-arc nodes are strictly interior") {
  auto d = discretize(make_curve("circular-arc", {1.0, 1.25}), 32);
  for (double t : d.params) {
    CHECK(t > -1.0);
    CHECK(t < 1.0);
  }
}

TEST_CASE("spectral arclength for closed builtins") {
  // N chosen per shape stiffness: the rocket's fingers pull the minimum
  // radius down to ~0.14 and need more nodes before the exponential regime.
  const std::pair<const char*, int> cases[] = {{"unit-circle", 64}, {"cavity", 1024}, {"rocket", 2048}};
  for (const auto& [name, n] : cases) {
    auto c = make_curve(name);
    auto d = discretize(c, n);
    double trap = 0.0;
    for (size_t i = 0; i < d.size(); ++i) trap += d.l2_weights[i];
    auto f = [&](double s) { return oracle::cplx(c.derivative(s).norm(), 0.0); };
    const double ref = oracle::integrate(f, 0.0, 2.0 * M_PI, 1e-13).real();
    CHECK(std::abs(trap - ref) < 1e-9);
    if (std::string(name) == "unit-circle") CHECK(std::abs(trap - ref) < 1e-10);
  }
}

TEST_CASE("normals are unit and orthogonal to the tangent") {
  for (const char* name : {"unit-circle", "rocket", "cavity"}) {
    auto d = discretize(make_curve(name), 96);
    for (size_t i = 0; i < d.size(); ++i) {
      CHECK(std::abs(d.normals[i].dot(d.d1[i])) < 1e-13 * std::max(1.0, d.jacobians[i]));
      CHECK(std::abs(d.normals[i].norm() - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("normals point into the exterior") {
  // moving along the outward normal must increase the distance to an interior point
  auto d = discretize(make_curve("unit-circle"), 32);
  for (size_t i = 0; i < d.size(); ++i) {
    const Vec2 outward = d.nodes[i] + d.normals[i] * 0.01;
    CHECK(outward.norm() > d.nodes[i].norm());
  }
}

TEST_CASE("fourier curve file round trip") {
  const char* path = "fourier_ellipse.txt";
  {
    std::ofstream f(path);
    f << "# ellipse 2 x 1\n";
    f << "1 2.0 0.0 0.0 1.0\n";
  }
  auto c = load_fourier_curve(path);
  CHECK((c.position(0.0) - Vec2{2, 0}).norm() < 1e-15);
  CHECK((c.position(0.5 * M_PI) - Vec2{0, 1}).norm() < 1e-15);
  CHECK((c.derivative(0.0) - Vec2{0, 1}).norm() < 1e-15);
  std::remove(path);
}

TEST_CASE("parabolic mirror pair is two open arcs") {
  auto sc = make_scatterer("parabolic-mirror-pair");
  REQUIRE(sc.parts.size() == 2);
  CHECK(sc.parts[0].kind == CurveKind::OpenArc);
  auto d = discretize(sc, 24);
  CHECK(d.total() == 48);
  CHECK(d.open());
  CHECK_FALSE(d.closed());
}
