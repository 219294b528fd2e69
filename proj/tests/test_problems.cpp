#include <doctest.h>

#include <cmath>
#include <random>

#include "hdgcd/problems.hpp"

using namespace hdgcd;

namespace {

// Sixth-order central differences; independent of the library's own check.
double d1(const ScalarField& u, Vec2 x, int axis, double h) {
  Vec2 e = Vec2::Zero();
  e(axis) = h;
  return (u(x + 3 * e) - 9 * u(x + 2 * e) + 45 * u(x + e) - 45 * u(x - e) + 9 * u(x - 2 * e) -
          u(x - 3 * e)) / (60 * h);
}

double d2(const ScalarField& u, Vec2 x, int axis, double h) {
  Vec2 e = Vec2::Zero();
  e(axis) = h;
  return (2 * u(x + 3 * e) - 27 * u(x + 2 * e) + 270 * u(x + e) - 490 * u(x) + 270 * u(x - e) -
          27 * u(x - 2 * e) + 2 * u(x - 3 * e)) / (180 * h * h);
}

// Max relative mismatch of f against -eps Lap u + b.grad u + c u, and of the
// supplied gradient and Hessian against differences, at random points.
struct Mismatch {
  double source = 0.0, gradient = 0.0, hessian = 0.0;
};

Mismatch cross_check(const ManufacturedCase& c, double upper, int samples = 1000) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, upper - 0.01);
  const double h = 1e-3;
  Mismatch m;
  const ProblemSpec& p = c.problem;
  for (int i = 0; i < samples; ++i) {
    const Vec2 x(u(rng), u(rng));
    const double lap = d2(c.exact, x, 0, h) + d2(c.exact, x, 1, h);
    const Vec2 g(d1(c.exact, x, 0, h), d1(c.exact, x, 1, h));
    const double lhs = -p.epsilon * lap + p.velocity(x).dot(g) + p.reaction(x) * c.exact(x);
    const double f = p.source(x);
    m.source = std::max(m.source, std::abs(lhs - f) / std::max(1.0, std::abs(f)));
    m.gradient = std::max(m.gradient, (g - c.gradient(x)).norm() / std::max(1.0, g.norm()));
    ScalarField gx = [&](const Vec2& y) { return c.gradient(y).x(); };
    ScalarField gy = [&](const Vec2& y) { return c.gradient(y).y(); };
    Mat2 hs;
    hs << d1(gx, x, 0, h), d1(gx, x, 1, h), d1(gy, x, 0, h), d1(gy, x, 1, h);
    m.hessian = std::max(m.hessian, (hs - c.hessian(x)).norm() / std::max(1.0, hs.norm()));
  }
  return m;
}

// |u| on the Dirichlet part of the boundary, sampled densely.
double dirichlet_violation(const ManufacturedCase& c) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    for (const Vec2& x : {Vec2(0, t), Vec2(1, t), Vec2(t, 0), Vec2(t, 1)})
      if (c.problem.boundary.classify(x) == BoundaryTag::Dirichlet) worst = std::max(worst, std::abs(c.exact(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("smooth case") {
  const ManufacturedCase c = case_smooth(1e-3);
  CHECK(c.exact(Vec2(0.5, 0.5)) == doctest::Approx(1.0));
  CHECK(dirichlet_violation(c) <= 1e-12);
  for (double eps : {1.0, 1e-3, 1e-6}) {
    const Mismatch m = cross_check(case_smooth(eps), 1.0);
    CHECK(m.source <= 1e-8);
    CHECK(m.gradient <= 1e-8);
    CHECK(m.hessian <= 1e-8);
  }
  CHECK(c.region.is_full());
  CHECK_THROWS_AS(case_smooth(0.0), std::invalid_argument);
}

TEST_CASE("layer case") {
  const ManufacturedCase c = case_layer(1e-6);
  CHECK(c.exact(Vec2(0.5, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    CHECK(c.exact(Vec2(1.0, t)) == 0.0);
    CHECK(c.exact(Vec2(t, 1.0)) == 0.0);
  }
  CHECK(dirichlet_violation(c) <= 1e-12);
  CHECK(c.region.upper == 0.9);
  CHECK(*c.exact_max == 1.0);
  // Away from the layers for tiny eps, everywhere for moderate eps.
  const Mismatch small = cross_check(c, 0.9);
  CHECK(small.source <= 1e-8);
  CHECK(small.gradient <= 1e-8);
  const Mismatch moderate = cross_check(case_layer(0.1), 1.0);
  CHECK(moderate.source <= 1e-8);
  CHECK(moderate.hessian <= 1e-7);
  // |u| <= 1 on a fine grid.
  double umax = 0.0;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) umax = std::max(umax, std::abs(case_layer(0.05).exact(Vec2(i / 200.0, j / 200.0))));
  CHECK(umax <= 1.0);
}

TEST_CASE("reduced-limit case") {
  const ManufacturedCase c = case_reduced_limit(1e-4);
  CHECK(c.exact_is_reduced_limit);
  CHECK(c.exact(Vec2(0.0, 0.3)) == 0.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(u(rng), u(rng));
    const double lhs = c.problem.velocity(x).dot(c.gradient(x)) + c.problem.reaction(x) * c.exact(x);
    CHECK(lhs == doctest::Approx(c.problem.source(x)).epsilon(1e-14));
  }
  CHECK(dirichlet_violation(c) <= 1e-12);
  CHECK(cross_check(c, 1.0, 50).gradient <= 1e-8);
  CHECK(c.problem.boundary.left == BoundaryTag::Dirichlet);
  CHECK(c.problem.boundary.right == BoundaryTag::Neumann);
  CHECK(c.problem.rho0 == 1.0);
}

TEST_CASE("polynomial cases and their Neumann data") {
  for (const ManufacturedCase& c : {case_linear(1.0), case_bilinear(1.0), case_bilinear(0.01)}) {
    CAPTURE(c.name);
    CHECK(cross_check(c, 1.0, 200).source <= 1e-8);
    CHECK(dirichlet_violation(c) <= 1e-12);
    // g_N = eps grad u . n on each Neumann side.
    for (const auto& [x, n] : {std::pair{Vec2(1.0, 0.4), Vec2(1, 0)}, std::pair{Vec2(0.3, 0.0), Vec2(0, -1)},
                               std::pair{Vec2(0.7, 1.0), Vec2(0, 1)}})
      CHECK(c.problem.neumann(x, n) == doctest::Approx(c.problem.epsilon * c.gradient(x).dot(n)));
  }
}

TEST_CASE("library source check passes and catches a wrong source") {
  for (const std::string& name : case_names()) {
    for (double eps : {1.0, 1e-3, 1e-6}) {
      CAPTURE(name);
      CAPTURE(eps);
      CHECK(verify_source(case_by_name(name, eps)).ok);
    }
  }
  ManufacturedCase c = case_smooth(1.0);
  const ScalarField f = c.problem.source;
  c.problem.source = [f](const Vec2& x) { return f(x) * (1.0 + 1e-6); };
  CHECK_FALSE(verify_source(c).ok);
}

TEST_CASE("case lookup") {
  CHECK(case_by_name("layer", 1e-3).name == "layer");
  CHECK(case_names().size() == 5);
  CHECK_THROWS_AS(case_by_name("rotating", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(case_by_name("smooth", -1.0), std::invalid_argument);
}
