#include "hdgcd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace hdgcd {
namespace {

constexpr double pi = std::numbers::pi;

// Value and first two derivatives of a function of one variable.
struct Jet {
  double v, d1, d2;
};

// sin(pi t/2) (1 - e^{(t-1)/eps}); the exponent is never positive on [0, 1].
Jet layer_factor(double t, double eps) {
  const double s = std::sin(pi * t / 2), s1 = pi / 2 * std::cos(pi * t / 2),
               s2 = -pi * pi / 4 * s;
  const double ex = std::exp((t - 1.0) / eps);
  const double e = 1.0 - ex, e1 = -ex / eps, e2 = -ex / (eps * eps);
  return {s * e, s1 * e + s * e1, s2 * e + 2.0 * s1 * e1 + s * e2};
}

ProblemSpec mixed_transport(double eps) {
  ProblemSpec p;
  p.epsilon = eps;
  p.velocity = [](const Vec2&) { return Vec2(1.0, 0.0); };
  p.velocity_divergence = [](const Vec2&) { return 0.0; };
  p.boundary = BoundaryPartition::dirichlet_left_only();
  return p;
}

void require_positive(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument(fmt::format("epsilon must be positive, got {}", eps));
}

}  // namespace

ManufacturedCase case_smooth(double eps) {
  require_positive(eps);
  ManufacturedCase c;
  c.name = "smooth";
  c.problem.epsilon = eps;
  c.problem.velocity = [](const Vec2&) { return Vec2(1.0, 1.0); };
  c.problem.velocity_divergence = [](const Vec2&) { return 0.0; };
  c.problem.source = [eps](const Vec2& x) {
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    const double cx = std::cos(pi * x.x()), cy = std::cos(pi * x.y());
    return 2.0 * eps * pi * pi * sx * sy + pi * (cx * sy + sx * cy);
  };
  c.exact = [](const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  c.gradient = [](const Vec2& x) {
    return Vec2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  c.hessian = [](const Vec2& x) {
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    const double cx = std::cos(pi * x.x()), cy = std::cos(pi * x.y());
    Mat2 h;
    h << -pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy;
    return h;
  };
  c.region = Region::full();
  c.exact_max = 1.0;
  return c;
}

ManufacturedCase case_layer(double eps) {
  require_positive(eps);
  ManufacturedCase c;
  c.name = "layer";
  c.problem.epsilon = eps;
  c.problem.velocity = [](const Vec2&) { return Vec2(1.0, 1.0); };
  c.problem.velocity_divergence = [](const Vec2&) { return 0.0; };
  c.problem.source = [eps](const Vec2& x) {
    const Jet a = layer_factor(x.x(), eps), b = layer_factor(x.y(), eps);
    return -eps * (a.d2 * b.v + a.v * b.d2) + a.d1 * b.v + a.v * b.d1;
  };
  c.exact = [eps](const Vec2& x) { return layer_factor(x.x(), eps).v * layer_factor(x.y(), eps).v; };
  c.gradient = [eps](const Vec2& x) {
    const Jet a = layer_factor(x.x(), eps), b = layer_factor(x.y(), eps);
    return Vec2(a.d1 * b.v, a.v * b.d1);
  };
  c.hessian = [eps](const Vec2& x) {
    const Jet a = layer_factor(x.x(), eps), b = layer_factor(x.y(), eps);
    Mat2 h;
    h << a.d2 * b.v, a.d1 * b.d1, a.d1 * b.d1, a.v * b.d2;
    return h;
  };
  c.region = Region{0.9};
  c.exact_max = 1.0;  // each factor lies in [0, 1]
  c.load_quad_order = 12;
  return c;
}

ManufacturedCase case_reduced_limit(double eps) {
  require_positive(eps);
  ManufacturedCase c;
  c.name = "reduced_limit";
  c.problem = mixed_transport(eps);
  c.problem.reaction = [](const Vec2&) { return 1.0; };
  c.problem.rho0 = 1.0;
  c.problem.source = [](const Vec2& x) { return std::exp(-x.x()); };
  c.exact = [](const Vec2& x) { return x.x() * std::exp(-x.x()); };
  c.gradient = [](const Vec2& x) { return Vec2((1.0 - x.x()) * std::exp(-x.x()), 0.0); };
  c.hessian = [](const Vec2& x) {
    Mat2 h = Mat2::Zero();
    h(0, 0) = (x.x() - 2.0) * std::exp(-x.x());
    return h;
  };
  c.region = Region::full();
  c.exact_max = 1.0 / std::exp(1.0);
  c.exact_is_reduced_limit = true;
  return c;
}

ManufacturedCase case_linear(double eps) {
  require_positive(eps);
  ManufacturedCase c;
  c.name = "linear";
  c.problem = mixed_transport(eps);
  c.problem.source = [](const Vec2&) { return 1.0; };
  c.problem.neumann = [eps](const Vec2&, const Vec2& n) { return eps * n.x(); };
  c.exact = [](const Vec2& x) { return x.x(); };
  c.gradient = [](const Vec2&) { return Vec2(1.0, 0.0); };
  c.hessian = [](const Vec2&) { return Mat2::Zero().eval(); };
  c.region = Region::full();
  c.exact_max = 1.0;
  return c;
}

ManufacturedCase case_bilinear(double eps) {
  require_positive(eps);
  ManufacturedCase c;
  c.name = "bilinear";
  c.problem = mixed_transport(eps);
  c.problem.source = [](const Vec2& x) { return x.y(); };
  c.problem.neumann = [eps](const Vec2& x, const Vec2& n) {
    return eps * (x.y() * n.x() + x.x() * n.y());
  };
  c.exact = [](const Vec2& x) { return x.x() * x.y(); };
  c.gradient = [](const Vec2& x) { return Vec2(x.y(), x.x()); };
  c.hessian = [](const Vec2&) {
    Mat2 h;
    h << 0, 1, 1, 0;
    return h;
  };
  c.region = Region::full();
  c.exact_max = 1.0;
  return c;
}

std::vector<std::string> case_names() {
  return {"smooth", "layer", "reduced_limit", "linear", "bilinear"};
}

ManufacturedCase case_by_name(std::string_view name, double eps) {
  if (name == "smooth") return case_smooth(eps);
  if (name == "layer") return case_layer(eps);
  if (name == "reduced_limit") return case_reduced_limit(eps);
  if (name == "linear") return case_linear(eps);
  if (name == "bilinear") return case_bilinear(eps);
  throw std::invalid_argument(fmt::format(
      "unknown problem '{}' (expected one of smooth, layer, reduced_limit, linear, bilinear)", name));
}

SourceCheck verify_source(const ManufacturedCase& c, int samples, double tolerance, unsigned seed) {
  SourceCheck out;
  if (c.exact_is_reduced_limit) return out;
  constexpr double h = 1e-3;
  constexpr double margin = 2e-3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(margin, c.region.upper - margin);
  const ProblemSpec& p = c.problem;
  for (int i = 0; i < samples; ++i) {
    const Vec2 x(coord(rng), coord(rng));
    // Fourth-order stencils: f'  ~ (-u2 + 8u1 - 8u-1 + u-2) / 12h,
    //                        f'' ~ (-u2 + 16u1 - 30u0 + 16u-1 - u-2) / 12h^2.
    double d1[2], d2[2];
    const double u0 = c.exact(x);
    for (int a = 0; a < 2; ++a) {
      Vec2 e = Vec2::Zero();
      e(a) = h;
      const double up2 = c.exact(x + 2 * e), up1 = c.exact(x + e);
      const double um1 = c.exact(x - e), um2 = c.exact(x - 2 * e);
      d1[a] = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * h);
      d2[a] = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * h * h);
    }
    const Vec2 b = p.velocity(x);
    const double diffusion = -p.epsilon * (d2[0] + d2[1]);
    const double transport = b.x() * d1[0] + b.y() * d1[1];
    const double reaction = p.reaction(x) * u0;
    const double f = p.source(x);
    const double scale =
        std::max({std::abs(f), std::abs(diffusion), std::abs(transport), std::abs(reaction), 1.0});
    const double rel = std::abs(f - (diffusion + transport + reaction)) / scale;
    if (rel > out.max_relative) {
      out.max_relative = rel;
      out.worst = x;
    }
  }
  out.ok = out.max_relative <= tolerance;
  return out;
}

}  // namespace hdgcd
