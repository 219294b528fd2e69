#include "hdgcd/analysis.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hdgcd/kernels.hpp"
#include "hdgcd/quadrature.hpp"

namespace hdgcd {
namespace {

// Integrates d(x)^2 over the element with the kernel reduction.
template <class F>
double element_sum_squares(const AffineMap& map, const TriangleQuadrature& rule, F&& integrand) {
  std::vector<double> d(rule.size()), w(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    d[q] = integrand(map.to_physical(rule.points[q]));
    w[q] = rule.weights[q] * map.det;
  }
  return kernels::weighted_sum_squares(d, w);
}

}  // namespace

double ErrorReport::err_l2() const { return std::sqrt(l2_sq); }
double ErrorReport::err_h1_broken() const { return std::sqrt(h1_sq); }
double ErrorReport::err_jump() const { return std::sqrt(jump_sq); }
double ErrorReport::err_rc() const { return std::sqrt(upwind_sq + rho0 * l2_sq); }
double ErrorReport::err_hdg() const {
  return std::sqrt(epsilon * (h1_sq + h2_sq + jump_sq) + upwind_sq + rho0 * l2_sq);
}
double ErrorReport::err_star() const {
  return std::sqrt(epsilon * (h1_sq + h2_sq + jump_sq) + upwind_sq + rho0 * l2_sq + l2_sq +
                   boundary_sq);
}

BrokenPair discrete_pair(const Mesh& mesh, const HdgSolution& solution) {
  const Mesh* m = &mesh;
  const HdgSolution* s = &solution;
  auto edge_basis = std::make_shared<const EdgeBasis>(solution.edge_basis());
  return {
      [m, s](std::size_t k, const Vec2& x) { return s->interior.value(*m, k, x); },
      [m, s](std::size_t k, const Vec2& x) { return s->interior.gradient(*m, k, x); },
      [m, s](std::size_t k, const Vec2& x) { return s->interior.hessian(*m, k, x); },
      [s, edge_basis](std::size_t e, const Vec2&, double t) {
        return edge_basis->values(t).dot(s->edge_coefficients(e));
      },
  };
}

BrokenPair exact_pair(ScalarField u, VectorField gradient, MatrixField hessian) {
  return {
      [u](std::size_t, const Vec2& x) { return u(x); },
      [gradient](std::size_t, const Vec2& x) { return gradient(x); },
      [hessian](std::size_t, const Vec2& x) { return hessian(x); },
      [u](std::size_t, const Vec2& x, double) { return u(x); },
  };
}

BrokenPair operator-(const BrokenPair& a, const BrokenPair& b) {
  return {
      [a, b](std::size_t k, const Vec2& x) { return a.value(k, x) - b.value(k, x); },
      [a, b](std::size_t k, const Vec2& x) { return (a.gradient(k, x) - b.gradient(k, x)).eval(); },
      [a, b](std::size_t k, const Vec2& x) { return (a.hessian(k, x) - b.hessian(k, x)).eval(); },
      [a, b](std::size_t e, const Vec2& x, double s) { return a.trace(e, x, s) - b.trace(e, x, s); },
  };
}

ErrorReport hdg_norm(const Mesh& mesh, const BrokenPair& pair, const ProblemSpec& problem, double eta,
                     Region region, int quad_order) {
  const TriangleQuadrature rule = quad_triangle(quad_order);
  const EdgeQuadrature erule = quad_edge(quad_order);
  ErrorReport r;
  r.epsilon = problem.epsilon;
  r.rho0 = problem.rho0;
  r.region = region;
  const double eps = problem.epsilon;

  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    if (!region.contains(mesh.barycenter(k))) continue;
    const AffineMap map = AffineMap::of(mesh, k);
    const double hk2 = mesh.diameter(k) * mesh.diameter(k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * map.det;
      const double v = pair.value(k, x);
      const double g2 = pair.gradient(k, x).squaredNorm();
      const double h2 = hk2 * pair.hessian(k, x).squaredNorm();
      r.l2_sq += w * v * v;
      r.h1_sq += w * g2;
      r.h2_sq += w * h2;
      r.hdg_sq_direct += w * (eps * (g2 + h2) + problem.rho0 * v * v);
    }
    for (std::size_t e : mesh.element_edges(k)) {
      const Edge& edge = mesh.edge(e);
      const Vec2 n = mesh.outward_normal(k, e);
      const Vec2& a = mesh.vertex(edge.vertices[0]);
      const Vec2& b = mesh.vertex(edge.vertices[1]);
      const bool skeleton = edge.tag != BoundaryTag::Neumann;
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const double s = erule.points[q];
        const Vec2 x = a + s * (b - a);
        const double w = erule.weights[q] * edge.length;
        const double v = pair.value(k, x);
        r.boundary_sq += w * v * v;
        if (!skeleton) continue;
        const double jump = pair.trace(e, x, s) - v;
        const double bn = std::abs(problem.velocity(x).dot(n));
        r.jump_sq += w * (eta / edge.length) * jump * jump;
        r.upwind_sq += w * bn * jump * jump;
        r.hdg_sq_direct += w * (eps * (eta / edge.length) + bn) * jump * jump;
      }
    }
  }
  return r;
}

double error_l2(const Mesh& mesh, const PiecewisePolynomial& field, const ScalarField& exact,
                Region region, int quad_order) {
  const TriangleQuadrature rule = quad_triangle(quad_order);
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    if (!region.contains(mesh.barycenter(k))) continue;
    const AffineMap map = AffineMap::of(mesh, k);
    sum += element_sum_squares(map, rule, [&](const Vec2& x) {
      return field.value(mesh, k, x) - exact(x);
    });
  }
  return std::sqrt(sum);
}

double error_h1_broken(const Mesh& mesh, const PiecewisePolynomial& field,
                       const VectorField& exact_gradient, Region region, int quad_order) {
  const TriangleQuadrature rule = quad_triangle(quad_order);
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    if (!region.contains(mesh.barycenter(k))) continue;
    const AffineMap map = AffineMap::of(mesh, k);
    std::vector<double> dx(rule.size()), dy(rule.size()), w(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const Vec2 d = field.gradient(mesh, k, x) - exact_gradient(x);
      dx[q] = d.x();
      dy[q] = d.y();
      w[q] = rule.weights[q] * map.det;
    }
    sum += kernels::weighted_sum_squares(dx, w) + kernels::weighted_sum_squares(dy, w);
  }
  return std::sqrt(sum);
}

Eigen::VectorXd conservation_residual(const Mesh& mesh, const HdgSolution& solution,
                                      const ProblemSpec& problem) {
  const AssemblyOptions& opt = solution.options;
  const TriangleQuadrature rule = quad_triangle(opt.resolved_quad_order());
  const EdgeQuadrature erule = quad_edge(opt.resolved_quad_order());
  const TriangleQuadrature load_rule = quad_triangle(opt.resolved_load_quad_order());
  const EdgeQuadrature load_erule = quad_edge(opt.resolved_load_quad_order());
  const double eta = opt.resolved_eta();
  const double eps = problem.epsilon;
  const EdgeBasis tbasis = solution.edge_basis();
  const PiecewisePolynomial& u = solution.interior;

  Eigen::VectorXd residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_elements()));
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap map = AffineMap::of(mesh, k);
    double r = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * map.det;
      r += w * (problem.velocity(x).dot(u.gradient(mesh, k, x)) +
                problem.reaction(x) * u.value(mesh, k, x));
    }
    for (std::size_t q = 0; q < load_rule.size(); ++q)
      r -= load_rule.weights[q] * map.det * problem.source(map.to_physical(load_rule.points[q]));

    for (std::size_t e : mesh.element_edges(k)) {
      const Edge& edge = mesh.edge(e);
      const Vec2 n = mesh.outward_normal(k, e);
      const Vec2& a = mesh.vertex(edge.vertices[0]);
      const Vec2& b = mesh.vertex(edge.vertices[1]);
      if (edge.tag == BoundaryTag::Neumann) {
        for (std::size_t q = 0; q < load_erule.size(); ++q) {
          const Vec2 x = a + load_erule.points[q] * (b - a);
          r -= load_erule.weights[q] * edge.length * problem.neumann(x, n);
        }
        continue;
      }
      const Eigen::VectorXd coeffs = solution.edge_coefficients(e);
      const double sigma = eta / edge.length;
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const double s = erule.points[q];
        const Vec2 x = a + s * (b - a);
        const double w = erule.weights[q] * edge.length;
        const double jump = tbasis.values(s).dot(coeffs) - u.value(mesh, k, x);
        const double flux = eps * (u.gradient(mesh, k, x).dot(n) + sigma * jump) +
                            bracket(problem.velocity(x).dot(n)).minus * jump;
        r -= w * flux;
      }
    }
    residual(static_cast<Eigen::Index>(k)) = r;
  }
  return residual;
}

std::vector<std::optional<double>> convergence_rates(std::span<const double> errors,
                                                     std::span<const double> h) {
  if (errors.size() != h.size())
    throw std::invalid_argument("convergence_rates: errors and mesh sizes differ in length");
  for (std::size_t i = 1; i < h.size(); ++i)
    if (!(h[i] < h[i - 1]))
      throw std::invalid_argument("convergence_rates: mesh sizes must be strictly decreasing");
  std::vector<std::optional<double>> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] == 0.0 || errors[i + 1] == 0.0) {
      rates.emplace_back(std::nullopt);
      continue;
    }
    rates.emplace_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  return rates;
}

double overshoot_metric(const Mesh& mesh, const PiecewisePolynomial& field, double exact_max,
                        Region region) {
  static const std::array<Vec2, 3> ref_vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const TriangleQuadrature rule = quad_triangle(4);
  const ElementBasis& basis = field.basis();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    if (!region.contains(mesh.barycenter(k))) continue;
    const auto c = field.element(k);
    for (const Vec2& xi : ref_vertices) best = std::max(best, basis.values(xi).dot(c));
    for (const Vec2& xi : rule.points) best = std::max(best, basis.values(xi).dot(c));
  }
  return best - exact_max;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(mesh) {
  lo_ = hi_ = mesh.vertex(0);
  for (const Vec2& v : mesh.vertices()) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  cells_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_elements()) / 2.0)));
  buckets_.resize(static_cast<std::size_t>(cells_ * cells_));
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2(1e-300, 1e-300));
  auto cell = [&](double t, double lo, double width) {
    return std::clamp(static_cast<int>((t - lo) / width * cells_), 0, cells_ - 1);
  };
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const auto p = mesh.element_vertices(k);
    Vec2 a = p[0].cwiseMin(p[1]).cwiseMin(p[2]);
    Vec2 b = p[0].cwiseMax(p[1]).cwiseMax(p[2]);
    for (int j = cell(a.y(), lo_.y(), span.y()); j <= cell(b.y(), lo_.y(), span.y()); ++j)
      for (int i = cell(a.x(), lo_.x(), span.x()); i <= cell(b.x(), lo_.x(), span.x()); ++i)
        buckets_[static_cast<std::size_t>(j * cells_ + i)].push_back(k);
  }
}

std::size_t PointLocator::locate(const Vec2& x) const {
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2(1e-300, 1e-300));
  const int i = std::clamp(static_cast<int>((x.x() - lo_.x()) / span.x() * cells_), 0, cells_ - 1);
  const int j = std::clamp(static_cast<int>((x.y() - lo_.y()) / span.y() * cells_), 0, cells_ - 1);
  constexpr double tol = 1e-12;
  for (std::size_t k : buckets_[static_cast<std::size_t>(j * cells_ + i)]) {
    const Vec2 xi = AffineMap::of(mesh_, k).to_reference(x);
    if (xi.x() >= -tol && xi.y() >= -tol && xi.x() + xi.y() <= 1.0 + tol) return k;
  }
  throw std::out_of_range(fmt::format("no element contains ({}, {})", x.x(), x.y()));
}

}  // namespace hdgcd
