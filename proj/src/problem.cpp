#include "hdgcd/problem.hpp"

#include <fmt/format.h>

#include "hdgcd/quadrature.hpp"

namespace hdgcd {

double ProblemSpec::rho(const Vec2& x) const {
  double div = 0.0;
  if (velocity_divergence) {
    div = velocity_divergence(x);
  } else {
    constexpr double h = 1e-6;
    const Vec2 ex(h, 0.0), ey(0.0, h);
    div = (velocity(x + ex).x() - velocity(x - ex).x()) / (2 * h) +
          (velocity(x + ey).y() - velocity(x - ey).y()) / (2 * h);
  }
  return reaction(x) - 0.5 * div;
}

void validate_problem(const ProblemSpec& problem, const Mesh& mesh) {
  if (!(problem.epsilon > 0.0))
    throw ProblemError(fmt::format("diffusion coefficient must be positive, got {}", problem.epsilon));
  if (!(problem.rho0 >= 0.0))
    throw ProblemError(fmt::format("rho0 must be non-negative, got {}", problem.rho0));

  const TriangleQuadrature rule = quad_triangle(4);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap map = AffineMap::of(mesh, k);
    for (const Vec2& xi : rule.points) {
      const Vec2 x = map.to_physical(xi);
      const double r = problem.rho(x);
      if (r < problem.rho0 - 1e-10)
        throw ProblemError(fmt::format(
            "c - div(b)/2 = {} < rho0 = {} at ({}, {})", r, problem.rho0, x.x(), x.y()));
    }
  }

  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (!edge.is_boundary()) continue;
    const Vec2 mid = 0.5 * (mesh.vertex(edge.vertices[0]) + mesh.vertex(edge.vertices[1]));
    if (problem.boundary.classify(mid) != edge.tag)
      throw ProblemError(fmt::format("mesh boundary tag of edge {} disagrees with the problem", e));
  }

  const InflowReport inflow = verify_inflow_in_dirichlet(mesh, problem.velocity);
  if (!inflow.ok) {
    const auto& v = inflow.violations.front();
    throw ProblemError(fmt::format("inflow boundary not Dirichlet: edge {} at ({}, {})", v.edge,
                                   v.point.x(), v.point.y()));
  }
}

}  // namespace hdgcd
