#pragma once
// The continuous problem
//   -eps Lap u + b.grad u + c u = f   in the unit square,
//   eps grad u . n = g_N              on the Neumann boundary,
//   u = 0                             on the Dirichlet boundary.

#include <functional>
#include <stdexcept>
#include <string>

#include "hdgcd/field.hpp"
#include "hdgcd/mesh.hpp"

namespace hdgcd {

/// g_N evaluated at a boundary point with the outward unit normal there.
using BoundaryData = std::function<double(const Vec2& x, const Vec2& normal)>;

struct ProblemSpec {
  double epsilon = 1.0;
  VectorField velocity = [](const Vec2&) { return Vec2::Zero().eval(); };
  ScalarField reaction = [](const Vec2&) { return 0.0; };
  ScalarField source = [](const Vec2&) { return 0.0; };
  BoundaryData neumann = [](const Vec2&, const Vec2&) { return 0.0; };
  /// div b; estimated by central differences when empty.
  ScalarField velocity_divergence;
  BoundaryPartition boundary;
  /// Lower bound for c - div(b)/2.
  double rho0 = 0.0;

  /// c(x) - div b(x) / 2
  double rho(const Vec2& x) const;
};

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks eps > 0, rho0 >= 0, rho >= rho0 - 1e-10 at element quadrature
/// points, that the mesh boundary tags follow `problem.boundary`, and that the
/// inflow boundary is Dirichlet. Throws ProblemError naming the first failure.
void validate_problem(const ProblemSpec& problem, const Mesh& mesh);

}  // namespace hdgcd
