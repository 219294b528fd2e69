#pragma once
// Continuous P1 Galerkin with streamline-upwind Petrov-Galerkin
// stabilization; the comparison baseline for the hybridized scheme.

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hdgcd/field.hpp"
#include "hdgcd/mesh.hpp"
#include "hdgcd/problem.hpp"

namespace hdgcd {

/// How the local Peclet number is formed.
enum class PecletScaling {
  ElementSize,  // Pe = h |b| / (2 eps), dimensionless
  Unscaled,     // Pe = |b| / (2 eps)
};

/// tau = h / (2|b|) (coth Pe - 1/Pe). Uses the series Pe/3 - Pe^3/45 below
/// Pe = 1e-4 and coth Pe = 1 above Pe = 50. Returns 0 when b_norm == 0.
/// Throws std::invalid_argument for negative inputs or eps <= 0.
double supg_tau(double h, double b_norm, double epsilon,
                PecletScaling scaling = PecletScaling::ElementSize);

struct SupgOptions {
  /// false drops the streamline term, leaving plain Galerkin.
  bool stabilize = true;
  PecletScaling peclet = PecletScaling::ElementSize;
  int quad_order = 4;
  int load_quad_order = 0;  // <= 0 uses quad_order
};

/// One unknown per vertex not touching a Dirichlet edge.
struct SupgSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<long> vertex_dof;  // -1 on the Dirichlet boundary
  std::vector<double> tau;       // per element
};

SupgSystem assemble_supg(const ProblemSpec& problem, const Mesh& mesh,
                         const SupgOptions& options = {});

struct SupgSolution {
  Eigen::VectorXd nodal;  // per vertex, 0 on the Dirichlet boundary
  PiecewisePolynomial field;
  std::size_t dofs() const;
  std::vector<long> vertex_dof;
};

/// Validates the problem, assembles and solves with strong homogeneous
/// Dirichlet conditions.
SupgSolution solve_supg(const ProblemSpec& problem, const Mesh& mesh,
                        const SupgOptions& options = {});

}  // namespace hdgcd
