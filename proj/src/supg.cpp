#include "hdgcd/supg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hdgcd/quadrature.hpp"
#include "hdgcd/solver.hpp"

namespace hdgcd {

double supg_tau(double h, double b_norm, double epsilon, PecletScaling scaling) {
  if (h < 0.0 || b_norm < 0.0) throw std::invalid_argument("supg_tau: negative h or |b|");
  if (!(epsilon > 0.0)) throw std::invalid_argument("supg_tau: epsilon must be positive");
  if (b_norm == 0.0) return 0.0;
  const double pe = (scaling == PecletScaling::ElementSize ? h : 1.0) * b_norm / (2.0 * epsilon);
  double xi;
  if (pe < 1e-4)
    xi = pe / 3.0 - pe * pe * pe / 45.0;
  else if (pe > 50.0)
    xi = 1.0 - 1.0 / pe;
  else
    xi = 1.0 / std::tanh(pe) - 1.0 / pe;
  return h / (2.0 * b_norm) * xi;
}

std::size_t SupgSolution::dofs() const {
  return static_cast<std::size_t>(std::count_if(vertex_dof.begin(), vertex_dof.end(),
                                                [](long d) { return d >= 0; }));
}

SupgSystem assemble_supg(const ProblemSpec& problem, const Mesh& mesh, const SupgOptions& options) {
  SupgSystem sys;
  std::vector<bool> fixed(mesh.num_vertices(), false);
  for (const Edge& e : mesh.edges())
    if (e.tag == BoundaryTag::Dirichlet) fixed[e.vertices[0]] = fixed[e.vertices[1]] = true;
  sys.vertex_dof.assign(mesh.num_vertices(), -1);
  long n = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (!fixed[v]) sys.vertex_dof[v] = n++;

  const TriangleQuadrature rule = quad_triangle(options.quad_order);
  const int load_order = options.load_quad_order > 0 ? options.load_quad_order : options.quad_order;
  const TriangleQuadrature load_rule = quad_triangle(load_order);
  const EdgeQuadrature edge_rule = quad_edge(load_order);
  const double eps = problem.epsilon;

  std::vector<Eigen::Triplet<double>> triplets;
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.tau.assign(mesh.num_elements(), 0.0);

  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap map = AffineMap::of(mesh, k);
    const Triangle& tri = mesh.triangles()[k];
    // P1 gradients are constant: grad phi_i = J^-T grad_ref phi_i.
    Eigen::Matrix<double, 3, 2> ref_grad;
    ref_grad << -1, -1, 1, 0, 0, 1;
    const Eigen::Matrix<double, 3, 2> grad = ref_grad * map.inverse;
    auto phi = [](const Vec2& xi) { return Eigen::Vector3d(1.0 - xi.x() - xi.y(), xi.x(), xi.y()); };

    double tau = 0.0;
    if (options.stabilize) {
      double bmax = 0.0;
      for (const Vec2& xi : rule.points)
        bmax = std::max(bmax, problem.velocity(map.to_physical(xi)).norm());
      tau = supg_tau(mesh.diameter(k), bmax, eps, options.peclet);
    }
    sys.tau[k] = tau;

    Eigen::Matrix3d a = eps * map.det * 0.5 * grad * grad.transpose();
    Eigen::Vector3d load = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * map.det;
      const Eigen::Vector3d p = phi(rule.points[q]);
      const Eigen::Vector3d streamline = grad * problem.velocity(x);  // b.grad phi_i
      const Eigen::Vector3d trial = streamline + problem.reaction(x) * p;
      // row = test, column = trial
      a += w * (p + tau * streamline) * trial.transpose();
    }
    for (std::size_t q = 0; q < load_rule.size(); ++q) {
      const Vec2 x = map.to_physical(load_rule.points[q]);
      const double w = load_rule.weights[q] * map.det;
      const Eigen::Vector3d test = phi(load_rule.points[q]) + tau * (grad * problem.velocity(x));
      load += w * problem.source(x) * test;
    }
    for (int j = 0; j < 3; ++j) {
      const std::size_t e = mesh.element_edges(k)[static_cast<std::size_t>(j)];
      const Edge& edge = mesh.edge(e);
      if (edge.tag != BoundaryTag::Neumann) continue;
      const Vec2 nrm = mesh.outward_normal(k, e);
      const Vec2& pa = mesh.vertex(edge.vertices[0]);
      const Vec2& pb = mesh.vertex(edge.vertices[1]);
      for (std::size_t q = 0; q < edge_rule.size(); ++q) {
        const Vec2 x = pa + edge_rule.points[q] * (pb - pa);
        load += edge_rule.weights[q] * edge.length * problem.neumann(x, nrm) *
                phi(map.to_reference(x)).cwiseMax(0.0);
      }
    }
    for (int i = 0; i < 3; ++i) {
      const long row = sys.vertex_dof[tri[static_cast<std::size_t>(i)]];
      if (row < 0) continue;
      sys.rhs(row) += load(i);
      for (int j = 0; j < 3; ++j) {
        const long col = sys.vertex_dof[tri[static_cast<std::size_t>(j)]];
        if (col >= 0) triplets.emplace_back(row, col, a(i, j));
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

SupgSolution solve_supg(const ProblemSpec& problem, const Mesh& mesh, const SupgOptions& options) {
  validate_problem(problem, mesh);
  const SupgSystem sys = assemble_supg(problem, mesh, options);
  const Eigen::VectorXd x = solve_sparse(sys.matrix, sys.rhs);
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (sys.vertex_dof[v] >= 0) nodal(static_cast<Eigen::Index>(v)) = x(sys.vertex_dof[v]);
  PiecewisePolynomial field(mesh.num_elements(), 1);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
    for (int i = 0; i < 3; ++i)
      field.element(k)(i) = nodal(static_cast<Eigen::Index>(mesh.triangles()[k][static_cast<std::size_t>(i)]));
  return {std::move(nodal), std::move(field), sys.vertex_dof};
}

}  // namespace hdgcd
