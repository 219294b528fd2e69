#include "hdgcd/field.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "hdgcd/quadrature.hpp"

namespace hdgcd {

AffineMap AffineMap::of(const Mesh& mesh, std::size_t element) {
  const auto p = mesh.element_vertices(element);
  AffineMap map;
  map.origin = p[0];
  map.jacobian.col(0) = p[1] - p[0];
  map.jacobian.col(1) = p[2] - p[0];
  map.det = map.jacobian.determinant();
  map.inverse = map.jacobian.inverse();
  return map;
}

PiecewisePolynomial::PiecewisePolynomial(std::size_t num_elements, int degree)
    : basis_(std::make_shared<const ElementBasis>(degree)),
      num_elements_(num_elements),
      coefficients_(Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(num_elements * basis_->size()))) {}

PiecewisePolynomial::PiecewisePolynomial(int degree, Eigen::VectorXd coefficients)
    : basis_(std::make_shared<const ElementBasis>(degree)),
      num_elements_(static_cast<std::size_t>(coefficients.size()) / basis_->size()),
      coefficients_(std::move(coefficients)) {
  if (num_elements_ * basis_->size() != static_cast<std::size_t>(coefficients_.size()))
    throw std::invalid_argument("coefficient count is not a multiple of the element basis size");
}

double PiecewisePolynomial::value(const Mesh& mesh, std::size_t k, const Vec2& x) const {
  const AffineMap map = AffineMap::of(mesh, k);
  return basis_->values(map.to_reference(x)).dot(element(k));
}

Vec2 PiecewisePolynomial::gradient(const Mesh& mesh, std::size_t k, const Vec2& x) const {
  const AffineMap map = AffineMap::of(mesh, k);
  const Vec2 ref = basis_->gradients(map.to_reference(x)).transpose() * element(k);
  return map.inverse.transpose() * ref;
}

Mat2 PiecewisePolynomial::hessian(const Mesh& mesh, std::size_t k, const Vec2& x) const {
  const AffineMap map = AffineMap::of(mesh, k);
  const Eigen::Vector3d h = basis_->hessians(map.to_reference(x)).transpose() * element(k);
  Mat2 ref;
  ref << h(0), h(1), h(1), h(2);
  return map.inverse.transpose() * ref * map.inverse;
}

Eigen::VectorXd project_element(const ScalarField& f, const Mesh& mesh, std::size_t element,
                                const ElementBasis& basis, int quad_order) {
  const TriangleQuadrature rule = quad_triangle(quad_order);
  const AffineMap map = AffineMap::of(mesh, element);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(rule.points[q]);
    const double w = rule.weights[q] * map.det;
    mass += w * phi * phi.transpose();
    rhs += w * f(map.to_physical(rule.points[q])) * phi;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("project_element: singular element mass matrix");
  return llt.solve(rhs);
}

Eigen::VectorXd project_edge(const ScalarField& f, const Mesh& mesh, std::size_t edge,
                             const EdgeBasis& basis, int quad_order) {
  const EdgeQuadrature rule = quad_edge(quad_order);
  const Edge& e = mesh.edge(edge);
  const Vec2& a = mesh.vertex(e.vertices[0]);
  const Vec2& b = mesh.vertex(e.vertices[1]);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd psi = basis.values(rule.points[q]);
    const double w = rule.weights[q] * e.length;
    mass += w * psi * psi.transpose();
    rhs += w * f(a + rule.points[q] * (b - a)) * psi;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("project_edge: singular edge mass matrix");
  return llt.solve(rhs);
}

PiecewisePolynomial project_field(const ScalarField& f, const Mesh& mesh, int degree,
                                  int quad_order) {
  PiecewisePolynomial field(mesh.num_elements(), degree);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
    field.element(k) = project_element(f, mesh, k, field.basis(), quad_order);
  return field;
}

}  // namespace hdgcd
