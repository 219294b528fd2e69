#pragma once
// Affine element geometry, broken polynomial fields and L2 projections.

#include <functional>
#include <memory>

#include <Eigen/Core>

#include "hdgcd/basis.hpp"
#include "hdgcd/mesh.hpp"

namespace hdgcd {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;

/// x = origin + jacobian * xi, mapping the reference triangle onto element k.
struct AffineMap {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inverse;
  double det = 0.0;

  static AffineMap of(const Mesh& mesh, std::size_t element);

  Vec2 to_physical(const Vec2& xi) const { return origin + jacobian * xi; }
  Vec2 to_reference(const Vec2& x) const { return inverse * (x - origin); }
};

/// Discontinuous piecewise P_k field; coefficients in the nodal ElementBasis.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(std::size_t num_elements, int degree);
  PiecewisePolynomial(int degree, Eigen::VectorXd coefficients);

  int degree() const { return basis_->degree(); }
  const ElementBasis& basis() const { return *basis_; }
  std::size_t num_elements() const { return num_elements_; }
  std::size_t per_element() const { return basis_->size(); }

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  Eigen::VectorXd& coefficients() { return coefficients_; }
  Eigen::VectorXd::ConstSegmentReturnType element(std::size_t k) const {
    return coefficients_.segment(static_cast<Eigen::Index>(k * per_element()),
                                 static_cast<Eigen::Index>(per_element()));
  }
  Eigen::VectorXd::SegmentReturnType element(std::size_t k) {
    return coefficients_.segment(static_cast<Eigen::Index>(k * per_element()),
                                 static_cast<Eigen::Index>(per_element()));
  }

  // Evaluation at physical point x, which must lie in element k.
  double value(const Mesh& mesh, std::size_t k, const Vec2& x) const;
  Vec2 gradient(const Mesh& mesh, std::size_t k, const Vec2& x) const;
  Mat2 hessian(const Mesh& mesh, std::size_t k, const Vec2& x) const;

 private:
  std::shared_ptr<const ElementBasis> basis_;
  std::size_t num_elements_;
  Eigen::VectorXd coefficients_;
};

/// L2(K) projection of f onto P_k(K), coefficients in `basis`.
Eigen::VectorXd project_element(const ScalarField& f, const Mesh& mesh,
                                std::size_t element, const ElementBasis& basis,
                                int quad_order = 12);

/// L2(e) projection of f onto P_k(e) in the edge parameter s running from
/// the edge's first to second vertex.
Eigen::VectorXd project_edge(const ScalarField& f, const Mesh& mesh,
                             std::size_t edge, const EdgeBasis& basis,
                             int quad_order = 12);

/// Elementwise projection of f onto the broken P_k space.
PiecewisePolynomial project_field(const ScalarField& f, const Mesh& mesh,
                                  int degree, int quad_order = 12);

}  // namespace hdgcd
