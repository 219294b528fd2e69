#pragma once
// Reference-element polynomial bases.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace hdgcd {

/// Nodal Lagrange basis of P_k on the reference triangle with vertices
/// (0,0), (1,0), (0,1). Nodes are the equispaced lattice, vertices first, so
/// for k = 1 the basis functions are the barycentric coordinates in vertex
/// order.
class ElementBasis {
 public:
  static constexpr int kMaxDegree = 6;

  explicit ElementBasis(int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

  struct Values {
    Eigen::VectorXd values;               // size()
    Eigen::Matrix<double, Eigen::Dynamic, 2> gradients;  // size() x 2
  };

  /// Throws std::invalid_argument when `point` lies outside the closed
  /// reference triangle (tolerance 1e-12).
  Values eval(const Eigen::Vector2d& point) const;

  Eigen::VectorXd values(const Eigen::Vector2d& point) const;
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Eigen::Vector2d& point) const;
  /// Rows are (d_xx, d_xy, d_yy) per basis function.
  Eigen::Matrix<double, Eigen::Dynamic, 3> hessians(const Eigen::Vector2d& point) const;

  /// Reference mass matrix, exactly integrated.
  Eigen::MatrixXd mass_matrix() const;

 private:
  void check_point(const Eigen::Vector2d& point) const;

  int degree_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::pair<int, int>> exponents_;  // monomials x^a y^b
  Eigen::MatrixXd coefficients_;  // column i = monomial coefficients of phi_i
};

/// 1-D basis of P_k on [0, 1].
class EdgeBasis {
 public:
  enum class Kind {
    Orthonormal,  // scaled shifted Legendre, orthonormal in L2(0,1)
    Nodal,        // Lagrange at equispaced nodes, node 0 at s = 0
  };

  EdgeBasis(int degree, Kind kind);

  int degree() const { return degree_; }
  Kind kind() const { return kind_; }
  std::size_t size() const { return static_cast<std::size_t>(degree_) + 1; }

  /// Values at s in [0, 1]; throws std::invalid_argument outside.
  Eigen::VectorXd values(double s) const;
  Eigen::MatrixXd mass_matrix() const;

 private:
  int degree_;
  Kind kind_;
};

}  // namespace hdgcd
