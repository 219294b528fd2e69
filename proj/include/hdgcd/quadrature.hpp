#pragma once

#include <vector>

#include <Eigen/Core>

namespace hdgcd {

/// Points and positive weights on a reference cell, exact for polynomials of
/// total degree <= `degree`.
template <class Point>
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Reference triangle {(x, y) : x, y >= 0, x + y <= 1}; weights sum to 1/2.
using TriangleQuadrature = QuadratureRule<Eigen::Vector2d>;
/// Unit interval [0, 1]; weights sum to 1.
using EdgeQuadrature = QuadratureRule<double>;

inline constexpr int kMaxQuadratureOrder = 40;

/// Gauss-Legendre on [0, 1] with `npoints` nodes (exact to 2*npoints - 1).
EdgeQuadrature gauss_legendre(int npoints);

/// Throws std::invalid_argument for order < 0 or order > kMaxQuadratureOrder.
EdgeQuadrature quad_edge(int order);

/// Collapsed (Duffy) tensor product of Gauss-Legendre rules.
TriangleQuadrature quad_triangle(int order);

}  // namespace hdgcd
