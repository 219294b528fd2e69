#include "hdgcd/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

#include "hdgcd/quadrature.hpp"

namespace hdgcd {
namespace {

constexpr double kRefTol = 1e-12;

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// d/dx x^p
double dpow(double x, int p) { return p == 0 ? 0.0 : p * ipow(x, p - 1); }
double ddpow(double x, int p) { return p < 2 ? 0.0 : p * (p - 1) * ipow(x, p - 2); }

}  // namespace

ElementBasis::ElementBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("element degree must be in [1, " +
                                std::to_string(kMaxDegree) + "]");
  const int k = degree;
  nodes_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i + j <= k; ++i) {
      const bool vertex = (i == 0 && j == 0) || (i == k && j == 0) || (i == 0 && j == k);
      if (!vertex) nodes_.emplace_back(static_cast<double>(i) / k, static_cast<double>(j) / k);
    }
  for (int total = 0; total <= k; ++total)
    for (int b = 0; b <= total; ++b) exponents_.emplace_back(total - b, b);

  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd vandermonde(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index m = 0; m < n; ++m) {
      const auto [a, b] = exponents_[static_cast<std::size_t>(m)];
      vandermonde(i, m) = ipow(nodes_[static_cast<std::size_t>(i)].x(), a) *
                          ipow(nodes_[static_cast<std::size_t>(i)].y(), b);
    }
  // phi_i(node_l) = delta_il  =>  V * C = I
  coefficients_ = vandermonde.fullPivLu().inverse();
}

void ElementBasis::check_point(const Eigen::Vector2d& p) const {
  if (p.x() < -kRefTol || p.y() < -kRefTol || p.x() + p.y() > 1.0 + kRefTol)
    throw std::invalid_argument("point outside the reference triangle");
}

Eigen::VectorXd ElementBasis::values(const Eigen::Vector2d& p) const {
  check_point(p);
  Eigen::VectorXd mono(static_cast<Eigen::Index>(exponents_.size()));
  for (std::size_t m = 0; m < exponents_.size(); ++m)
    mono(static_cast<Eigen::Index>(m)) = ipow(p.x(), exponents_[m].first) * ipow(p.y(), exponents_[m].second);
  return coefficients_.transpose() * mono;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ElementBasis::gradients(const Eigen::Vector2d& p) const {
  check_point(p);
  Eigen::Matrix<double, Eigen::Dynamic, 2> mono(static_cast<Eigen::Index>(exponents_.size()), 2);
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    const auto [a, b] = exponents_[m];
    const auto r = static_cast<Eigen::Index>(m);
    mono(r, 0) = dpow(p.x(), a) * ipow(p.y(), b);
    mono(r, 1) = ipow(p.x(), a) * dpow(p.y(), b);
  }
  return coefficients_.transpose() * mono;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> ElementBasis::hessians(const Eigen::Vector2d& p) const {
  check_point(p);
  Eigen::Matrix<double, Eigen::Dynamic, 3> mono(static_cast<Eigen::Index>(exponents_.size()), 3);
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    const auto [a, b] = exponents_[m];
    const auto r = static_cast<Eigen::Index>(m);
    mono(r, 0) = ddpow(p.x(), a) * ipow(p.y(), b);
    mono(r, 1) = dpow(p.x(), a) * dpow(p.y(), b);
    mono(r, 2) = ipow(p.x(), a) * ddpow(p.y(), b);
  }
  return coefficients_.transpose() * mono;
}

ElementBasis::Values ElementBasis::eval(const Eigen::Vector2d& point) const {
  return {values(point), gradients(point)};
}

Eigen::MatrixXd ElementBasis::mass_matrix() const {
  const TriangleQuadrature rule = quad_triangle(2 * degree_);
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd phi = values(rule.points[q]);
    mass += rule.weights[q] * phi * phi.transpose();
  }
  return mass;
}

EdgeBasis::EdgeBasis(int degree, Kind kind) : degree_(degree), kind_(kind) {
  if (degree < 0 || degree > ElementBasis::kMaxDegree)
    throw std::invalid_argument("edge degree out of range");
  if (kind == Kind::Nodal && degree < 1)
    throw std::invalid_argument("nodal edge basis needs degree >= 1");
}

Eigen::VectorXd EdgeBasis::values(double s) const {
  if (s < -kRefTol || s > 1.0 + kRefTol)
    throw std::invalid_argument("edge coordinate outside [0, 1]");
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::VectorXd v(n);
  if (kind_ == Kind::Orthonormal) {
    const double x = 2.0 * s - 1.0;
    double p0 = 1.0, p1 = x;
    for (Eigen::Index m = 0; m < n; ++m) {
      double pm;
      if (m == 0) {
        pm = 1.0;
      } else if (m == 1) {
        pm = x;
      } else {
        pm = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = pm;
      }
      v(m) = std::sqrt(2.0 * m + 1.0) * pm;
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double si = static_cast<double>(i) / degree_;
      double l = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double sj = static_cast<double>(j) / degree_;
        l *= (s - sj) / (si - sj);
      }
      v(i) = l;
    }
  }
  return v;
}

Eigen::MatrixXd EdgeBasis::mass_matrix() const {
  const EdgeQuadrature rule = quad_edge(2 * degree_);
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd psi = values(rule.points[q]);
    mass += rule.weights[q] * psi * psi.transpose();
  }
  return mass;
}

}  // namespace hdgcd
