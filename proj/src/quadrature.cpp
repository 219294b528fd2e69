#include "hdgcd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace hdgcd {
namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxQuadratureOrder)
    throw std::invalid_argument("unsupported quadrature order " + std::to_string(order));
}

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

EdgeQuadrature gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints must be >= 1");
  const int n = npoints;
  EdgeQuadrature rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    auto [p, dp] = legendre(n, x);
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = p / dp;
      x -= dx;
      std::tie(p, dp) = legendre(n, x);
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.points[lo] = 0.5 * (1.0 - x);
    rule.points[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  if (n % 2 == 1) rule.points[static_cast<std::size_t>(n / 2)] = 0.5;
  return rule;
}

EdgeQuadrature quad_edge(int order) {
  check_order(order);
  EdgeQuadrature rule = gauss_legendre(std::max(1, (order + 2) / 2));
  rule.degree = std::max(order, rule.degree);
  return rule;
}

TriangleQuadrature quad_triangle(int order) {
  check_order(order);
  // x = u, y = (1 - u) v, dxdy = (1 - u) dudv; the u-integrand gains one degree.
  const int npoints = std::max(1, (order + 2 + 1) / 2);
  const EdgeQuadrature g = gauss_legendre(npoints);
  TriangleQuadrature rule;
  rule.degree = order;
  rule.points.reserve(g.size() * g.size());
  rule.weights.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.points[i];
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = g.points[j];
      rule.points.emplace_back(u, (1.0 - u) * v);
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace hdgcd
