#pragma once
// Error norms, HDG-norm components, local conservation residuals,
// convergence rates and overshoot metrics.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdgcd/field.hpp"
#include "hdgcd/mesh.hpp"
#include "hdgcd/problem.hpp"
#include "hdgcd/solver.hpp"

namespace hdgcd {

inline constexpr int kErrorQuadOrder = 12;

/// Measurement region (0, upper)^2. An element belongs to the region iff its
/// barycenter does.
struct Region {
  double upper = 1.0;

  static Region full() { return {1.0}; }
  bool contains(const Vec2& p) const {
    return p.x() > 0.0 && p.x() < upper && p.y() > 0.0 && p.y() < upper;
  }
  bool is_full() const { return upper >= 1.0; }
};

/// A function pair {v, vhat}: broken interior part plus a skeleton trace.
struct BrokenPair {
  std::function<double(std::size_t element, const Vec2& x)> value;
  std::function<Vec2(std::size_t element, const Vec2& x)> gradient;
  std::function<Mat2(std::size_t element, const Vec2& x)> hessian;
  /// Trace on `edge` at point x, which sits at parameter s along the edge.
  std::function<double(std::size_t edge, const Vec2& x, double s)> trace;
};

/// {u_h, uhat_h}. The pair references `mesh` and `solution`.
BrokenPair discrete_pair(const Mesh& mesh, const HdgSolution& solution);
/// {u, u restricted to the skeleton}.
BrokenPair exact_pair(ScalarField u, VectorField gradient, MatrixField hessian);
BrokenPair operator-(const BrokenPair& a, const BrokenPair& b);

/// Squared components of the HDG norm; all non-negative.
struct ErrorReport {
  double epsilon = 0.0;
  double rho0 = 0.0;
  double l2_sq = 0.0;      // ||v||_0^2
  double h1_sq = 0.0;      // |v|_{1,h}^2
  double h2_sq = 0.0;      // sum_K h_K^2 |v|_{2,K}^2
  double jump_sq = 0.0;    // sum_K sum_e (eta/h_e) ||vhat - v||_e^2
  double upwind_sq = 0.0;  // sum_K || |b.n|^{1/2} (vhat - v) ||^2
  double boundary_sq = 0.0;  // sum_K ||v||_{0,dK}^2
  /// The HDG norm squared accumulated directly, point by point.
  double hdg_sq_direct = 0.0;
  Region region;

  double err_l2() const;
  double err_h1_broken() const;
  double err_jump() const;
  /// ||.||_rc: upwind edge term plus rho0 ||v||^2.
  double err_rc() const;
  /// ||.||: recombined from the stored components.
  double err_hdg() const;
  /// ||.||_*: adds ||v||_0^2 + sum_K ||v||_{0,dK}^2 to the rc part.
  double err_star() const;
};

/// HDG-norm components of `pair` with respect to `problem` and penalty `eta`.
ErrorReport hdg_norm(const Mesh& mesh, const BrokenPair& pair, const ProblemSpec& problem,
                     double eta, Region region = Region::full(), int quad_order = kErrorQuadOrder);

double error_l2(const Mesh& mesh, const PiecewisePolynomial& field, const ScalarField& exact,
                Region region = Region::full(), int quad_order = kErrorQuadOrder);

/// sqrt(sum_K |u_h - u|_{1,K}^2).
double error_h1_broken(const Mesh& mesh, const PiecewisePolynomial& field,
                       const VectorField& exact_gradient, Region region = Region::full(),
                       int quad_order = kErrorQuadOrder);

/// Per-element residual of the local flux balance
///   int_K (b.grad u_h + c u_h) - int_{dK \ Gamma_N} sigma.n - int_K f - int_{dK cap Gamma_N} g_N
/// with the upwind flux sigma.n = eps (du_h/dn + (eta/h_e)(uhat_h - u_h)) + [b.n]_- (uhat_h - u_h).
/// Uses the quadrature recorded in the solution's options.
Eigen::VectorXd conservation_residual(const Mesh& mesh, const HdgSolution& solution,
                                      const ProblemSpec& problem);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); nullopt where an error
/// is zero. Throws std::invalid_argument on size mismatch or when h is not
/// strictly decreasing.
std::vector<std::optional<double>> convergence_rates(std::span<const double> errors,
                                                     std::span<const double> h);

/// max over element vertices and quadrature points of u_h, minus exact_max.
double overshoot_metric(const Mesh& mesh, const PiecewisePolynomial& field, double exact_max,
                        Region region = Region::full());

/// Finds the element containing a point by bucket search.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  /// Throws std::out_of_range when no element contains the point.
  std::size_t locate(const Vec2& x) const;

 private:
  const Mesh& mesh_;
  int cells_;
  Vec2 lo_, hi_;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace hdgcd
