#include <doctest.h>

#include <cmath>

#include "hdgcd/analysis.hpp"
#include "hdgcd/problems.hpp"
#include "hdgcd/supg.hpp"

using namespace hdgcd;

TEST_CASE("tau formula and its limits") {
  // Pe = 1 with h = 1, |b| = 1: eps = 1/2.
  CHECK(supg_tau(1.0, 1.0, 0.5) == doctest::Approx(0.5 * (1.0 / std::tanh(1.0) - 1.0)).epsilon(1e-14));
  CHECK(supg_tau(1.0, 1.0, 0.5) == doctest::Approx(0.15652).epsilon(1e-4));
  // Convection dominated: tau -> h / (2|b|).
  CHECK(supg_tau(0.1, 2.0, 1e-12) == doctest::Approx(0.1 / 4.0).epsilon(1e-10));
  // Diffusion dominated: tau -> h/(2|b|) * Pe/3.
  const double pe = 1e-6;
  const double eps = 0.2 * 3.0 / (2.0 * pe);
  CHECK(supg_tau(0.2, 3.0, eps) == doctest::Approx(0.2 / 6.0 * pe / 3.0).epsilon(1e-10));
  CHECK(supg_tau(0.2, 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(supg_tau(0.2, 1.0, 0.0), std::invalid_argument);
  // The unscaled number ignores h inside Pe.
  CHECK(supg_tau(0.25, 1.0, 0.5, PecletScaling::Unscaled) ==
        doctest::Approx(0.125 * (1.0 / std::tanh(1.0) - 1.0)).epsilon(1e-14));
  CHECK(supg_tau(0.25, 1.0, 0.5) == doctest::Approx(0.125 * (1.0 / std::tanh(0.25) - 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(supg_tau(-0.2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tau is continuous across the evaluation switches and monotone in Pe") {
  auto tau_at = [](double pe) { return supg_tau(1.0, 1.0, 1.0 / (2.0 * pe)); };
  // Just above Pe = 1e-4 the closed form cancels about eight digits, so the
  // two branches can only agree to that level there.
  for (double sw : {1e-4, 50.0}) {
    const double below = tau_at(sw * (1 - 1e-12)), above = tau_at(sw * (1 + 1e-12));
    CHECK(std::abs(above - below) <= 1e-7 * above);
  }
  double prev = 0.0;
  for (double lp = -8.0; lp <= 4.0; lp += 0.01) {
    const double t = tau_at(std::pow(10.0, lp));
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("without stabilization the matrix is plain P1 Galerkin") {
  // Oracle: barycentric gradients and the edge-midpoint rule, exact for
  // the quadratic integrands below.
  ProblemSpec p;
  p.epsilon = 0.37;
  p.velocity = [](const Vec2& x) { return Vec2(1.0 + x.x(), 0.5 - x.y()); };
  p.reaction = [](const Vec2&) { return 1.25; };
  p.source = [](const Vec2&) { return 1.0; };
  const Mesh m = build_uniform_triangulation(5);
  SupgOptions opt;
  opt.stabilize = false;
  const SupgSystem sys = assemble_supg(p, m, opt);

  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(sys.matrix.rows(), sys.matrix.cols());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.rhs.size());
  for (std::size_t k = 0; k < m.num_elements(); ++k) {
    const auto v = m.element_vertices(k);
    const Triangle& t = m.triangles()[k];
    const double area = m.area(k);
    std::array<Vec2, 3> grad;
    for (int i = 0; i < 3; ++i) {
      const Vec2 e = v[static_cast<std::size_t>((i + 2) % 3)] - v[static_cast<std::size_t>((i + 1) % 3)];
      grad[static_cast<std::size_t>(i)] = Vec2(-e.y(), e.x()) / (2.0 * area);
    }
    for (int i = 0; i < 3; ++i) {
      const long row = sys.vertex_dof[t[static_cast<std::size_t>(i)]];
      if (row < 0) continue;
      rhs(row) += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        const long col = sys.vertex_dof[t[static_cast<std::size_t>(j)]];
        if (col < 0) continue;
        double a = p.epsilon * area * grad[static_cast<std::size_t>(i)].dot(grad[static_cast<std::size_t>(j)]);
        for (int q = 0; q < 3; ++q) {
          const Vec2 x = 0.5 * (v[static_cast<std::size_t>(q)] + v[static_cast<std::size_t>((q + 1) % 3)]);
          const double phi_i = (i == q || i == (q + 1) % 3) ? 0.5 : 0.0;
          const double phi_j = (j == q || j == (q + 1) % 3) ? 0.5 : 0.0;
          a += area / 3.0 * (p.velocity(x).dot(grad[static_cast<std::size_t>(j)]) + 1.25 * phi_j) * phi_i;
        }
        oracle(row, col) += a;
      }
    }
  }
  CHECK((Eigen::MatrixXd(sys.matrix) - oracle).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((sys.rhs - rhs).cwiseAbs().maxCoeff() <= 1e-15);
  for (double tau : sys.tau) CHECK(tau == 0.0);
  // Stabilized assembly differs.
  const SupgSystem stab = assemble_supg(p, m, {});
  CHECK((Eigen::MatrixXd(stab.matrix) - oracle).cwiseAbs().maxCoeff() > 1e-6);
  for (double tau : stab.tau) CHECK(tau > 0.0);
}

TEST_CASE("SUPG reproduces linear solutions with mixed conditions") {
  for (double eps : {1.0, 1e-4}) {
    const ManufacturedCase c = case_linear(eps);
    const Mesh m = build_uniform_triangulation(5, c.problem.boundary);
    const SupgSolution s = solve_supg(c.problem, m);
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
      CHECK(std::abs(s.nodal(static_cast<Eigen::Index>(v)) - m.vertex(v).x()) <= 1e-10);
    CHECK(error_l2(m, s.field, c.exact) <= 1e-10);
    CHECK(s.dofs() == m.num_vertices() - 6);
  }
}

TEST_CASE("SUPG converges at second order for the smooth case") {
  const ManufacturedCase c = case_smooth(1.0);
  double prev = 0.0, prev_unscaled = 0.0, rate_unscaled = 0.0;
  SupgOptions unscaled;
  unscaled.peclet = PecletScaling::Unscaled;
  for (int n : {8, 16, 32, 64}) {
    const Mesh m = build_uniform_triangulation(n);
    const double e = error_l2(m, solve_supg(c.problem, m).field, c.exact);
    const double eu = error_l2(m, solve_supg(c.problem, m, unscaled).field, c.exact);
    if (prev > 0.0) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    if (prev_unscaled > 0.0) rate_unscaled = std::log2(prev_unscaled / eu);
    prev = e;
    prev_unscaled = eu;
  }
  // With an h-independent Peclet number tau stays O(h) at eps = 1 and the
  // dropped -eps Lap u_h term costs an order.
  CHECK(rate_unscaled < 1.5);
}

TEST_CASE("SUPG overshoots at the outflow layer") {
  const ManufacturedCase c = case_layer(1e-6);
  const Mesh m = build_uniform_triangulation(10);
  SupgOptions so;
  so.load_quad_order = 12;
  AssemblyOptions ho;
  ho.load_quad_order = 12;
  const double supg = overshoot_metric(m, solve_supg(c.problem, m, so).field, 1.0);
  const double hdg = overshoot_metric(m, solve_hdg(c.problem, m, ho).interior, 1.0);
  CHECK(supg > hdg);
  CHECK(hdg <= 0.05);
}
