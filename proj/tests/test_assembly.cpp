#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hdgcd/assembly.hpp"
#include "hdgcd/problems.hpp"

using namespace hdgcd;

namespace {

// A skewed single element that is not a right triangle.
Mesh skewed_triangle() {
  return Mesh({{0.1, 0.0}, {1.0, 0.2}, {0.3, 0.9}}, {{0, 1, 2}},
              [](const Edge&) { return BoundaryTag::Dirichlet; });
}

Mesh skewed_mesh(int n, const BoundaryPartition& p) {
  const Mesh base = build_uniform_triangulation(n, p);
  std::vector<Vec2> v = base.vertices();
  for (Vec2& x : v) {
    // Perturb interior vertices only, keeping the boundary straight.
    if (x.x() > 0 && x.x() < 1 && x.y() > 0 && x.y() < 1)
      x += 0.15 / n * Vec2(std::sin(7 * x.y()), std::cos(5 * x.x()));
  }
  return Mesh(v, base.triangles(), p);
}

// Global vector of a discrete pair: interior by L2 projection, traces by
// edge projection (both exact for polynomials of the space degree).
Eigen::VectorXd interpolate_pair(const Mesh& m, const DofMap& d, const ScalarField& u) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.num_total()));
  const PiecewisePolynomial p = project_field(u, m, d.degree());
  x.head(static_cast<Eigen::Index>(d.num_interior())) = p.coefficients();
  const EdgeBasis eb(d.degree(), EdgeBasis::Kind::Orthonormal);
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    const auto dofs = d.edge_dofs(e);
    const Eigen::VectorXd c = project_edge(u, m, e, eb);
    for (std::size_t s = 0; s < dofs.size(); ++s)
      if (dofs[s] >= 0)
        x(static_cast<Eigen::Index>(d.num_interior()) + dofs[s]) = c(static_cast<Eigen::Index>(s));
  }
  return x;
}

}  // namespace

TEST_CASE("bracket identities on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  bool ok = true;
  for (int i = 0; i < 1000000; ++i) {
    const double x = i % 1000 == 0 ? 0.0 : u(rng);
    const Brackets b = bracket(x);
    ok = ok && b.plus - b.minus == x && b.plus + b.minus == std::abs(x) && b.plus >= 0.0 &&
         b.minus >= 0.0;
  }
  CHECK(ok);
  CHECK(bracket(-2.0).minus == 2.0);
  CHECK(bracket(3.0).plus == 3.0);
}

TEST_CASE("diffusive local matrices are symmetric and positive semidefinite") {
  const Mesh m = skewed_triangle();
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const ReferenceElement ref(k, SkeletonMode::Discontinuous, default_quad_order(k));
    const LocalBlocks b = local_diffusion(m, 0, ref, 0.7, default_eta(k));
    const Eigen::MatrixXd a = b.full();
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    CHECK(ev.minCoeff() > -1e-10 * ev.maxCoeff());
    // Constants (u = uhat = 1) lie in the kernel. Interior coefficients are
    // nodal; the orthonormal edge basis represents 1 as (1, 0, ..., 0).
    Eigen::VectorXd one = Eigen::VectorXd::Ones(a.rows());
    const Eigen::Index ni = static_cast<Eigen::Index>(ref.basis().size());
    for (Eigen::Index i = 0; i < 3 * (k + 1); ++i) one(ni + i) = i % (k + 1) == 0 ? 1.0 : 0.0;
    CHECK((a * one).norm() < 1e-11 * a.norm());
  }
  const ReferenceElement ref(1, SkeletonMode::Discontinuous, 4);
  CHECK_THROWS_AS(local_diffusion(m, 0, ref, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("convective form matches its energy identity and is nonnegative") {
  // B_rc(v, v) = 1/2 sum_K <|b.n| (vhat - v)^2>_{dK \ Gamma_N} + 1/2 <b.n v^2>_{Gamma_N}
  // for constant b and c = 0; evaluated here independently of the assembly.
  const Vec2 bvec(1.0, 0.35);
  for (auto part : {BoundaryPartition::all_dirichlet(), BoundaryPartition::dirichlet_left_only()}) {
    const Mesh m = skewed_mesh(3, part);
    for (int k = 1; k <= 2; ++k) {
      const DofMap d(m, k, SkeletonMode::Discontinuous);
      const ReferenceElement ref(k, SkeletonMode::Discontinuous, default_quad_order(k));
      std::vector<LocalBlocks> locals;
      for (std::size_t e = 0; e < m.num_elements(); ++e)
        locals.push_back(local_convection(m, e, ref, [&](const Vec2&) { return bvec; },
                                          [](const Vec2&) { return 0.0; }));
      const Eigen::SparseMatrix<double> a = assemble_monolithic(locals, d).matrix;
      const EdgeBasis eb(k, EdgeBasis::Kind::Orthonormal);
      const EdgeQuadrature rule = quad_edge(2 * k + 2);
      std::mt19937_64 rng(17);
      std::normal_distribution<double> g;
      double worst = 0.0, min_value = 1e300;
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x(a.rows());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
        const double assembled = x.dot(a * x);
        PiecewisePolynomial v(k, x.head(static_cast<Eigen::Index>(d.num_interior())));
        double oracle = 0.0;
        for (std::size_t el = 0; el < m.num_elements(); ++el)
          for (std::size_t e : m.element_edges(el)) {
            const Edge& edge = m.edge(e);
            const Vec2 n = m.outward_normal(el, e);
            const double bn = bvec.dot(n);
            Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
            const auto dofs = d.edge_dofs(e);
            for (std::size_t s = 0; s < dofs.size(); ++s)
              if (dofs[s] >= 0) c(static_cast<Eigen::Index>(s)) = x(static_cast<Eigen::Index>(d.num_interior()) + dofs[s]);
            for (std::size_t q = 0; q < rule.size(); ++q) {
              const double s = rule.points[q];
              const Vec2 p = m.vertex(edge.vertices[0]) + s * (m.vertex(edge.vertices[1]) - m.vertex(edge.vertices[0]));
              const double w = rule.weights[q] * edge.length;
              const double vk = v.value(m, el, p);
              if (edge.tag == BoundaryTag::Neumann)
                oracle += 0.5 * w * bn * vk * vk;
              else
                oracle += 0.5 * w * std::abs(bn) * std::pow(eb.values(s).dot(c) - vk, 2);
            }
          }
        worst = std::max(worst, std::abs(assembled - oracle) / std::max(1.0, std::abs(oracle)));
        min_value = std::min(min_value, assembled);
      }
      CHECK(worst < 1e-11);
      // Inflow through the Neumann bottom edge can make the left-only
      // variant indefinite, so nonnegativity is only asserted when all
      // boundaries are Dirichlet.
      if (part.bottom == BoundaryTag::Dirichlet) CHECK(min_value >= -1e-10);
    }
  }
}

TEST_CASE("local load integrates the source") {
  const Mesh m = skewed_triangle();
  const ReferenceElement ref(2, SkeletonMode::Discontinuous, 6);
  const LocalBlocks b = local_load(m, 0, ref, [](const Vec2&) { return 1.0; },
                                   [](const Vec2&, const Vec2&) { return 0.0; });
  CHECK(b.bu.sum() == doctest::Approx(m.area(0)).epsilon(1e-13));
  CHECK(b.bt.norm() == 0.0);
}

TEST_CASE("exact discrete solutions satisfy the assembled system (consistency)") {
  for (const ManufacturedCase& c : {case_linear(1.0), case_bilinear(1.0), case_linear(0.01)}) {
    CAPTURE(c.name);
    const int k = c.name == "bilinear" ? 2 : 1;
    const Mesh m = skewed_mesh(4, c.problem.boundary);
    AssemblyOptions opt;
    opt.degree = k;
    const DofMap d(m, k, SkeletonMode::Discontinuous);
    const MonolithicSystem sys = assemble_monolithic(m, d, c.problem, opt);
    const Eigen::VectorXd x = interpolate_pair(m, d, c.exact);
    const Eigen::VectorXd r = sys.matrix * x - sys.rhs;
    CHECK(r.lpNorm<Eigen::Infinity>() < 1e-12 * (1.0 + sys.rhs.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("monolithic assembly argument checks") {
  const Mesh m = build_uniform_triangulation(2);
  const ProblemSpec p;
  AssemblyOptions opt;
  CHECK_THROWS_AS(assemble_monolithic(m, DofMap(build_uniform_triangulation(3), 1, SkeletonMode::Discontinuous), p, opt),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble_monolithic(m, DofMap(m, 2, SkeletonMode::Discontinuous), p, opt),
                  std::invalid_argument);
  const MonolithicSystem sys = assemble_monolithic(m, DofMap(m, 1, SkeletonMode::Discontinuous), p, opt);
  CHECK(sys.matrix.rows() == static_cast<Eigen::Index>(DofMap(m, 1, SkeletonMode::Discontinuous).num_total()));
}

TEST_CASE("option defaults") {
  AssemblyOptions o;
  o.degree = 3;
  CHECK(o.resolved_eta() == 90.0);
  CHECK(o.resolved_quad_order() == 8);
  CHECK(o.resolved_load_quad_order() == 8);
  o.load_quad_order = 12;
  CHECK(o.resolved_load_quad_order() == 12);
}
