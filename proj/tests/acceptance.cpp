// Acceptance gate: one PASS/FAIL line per criterion; exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hdgcd/analysis.hpp"
#include "hdgcd/problems.hpp"
#include "hdgcd/study.hpp"

using namespace hdgcd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) m = std::max(m, std::abs(f(Vec2(i / 200.0, j / 200.0))));
  return m;
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Largest conservation residual seen, relative to 1 + |f|_inf; fed by
// criteria 1 to 3 and checked by criterion 5.
struct ConservationLog {
  double worst = 0.0;
  int configurations = 0;
  void add(double residual, double fmax) {
    worst = std::max(worst, residual / (1.0 + fmax));
    ++configurations;
  }
};

Outcome consistency(ConservationLog& log) {
  const Clock clock;
  double worst = 0.0;
  for (const auto& [c, k] : {std::pair{case_linear(1.0), 1}, std::pair{case_bilinear(1.0), 2}}) {
    const Mesh m = mesh_for(c, 4);
    AssemblyOptions opt;
    opt.degree = k;
    const HdgSolution s = solve_hdg(c.problem, m, opt);
    worst = std::max(worst, error_l2(m, s.interior, c.exact));
    log.add(conservation_residual(m, s, c.problem).lpNorm<Eigen::Infinity>(), sup_norm(c.problem.source));
  }
  const double t = clock.seconds();
  return {worst <= 1e-10 && t < 1.0, fmt::format("max L2 error {:.2e}, {:.2f} s", worst, t)};
}

std::vector<StudyTable> smooth_tables;

Outcome smooth_rates(ConservationLog& log) {
  const Clock clock;
  bool ok = true;
  std::string detail;
  for (double eps : {1.0, 1e-3, 1e-6}) {
    RunConfig c;
    c.epsilon = eps;
    c.mesh_sizes = {8, 16, 32, 64};
    StudyTable t = run_convergence_study(c);
    const StudyRow& last = t.rows.back();
    const double rl2 = last.rate_l2.value_or(NAN), rh1 = last.rate_h1.value_or(NAN);
    ok = ok && in(rl2, 1.8, 2.2) && in(rh1, 0.8, 1.2);
    detail += fmt::format("eps={:g}: L2 {:.3f} H1 {:.3f}; ", eps, rl2, rh1);
    const double fmax = sup_norm(case_smooth(eps).problem.source);
    for (const StudyRow& r : t.rows) {
      ok = ok && r.status == "ok";
      log.add(r.conservation.value_or(INFINITY), fmax);
    }
    smooth_tables.push_back(std::move(t));
  }
  const double t = clock.seconds();
  return {ok && t < 30.0, detail + fmt::format("{:.2f} s", t)};
}

Outcome hdg_norm_rate() {
  const StudyRow& last = smooth_tables.at(2).rows.back();
  const double r = last.rate_hdg.value_or(NAN);
  return {last.epsilon == 1e-6 && in(r, 1.3, 1.7), fmt::format("eps=1e-6 HDG-norm rate {:.3f}", r)};
}

Outcome condensation() {
  const Clock clock;
  double worst = 0.0;
  for (int n : {1, 2, 4})
    for (int k : {1, 2})
      for (double eps : {1.0, 1e-3}) {
        const ManufacturedCase c = case_smooth(eps);
        const Mesh m = mesh_for(c, n);
        AssemblyOptions opt;
        opt.degree = k;
        const HdgSolution a = solve_hdg(c.problem, m, opt);
        const HdgSolution b = solve_monolithic(c.problem, m, opt);
        Eigen::VectorXd x(a.total_dofs()), y(b.total_dofs());
        x << a.interior.coefficients(), a.traces;
        y << b.interior.coefficients(), b.traces;
        worst = std::max(worst, (x - y).norm() / y.norm());
      }
  const double t = clock.seconds();
  return {worst <= 1e-10 && t < 5.0, fmt::format("max relative difference {:.2e}, {:.2f} s", worst, t)};
}

Outcome conservation(const ConservationLog& log) {
  return {log.worst <= 1e-9 && log.configurations > 0,
          fmt::format("max |r_K| / (1 + |f|_inf) = {:.2e} over {} solves", log.worst, log.configurations)};
}

Outcome coercivity() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Diffusive local matrices on random elements.
  double asym = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> v = {{0, 0}, {1, 0}, {0, 1}};
    for (Vec2& p : v) p += 0.3 * Vec2(u(rng), u(rng));
    if ((v[1] - v[0]).x() * (v[2] - v[0]).y() - (v[1] - v[0]).y() * (v[2] - v[0]).x() <= 0.05) continue;
    const Mesh m(v, {{0, 1, 2}}, [](const Edge&) { return BoundaryTag::Dirichlet; });
    for (int k = 1; k <= 3; ++k) {
      const ReferenceElement ref(k, SkeletonMode::Discontinuous, default_quad_order(k));
      const Eigen::MatrixXd a = local_diffusion(m, 0, ref, 1.0, default_eta(k)).full();
      asym = std::max(asym, (a - a.transpose()).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
    }
  }

  // B_rc(v, v) for constant b and c = 0.
  const Mesh m = build_uniform_triangulation(4);
  const DofMap d(m, 2, SkeletonMode::Discontinuous);
  const ReferenceElement ref(2, SkeletonMode::Discontinuous, default_quad_order(2));
  std::vector<LocalBlocks> locals;
  for (std::size_t k = 0; k < m.num_elements(); ++k)
    locals.push_back(local_convection(m, k, ref, [](const Vec2&) { return Vec2(0.8, -0.6); },
                                      [](const Vec2&) { return 0.0; }));
  const Eigen::SparseMatrix<double> a = assemble_monolithic(locals, d).matrix;
  double min_brc = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    min_brc = std::min(min_brc, x.dot(a * x));
  }

  // Brackets.
  std::uniform_real_distribution<double> wide(-1e6, 1e6);
  bool brackets = true;
  for (int i = 0; i < 1000000; ++i) {
    const double x = wide(rng);
    const Brackets b = bracket(x);
    brackets = brackets && b.plus - b.minus == x && b.plus + b.minus == std::abs(x) && b.plus >= 0 && b.minus >= 0;
  }
  return {asym <= 1e-12 && min_brc >= -1e-10 && brackets,
          fmt::format("asymmetry {:.1e}, min B_rc(v,v) {:.3e}, brackets {}", asym, min_brc,
                      brackets ? "exact" : "violated")};
}

Outcome boundary_layer() {
  const Clock clock;
  RunConfig c;
  c.problem = "layer";
  c.epsilon = 1e-6;
  c.mesh_sizes = {10, 20, 40, 80};
  const StudyTable t = run_layer_study(c);
  const StudyRow& hdg_last = t.rows[3];
  const StudyRow& hdg10 = t.rows[0];
  const StudyRow& supg10 = t.rows[4];
  const double rate = hdg_last.rate_l2.value_or(NAN);
  const double oh = hdg10.overshoot.value_or(NAN), os = supg10.overshoot.value_or(NAN);
  bool ok = in(rate, 1.8, 2.2) && oh <= 0.05 && os > oh;
  for (const StudyRow& r : t.rows) ok = ok && r.status == "ok";
  const double secs = clock.seconds();
  return {ok && secs < 60.0,
          fmt::format("L2 rate in (0,0.9)^2 {:.3f}; overshoot hdg {:.4f}, supg {:.4f}; {:.2f} s", rate, oh,
                      os, secs)};
}

Outcome skeleton_modes() {
  RunConfig c;
  c.problem = "layer";
  c.epsilon = 1e-6;
  c.mesh_sizes = {10};
  const StudyTable t = run_skeleton_mode_comparison(c);
  const double dg = t.rows[0].overshoot.value_or(NAN), cg = t.rows[1].overshoot.value_or(NAN);
  return {cg > dg, fmt::format("overshoot dg {:.4f}, cg {:.4f}", dg, cg)};
}

Outcome reduced_limit() {
  RunConfig c;
  c.problem = "reduced_limit";
  c.mesh_sizes = {16};
  c.epsilons = {1e-2, 1e-4, 1e-6};
  const ReducedLimitTable t = run_reduced_limit_study(c);
  std::string detail;
  for (const auto& r : t.rows) detail += fmt::format("eps={:g}: {:.3e}; ", r.epsilon, r.dist_l2);
  return {t.bounded, detail + fmt::format("last ratio {:.3f}", t.last_ratio)};
}

Outcome dof_reduction() {
  const int n = 32, k = 1;
  const Mesh m = build_uniform_triangulation(n);
  const DofMap d(m, k, SkeletonMode::Discontinuous);
  const std::size_t nn = n, kk = k;
  const std::size_t interior = 2 * nn * nn * (kk + 1) * (kk + 2) / 2;
  const std::size_t skeleton = (3 * nn * nn - 2 * nn) * (kk + 1);
  const bool counts = d.num_interior() == interior && d.num_trace() == skeleton;
  const double ratio = static_cast<double>(d.num_trace()) / static_cast<double>(d.num_total());
  const DofMap cg(m, 1, SkeletonMode::Continuous);
  const double cg_ratio = static_cast<double>(cg.num_trace()) / static_cast<double>(cg.num_total());
  return {counts && ratio < 0.45,
          fmt::format("skeleton {} of {} ({:.1f}%), counts {}; continuous skeleton would give {} of {} ({:.1f}%)",
                      d.num_trace(), d.num_total(), 100 * ratio, counts ? "match" : "differ", cg.num_trace(),
                      cg.num_total(), 100 * cg_ratio)};
}

}  // namespace

int main() {
  ConservationLog log;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"polynomial consistency", [&] { return consistency(log); }},
      {"smooth-case optimal rates", [&] { return smooth_rates(log); }},
      {"HDG-norm rate", hdg_norm_rate},
      {"condensation equivalence", condensation},
      {"local conservation", [&] { return conservation(log); }},
      {"coercivity properties", coercivity},
      {"boundary-layer study", boundary_layer},
      {"continuous-skeleton comparison", skeleton_modes},
      {"reduced-limit boundedness", reduced_limit},
      {"skeleton dof reduction", dof_reduction},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    failures += !o.pass;
    fmt::print("criterion {:2} {} {}: {}\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
