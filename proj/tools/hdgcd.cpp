// Command-line driver for the convection-diffusion studies.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hdgcd/kernels.hpp"
#include "hdgcd/study.hpp"

namespace {

using namespace hdgcd;

// Values as given on the command line; applied over the config file.
struct Flags {
  std::string config_file;
  std::string problem, method, skeleton, out, dump;
  int degree = 0;
  double epsilon = 0.0, eta = 0.0;
  std::vector<int> n;
  std::vector<double> epsilons;
};

struct Options {
  CLI::Option* problem = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* degree = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* eta = nullptr;
  CLI::Option* skeleton = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* epsilons = nullptr;
};

Options add_run_flags(CLI::App* app, Flags& f) {
  Options o;
  app->add_option("--config", f.config_file, "key = value file; flags override it");
  o.problem = app->add_option("--problem", f.problem, "smooth, layer, reduced_limit, linear, bilinear");
  o.method = app->add_option("--method", f.method, "hdg or supg");
  o.degree = app->add_option("--degree,-k", f.degree, "polynomial degree");
  o.epsilon = app->add_option("--epsilon", f.epsilon, "diffusion coefficient");
  o.n = app->add_option("--n", f.n, "cells per side (repeat or comma-separate)")->delimiter(',');
  o.eta = app->add_option("--eta", f.eta, "penalty (default 10 k^2)");
  o.skeleton = app->add_option("--skeleton", f.skeleton, "dg or cg");
  o.out = app->add_option("--out,-o", f.out, "output path (default stdout)");
  o.epsilons = app->add_option("--epsilons", f.epsilons, "epsilon sweep")->delimiter(',');
  return o;
}

RunConfig resolve(const Flags& f, const Options& o, RunConfig base) {
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", f.config_file));
    apply_config_file(in, base);
  }
  if (o.problem->count()) base.problem = f.problem;
  if (o.method->count()) base.method = parse_method(f.method);
  if (o.degree->count()) base.degree = f.degree;
  if (o.epsilon->count()) base.epsilon = f.epsilon;
  if (o.n->count()) base.mesh_sizes = f.n;
  if (o.eta->count()) base.eta = f.eta;
  if (o.skeleton->count()) base.skeleton = parse_skeleton(f.skeleton);
  if (o.out->count()) base.output = f.out;
  if (o.epsilons->count()) base.epsilons = f.epsilons;
  base.validate();
  return base;
}

template <class Body>
void emit(const std::string& path, Body&& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  body(out);
}

int failed_rows(const StudyTable& t) {
  int failed = 0;
  for (const auto& r : t.rows) failed += r.status != "ok";
  return failed;
}

void print_error(std::string_view kind, std::string_view message) {
  nlohmann::json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybridized DG solver for 2-D convection-diffusion-reaction problems"};
  app.require_subcommand(1);

  Flags f;
  int status = 0;

  auto* conv = app.add_subcommand("convergence", "convergence study over a mesh sequence");
  const Options conv_opt = add_run_flags(conv, f);
  auto* layer = app.add_subcommand("layer", "boundary-layer study, hdg against supg");
  const Options layer_opt = add_run_flags(layer, f);
  layer->add_option("--dump", f.dump, "prefix for field dumps on the coarsest mesh");
  auto* limit = app.add_subcommand("reduced-limit", "distance to the reduced solution as eps -> 0");
  const Options limit_opt = add_run_flags(limit, f);
  auto* skel = app.add_subcommand("skeleton-compare", "discontinuous vs continuous skeleton");
  const Options skel_opt = add_run_flags(skel, f);
  skel->add_option("--dump", f.dump, "prefix for field dumps on the coarsest mesh");
  auto* solve = app.add_subcommand("solve", "single solve; writes the coefficient dump");
  const Options solve_opt = add_run_flags(solve, f);
  auto* mesh_cmd = app.add_subcommand("mesh", "write a uniform mesh of the given problem");
  const Options mesh_opt = add_run_flags(mesh_cmd, f);
  app.add_subcommand("info", "report the active SIMD kernel set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) print_error("usage", e.what());
    return app.exit(e);
  }

  try {
    if (conv->parsed()) {
      const RunConfig cfg = resolve(f, conv_opt, {});
      const StudyTable t = run_convergence_study(cfg);
      emit(cfg.output, [&](std::ostream& o) { write_csv(t, o); });
      if (failed_rows(t)) status = 3;
    } else if (layer->parsed()) {
      RunConfig base;
      base.problem = "layer";
      base.epsilon = 1e-6;
      base.mesh_sizes = {10, 20, 40, 80};
      const RunConfig cfg = resolve(f, layer_opt, base);
      const StudyTable t = run_layer_study(cfg, f.dump);
      emit(cfg.output, [&](std::ostream& o) { write_csv(t, o); });
      if (failed_rows(t)) status = 3;
    } else if (limit->parsed()) {
      RunConfig base;
      base.problem = "reduced_limit";
      base.mesh_sizes = {16};
      const RunConfig cfg = resolve(f, limit_opt, base);
      const ReducedLimitTable t = run_reduced_limit_study(cfg);
      emit(cfg.output, [&](std::ostream& o) { write_csv(t, o); });
      for (const auto& r : t.rows) status = r.status == "ok" ? status : 3;
    } else if (skel->parsed()) {
      RunConfig base;
      base.problem = "layer";
      base.epsilon = 1e-6;
      base.mesh_sizes = {10};
      const RunConfig cfg = resolve(f, skel_opt, base);
      const StudyTable t = run_skeleton_mode_comparison(cfg, f.dump);
      emit(cfg.output, [&](std::ostream& o) { write_csv(t, o); });
      if (failed_rows(t)) status = 3;
    } else if (solve->parsed()) {
      RunConfig base;
      base.mesh_sizes = {8};
      const RunConfig cfg = resolve(f, solve_opt, base);
      const ManufacturedCase c = case_by_name(cfg.problem, cfg.epsilon);
      const Mesh mesh = mesh_for(c, cfg.mesh_sizes.front());
      if (cfg.method == Method::Hdg) {
        AssemblyOptions opt;
        opt.degree = cfg.degree;
        opt.skeleton = cfg.skeleton;
        opt.eta = cfg.eta;
        opt.load_quad_order = c.load_quad_order;
        const HdgSolution sol = solve_hdg(c.problem, mesh, opt);
        emit(cfg.output, [&](std::ostream& o) { write_solution(sol, o); });
      } else {
        SupgOptions opt;
        if (c.load_quad_order > 0) opt.load_quad_order = c.load_quad_order;
        const SupgSolution sol = solve_supg(c.problem, mesh, opt);
        emit(cfg.output, [&](std::ostream& o) {
          for (Eigen::Index v = 0; v < sol.nodal.size(); ++v)
            o << fmt::format("V {} {:.17g}\n", v, sol.nodal(v));
        });
      }
    } else if (mesh_cmd->parsed()) {
      RunConfig base;
      base.mesh_sizes = {8};
      const RunConfig cfg = resolve(f, mesh_opt, base);
      const ManufacturedCase c = case_by_name(cfg.problem, cfg.epsilon);
      const Mesh mesh = mesh_for(c, cfg.mesh_sizes.front());
      emit(cfg.output, [&](std::ostream& o) { write_mesh(mesh, o); });
    } else {
      fmt::print("kernels: {} (detected {})\n", kernels::isa_name(kernels::active_isa()),
                 kernels::isa_name(kernels::detected_isa()));
    }
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return 2;
  } catch (const ProblemError& e) {
    print_error("problem", e.what());
    return 2;
  } catch (const ElementSolvabilityError& e) {
    print_error("element", e.what());
    return 4;
  } catch (const SingularSystemError& e) {
    print_error("singular", e.what());
    return 4;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 1;
  }
  if (status != 0) print_error("study", "one or more rows failed; see the status column");
  return status;
}
