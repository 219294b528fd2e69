#include "hdgcd/study.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace hdgcd {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Status strings end up inside a CSV cell.
std::string sanitize(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; },
                  ';');
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, value));
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, value));
  }
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(key, trim(item)));
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.10e}", *v) : ""; }

void ensure_source(const ManufacturedCase& c) {
  const SourceCheck check = verify_source(c);
  if (!check.ok)
    throw ProblemError(fmt::format("source of case '{}' disagrees with its exact solution "
                                   "(relative {:.3e} at ({}, {}))",
                                   c.name, check.max_relative, check.worst.x(), check.worst.y()));
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  body(out);
}

}  // namespace

std::string to_string(Method m) { return m == Method::Hdg ? "hdg" : "supg"; }
std::string to_string(SkeletonMode m) { return m == SkeletonMode::Discontinuous ? "dg" : "cg"; }

Method parse_method(std::string_view s) {
  if (s == "hdg") return Method::Hdg;
  if (s == "supg") return Method::Supg;
  throw ConfigError(fmt::format("method: expected hdg or supg, got '{}'", s));
}

SkeletonMode parse_skeleton(std::string_view s) {
  if (s == "dg") return SkeletonMode::Discontinuous;
  if (s == "cg") return SkeletonMode::Continuous;
  throw ConfigError(fmt::format("skeleton: expected dg or cg, got '{}'", s));
}

void RunConfig::validate() const {
  if (degree < 1) throw ConfigError(fmt::format("degree must be >= 1, got {}", degree));
  if (mesh_sizes.empty()) throw ConfigError("at least one mesh size is required");
  for (int n : mesh_sizes)
    if (n < 1) throw ConfigError(fmt::format("mesh sizes must be >= 1, got {}", n));
  if (!(epsilon > 0.0)) throw ConfigError(fmt::format("epsilon must be positive, got {}", epsilon));
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError(fmt::format("epsilons must be positive, got {}", e));
  if (skeleton == SkeletonMode::Continuous && degree != 1)
    throw ConfigError("the continuous skeleton requires degree 1");
  if (method == Method::Supg && degree != 1) throw ConfigError("supg requires degree 1");
  const auto names = case_names();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw ConfigError(fmt::format("unknown problem '{}'", problem));
}

void apply_config_file(std::istream& in, RunConfig& config) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("line {}: expected key = value", lineno));
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key == "problem") config.problem = value;
    else if (key == "method") config.method = parse_method(value);
    else if (key == "degree") config.degree = parse_int(key, value);
    else if (key == "epsilon") config.epsilon = parse_double(key, value);
    else if (key == "n") config.mesh_sizes = parse_list<int>(key, value, parse_int);
    else if (key == "eta") config.eta = parse_double(key, value);
    else if (key == "skeleton") config.skeleton = parse_skeleton(value);
    else if (key == "out") config.output = value;
    else if (key == "epsilons") config.epsilons = parse_list<double>(key, value, parse_double);
    else throw ConfigError(fmt::format("line {}: unknown key '{}'", lineno, key));
  }
}

void compute_rates(StudyTable& table) {
  auto& rows = table.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    StudyRow& cur = rows[i];
    if (cur.status != "ok") continue;
    // Previous ok row of the same series.
    for (std::size_t j = i; j-- > 0;) {
      const StudyRow& prev = rows[j];
      if (prev.method != cur.method || prev.skeleton != cur.skeleton ||
          prev.problem != cur.problem || prev.epsilon != cur.epsilon)
        continue;
      if (prev.status != "ok") break;
      if (!(cur.h < prev.h)) break;
      const double h[2] = {prev.h, cur.h};
      auto rate = [&](double a, double b) {
        const double e[2] = {a, b};
        return convergence_rates(e, h).front();
      };
      cur.rate_l2 = rate(prev.err_l2, cur.err_l2);
      cur.rate_h1 = rate(prev.err_h1, cur.err_h1);
      if (prev.err_hdg && cur.err_hdg) cur.rate_hdg = rate(*prev.err_hdg, *cur.err_hdg);
      break;
    }
  }
}

void write_csv(const StudyTable& table, std::ostream& out) {
  out << kCsvSchema << '\n';
  out << "method,skeleton,problem,epsilon,n,h,dofs_total,dofs_skeleton,err_l2,err_h1,err_hdg,"
         "rate_l2,rate_h1,rate_hdg,overshoot,conservation,status\n";
  for (const StudyRow& r : table.rows) {
    out << fmt::format("{},{},{},{:.6e},{},{:.10e},{},{},{:.10e},{:.10e},{},{},{},{},{},{},{}\n",
                       r.method, r.skeleton, r.problem, r.epsilon, r.n, r.h, r.dofs_total,
                       r.dofs_skeleton, r.err_l2, r.err_h1, cell(r.err_hdg), cell(r.rate_l2),
                       cell(r.rate_h1), cell(r.rate_hdg), cell(r.overshoot), cell(r.conservation),
                       sanitize(r.status));
  }
}

Mesh mesh_for(const ManufacturedCase& c, int n) {
  return build_uniform_triangulation(n, c.problem.boundary);
}

StudyRow run_hdg(const ManufacturedCase& c, int n, int degree, SkeletonMode mode, double eta,
                 std::optional<HdgSolution>* keep) {
  StudyRow row;
  row.method = "hdg";
  row.skeleton = to_string(mode);
  row.problem = c.name;
  row.epsilon = c.problem.epsilon;
  row.n = n;
  try {
    const Mesh mesh = mesh_for(c, n);
    row.h = mesh.h();
    AssemblyOptions opt;
    opt.degree = degree;
    opt.skeleton = mode;
    opt.eta = eta;
    opt.load_quad_order = c.load_quad_order;
    HdgSolution sol = solve_hdg(c.problem, mesh, opt);
    row.dofs_total = sol.total_dofs();
    row.dofs_skeleton = sol.skeleton_dofs();
    row.err_l2 = error_l2(mesh, sol.interior, c.exact, c.region);
    row.err_h1 = error_h1_broken(mesh, sol.interior, c.gradient, c.region);
    const ErrorReport report =
        hdg_norm(mesh, discrete_pair(mesh, sol) - exact_pair(c.exact, c.gradient, c.hessian),
                 c.problem, opt.resolved_eta(), c.region);
    row.err_hdg = report.err_hdg();
    // Spurious oscillations show up next to the outflow layers, so the
    // overshoot is always sampled on the whole domain.
    if (c.exact_max) row.overshoot = overshoot_metric(mesh, sol.interior, *c.exact_max);
    row.conservation = conservation_residual(mesh, sol, c.problem).cwiseAbs().maxCoeff();
    if (keep) keep->emplace(std::move(sol));
  } catch (const std::exception& e) {
    row.status = sanitize(e.what());
  }
  return row;
}

StudyRow run_supg(const ManufacturedCase& c, int n, std::optional<SupgSolution>* keep) {
  StudyRow row;
  row.method = "supg";
  row.skeleton = "-";
  row.problem = c.name;
  row.epsilon = c.problem.epsilon;
  row.n = n;
  try {
    const Mesh mesh = mesh_for(c, n);
    row.h = mesh.h();
    SupgOptions opt;
    if (c.load_quad_order > 0) opt.load_quad_order = c.load_quad_order;
    SupgSolution sol = solve_supg(c.problem, mesh, opt);
    row.dofs_total = sol.dofs();
    row.dofs_skeleton = 0;
    row.err_l2 = error_l2(mesh, sol.field, c.exact, c.region);
    row.err_h1 = error_h1_broken(mesh, sol.field, c.gradient, c.region);
    if (c.exact_max) row.overshoot = overshoot_metric(mesh, sol.field, *c.exact_max);
    if (keep) keep->emplace(std::move(sol));
  } catch (const std::exception& e) {
    row.status = sanitize(e.what());
  }
  return row;
}

StudyTable run_convergence_study(const RunConfig& config) {
  config.validate();
  const ManufacturedCase c = case_by_name(config.problem, config.epsilon);
  ensure_source(c);
  StudyTable table;
  for (int n : config.mesh_sizes)
    table.rows.push_back(config.method == Method::Hdg
                             ? run_hdg(c, n, config.degree, config.skeleton, config.eta)
                             : run_supg(c, n));
  compute_rates(table);
  return table;
}

StudyTable run_layer_study(const RunConfig& config, const std::string& dump_prefix) {
  config.validate();
  if (config.problem != "layer") throw ConfigError("the layer study requires problem = layer");
  if (config.degree != 1) throw ConfigError("the layer study compares against P1 supg; use degree 1");
  const ManufacturedCase c = case_layer(config.epsilon);
  ensure_source(c);
  StudyTable table;
  std::optional<HdgSolution> hdg;
  std::optional<SupgSolution> supg;
  for (std::size_t i = 0; i < config.mesh_sizes.size(); ++i)
    table.rows.push_back(run_hdg(c, config.mesh_sizes[i], 1, config.skeleton, config.eta,
                                 i == 0 ? &hdg : nullptr));
  for (std::size_t i = 0; i < config.mesh_sizes.size(); ++i)
    table.rows.push_back(run_supg(c, config.mesh_sizes[i], i == 0 ? &supg : nullptr));
  compute_rates(table);

  if (!dump_prefix.empty()) {
    const Mesh mesh = mesh_for(c, config.mesh_sizes.front());
    if (hdg) {
      write_file(dump_prefix + "hdg_uh.dat", [&](std::ostream& o) { write_grid_dump(mesh, hdg->interior, o); });
      write_file(dump_prefix + "hdg_uhat.dat", [&](std::ostream& o) { write_trace_dump(mesh, *hdg, o); });
    }
    if (supg)
      write_file(dump_prefix + "supg_uh.dat", [&](std::ostream& o) { write_grid_dump(mesh, supg->field, o); });
  }
  return table;
}

ReducedLimitTable run_reduced_limit_study(const RunConfig& config) {
  config.validate();
  const int n = config.mesh_sizes.front();
  ReducedLimitTable table;
  for (double eps : config.epsilons) {
    ReducedLimitRow row;
    row.epsilon = eps;
    row.n = n;
    try {
      const ManufacturedCase c = case_reduced_limit(eps);
      const Mesh mesh = mesh_for(c, n);
      AssemblyOptions opt;
      opt.degree = config.degree;
      opt.skeleton = config.skeleton;
      opt.eta = config.eta;
      const HdgSolution sol = solve_hdg(c.problem, mesh, opt);
      row.dist_l2 = error_l2(mesh, sol.interior, c.exact);
      const ErrorReport report =
          hdg_norm(mesh, discrete_pair(mesh, sol) - exact_pair(c.exact, c.gradient, c.hessian),
                   c.problem, opt.resolved_eta());
      row.dist_rc = report.err_rc();
      row.dist_jump = report.err_jump();
    } catch (const std::exception& e) {
      row.status = sanitize(e.what());
    }
    table.rows.push_back(row);
  }
  std::vector<double> ok;
  for (const auto& r : table.rows)
    if (r.status == "ok") ok.push_back(r.dist_l2);
  if (ok.size() >= 2) {
    const double a = ok[ok.size() - 2], b = ok.back();
    table.last_ratio = std::max(a, b) / std::min(a, b);
    table.bounded = table.last_ratio <= 2.0;
  }
  return table;
}

void write_csv(const ReducedLimitTable& table, std::ostream& out) {
  out << "# hdgcd reduced-limit v1: epsilon,n,dist_l2,dist_rc,dist_jump,status\n";
  out << "epsilon,n,dist_l2,dist_rc,dist_jump,status\n";
  for (const auto& r : table.rows)
    out << fmt::format("{:.6e},{},{:.10e},{:.10e},{:.10e},{}\n", r.epsilon, r.n, r.dist_l2,
                       r.dist_rc, r.dist_jump, sanitize(r.status));
  out << fmt::format("# bounded={} ratio={:.6f}\n", table.bounded ? "yes" : "no", table.last_ratio);
}

StudyTable run_skeleton_mode_comparison(const RunConfig& config, const std::string& dump_prefix) {
  config.validate();
  if (config.degree != 1) throw ConfigError("the skeleton comparison requires degree 1");
  const ManufacturedCase c = case_by_name(config.problem, config.epsilon);
  ensure_source(c);
  StudyTable table;
  for (SkeletonMode mode : {SkeletonMode::Discontinuous, SkeletonMode::Continuous}) {
    std::optional<HdgSolution> first;
    for (std::size_t i = 0; i < config.mesh_sizes.size(); ++i)
      table.rows.push_back(
          run_hdg(c, config.mesh_sizes[i], 1, mode, config.eta, i == 0 ? &first : nullptr));
    if (!dump_prefix.empty() && first) {
      const Mesh mesh = mesh_for(c, config.mesh_sizes.front());
      const std::string tag = to_string(mode);
      write_file(dump_prefix + tag + "_uh.dat", [&](std::ostream& o) { write_grid_dump(mesh, first->interior, o); });
      write_file(dump_prefix + tag + "_uhat.dat", [&](std::ostream& o) { write_trace_dump(mesh, *first, o); });
    }
  }
  compute_rates(table);
  return table;
}

void write_grid_dump(const Mesh& mesh, const PiecewisePolynomial& field, std::ostream& out,
                     int npts) {
  if (npts < 2) throw std::invalid_argument("grid dump needs at least 2 points per side");
  const PointLocator locator(mesh);
  for (int j = 0; j < npts; ++j)
    for (int i = 0; i < npts; ++i) {
      const Vec2 x(static_cast<double>(i) / (npts - 1), static_cast<double>(j) / (npts - 1));
      out << fmt::format("{:.6f} {:.6f} {:.10e}\n", x.x(), x.y(),
                         field.value(mesh, locator.locate(x), x));
    }
}

void write_trace_dump(const Mesh& mesh, const HdgSolution& solution, std::ostream& out,
                      int per_edge) {
  if (per_edge < 2) throw std::invalid_argument("trace dump needs at least 2 points per edge");
  for (std::size_t e : solution.dofmap.skeleton()) {
    const Edge& edge = mesh.edge(e);
    const Vec2& a = mesh.vertex(edge.vertices[0]);
    const Vec2& b = mesh.vertex(edge.vertices[1]);
    for (int i = 0; i < per_edge; ++i) {
      const double s = static_cast<double>(i) / (per_edge - 1);
      const Vec2 x = a + s * (b - a);
      out << fmt::format("{:.6f} {:.6f} {:.10e}\n", x.x(), x.y(), solution.trace_value(e, s));
    }
    out << '\n';
  }
}

}  // namespace hdgcd
