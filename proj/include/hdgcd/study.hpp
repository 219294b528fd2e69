#pragma once
// Batch experiments: convergence, boundary-layer, reduced-limit and
// skeleton-mode studies, with CSV output and field dumps.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <string>
#include <vector>

#include "hdgcd/dofmap.hpp"
#include "hdgcd/problems.hpp"
#include "hdgcd/solver.hpp"
#include "hdgcd/supg.hpp"

namespace hdgcd {

enum class Method { Hdg, Supg };

std::string to_string(Method m);
std::string to_string(SkeletonMode m);  // "dg" / "cg"
Method parse_method(std::string_view s);
SkeletonMode parse_skeleton(std::string_view s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string problem = "smooth";
  Method method = Method::Hdg;
  int degree = 1;
  double epsilon = 1.0;
  std::vector<int> mesh_sizes = {8, 16, 32, 64};
  double eta = 0.0;  // <= 0 selects the default penalty
  SkeletonMode skeleton = SkeletonMode::Discontinuous;
  /// CSV destination; empty writes to stdout. Field dumps go next to it.
  std::string output;
  /// Sweep used by the reduced-limit study.
  std::vector<double> epsilons = {1.0, 1e-2, 1e-4, 1e-6};

  /// Throws ConfigError when k < 1, a mesh size is < 1, eps <= 0, the list of
  /// mesh sizes is empty, or cg / supg is requested with k != 1.
  void validate() const;
};

/// Reads "key = value" lines ('#' starts a comment) into `config`. Keys:
/// problem, method, degree, epsilon, n (comma list), eta, skeleton, out,
/// epsilons. Throws ConfigError on unknown keys or malformed values.
void apply_config_file(std::istream& in, RunConfig& config);

struct StudyRow {
  std::string method;
  std::string skeleton;  // "dg", "cg", or "-" for supg
  std::string problem;
  double epsilon = 0.0;
  int n = 0;
  double h = 0.0;
  std::size_t dofs_total = 0;
  std::size_t dofs_skeleton = 0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  std::optional<double> err_hdg;
  std::optional<double> rate_l2, rate_h1, rate_hdg;
  std::optional<double> overshoot;
  std::optional<double> conservation;  // max_K |r_K|
  std::string status = "ok";
};

struct StudyTable {
  std::vector<StudyRow> rows;
};

/// Fills rate_* from consecutive ok rows of the same method, skeleton mode
/// and epsilon.
void compute_rates(StudyTable& table);

inline constexpr const char* kCsvSchema =
    "# hdgcd study v1: method,skeleton,problem,epsilon,n,h,dofs_total,dofs_skeleton,"
    "err_l2,err_h1,err_hdg,rate_l2,rate_h1,rate_hdg,overshoot,conservation,status";
void write_csv(const StudyTable& table, std::ostream& out);

/// Mesh with the boundary split of `c` and n cells per side.
Mesh mesh_for(const ManufacturedCase& c, int n);

/// One HDG solve plus all measurements against the case's exact solution.
/// A failed solve is reported in the row's status instead of thrown.
StudyRow run_hdg(const ManufacturedCase& c, int n, int degree, SkeletonMode mode, double eta,
                 std::optional<HdgSolution>* keep = nullptr);
StudyRow run_supg(const ManufacturedCase& c, int n, std::optional<SupgSolution>* keep = nullptr);

StudyTable run_convergence_study(const RunConfig& config);

/// HDG and SUPG rows (errors in the case region) for every mesh size. When
/// `dump_prefix` is non-empty, writes grid samples of u_h (both methods) and
/// edge samples of uhat_h on the coarsest mesh to files starting with it.
StudyTable run_layer_study(const RunConfig& config, const std::string& dump_prefix = "");

struct ReducedLimitRow {
  double epsilon = 0.0;
  int n = 0;
  double dist_l2 = 0.0;
  double dist_rc = 0.0;
  double dist_jump = 0.0;
  std::string status = "ok";
};
struct ReducedLimitTable {
  std::vector<ReducedLimitRow> rows;
  /// max/min of the last two distances.
  double last_ratio = 0.0;
  bool bounded = false;
};
/// Sweeps config.epsilons at n = config.mesh_sizes.front().
ReducedLimitTable run_reduced_limit_study(const RunConfig& config);
void write_csv(const ReducedLimitTable& table, std::ostream& out);

/// Layer problem with dg and cg skeletons (k = 1) at every mesh size.
StudyTable run_skeleton_mode_comparison(const RunConfig& config,
                                        const std::string& dump_prefix = "");

/// Samples on an npts x npts grid of the unit square; rows "x y value".
void write_grid_dump(const Mesh& mesh, const PiecewisePolynomial& field, std::ostream& out,
                     int npts = 101);
/// Samples uhat_h at `per_edge` equispaced points of every skeleton edge.
void write_trace_dump(const Mesh& mesh, const HdgSolution& solution, std::ostream& out,
                      int per_edge = 11);

}  // namespace hdgcd
