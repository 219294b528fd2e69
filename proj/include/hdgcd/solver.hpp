#pragma once
// Static condensation of interior unknowns onto the skeleton, skeleton
// solve and element-by-element recovery; plus a monolithic solve used as an
// independent check.

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "hdgcd/assembly.hpp"
#include "hdgcd/dofmap.hpp"
#include "hdgcd/field.hpp"

namespace hdgcd {

/// A_uu of an element is singular or too ill-conditioned to eliminate.
class ElementSolvabilityError : public std::runtime_error {
 public:
  ElementSolvabilityError(std::size_t element, double condition);
  std::size_t element() const { return element_; }
  double condition() const { return condition_; }

 private:
  std::size_t element_;
  double condition_;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kConditionLimit = 1e14;

struct ElementFactor {
  Eigen::PartialPivLU<Eigen::MatrixXd> interior;  // A_uu
  Eigen::MatrixXd coupling;                       // A_ut
  Eigen::VectorXd load;                           // b_u
  std::vector<long> trace_dofs;
};

/// S = sum_K [A_tt - A_tu A_uu^-1 A_ut], g = sum_K [b_t - A_tu A_uu^-1 b_u].
struct CondensedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd load;
  std::vector<ElementFactor> elements;
  DofMap dofmap;
  AssemblyOptions options;
};

/// Discrete pair {u_h, uhat_h}.
struct HdgSolution {
  DofMap dofmap;
  AssemblyOptions options;
  PiecewisePolynomial interior;
  /// Active trace dofs in global trace numbering.
  Eigen::VectorXd traces;

  std::size_t skeleton_dofs() const { return dofmap.num_trace(); }
  std::size_t interior_dofs() const { return dofmap.num_interior(); }
  std::size_t total_dofs() const { return dofmap.num_total(); }

  /// Coefficients of uhat_h on `edge` in the edge basis (zero where fixed).
  Eigen::VectorXd edge_coefficients(std::size_t edge) const;
  /// uhat_h at parameter s in [0, 1] along `edge` (first to second vertex).
  double trace_value(std::size_t edge, double s) const;
  /// The edge basis the trace coefficients refer to.
  EdgeBasis edge_basis() const;
};

/// Throws ElementSolvabilityError when some A_uu has condition number above
/// kConditionLimit.
CondensedSystem condense(const std::vector<LocalBlocks>& locals, const DofMap& dofmap,
                         const AssemblyOptions& options = {});

/// Sparse LU. Throws SingularSystemError on factorization failure or when
/// ||Sx - g||_inf > 1e-10 (||S||_inf ||x||_inf + ||g||_inf).
Eigen::VectorXd solve_skeleton(const CondensedSystem& system);

/// u_K = A_uu^-1 (b_u - A_ut uhat_K) on every element.
HdgSolution recover_interior(const Eigen::VectorXd& traces, const CondensedSystem& system);

/// Validates the problem, assembles, condenses, solves and recovers.
HdgSolution solve_hdg(const ProblemSpec& problem, const Mesh& mesh, const AssemblyOptions& options);

/// Same discrete problem solved without condensation.
HdgSolution solve_monolithic(const ProblemSpec& problem, const Mesh& mesh,
                             const AssemblyOptions& options);

/// General sparse direct solve with the same residual guard as solve_skeleton.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs);

/// "K i c0 c1 ..." per element, then "E i c0 c1 ..." per skeleton edge.
void write_solution(const HdgSolution& solution, std::ostream& out);

}  // namespace hdgcd
