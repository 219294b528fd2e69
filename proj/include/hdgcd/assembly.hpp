#pragma once
// Element-level realisation of the hybridized bilinear form
//   B_h = B_h^d + B_h^rc
// on the pair {u_h, uhat_h} and of the load (f, v_h) + <g_N, v_h>_N.

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hdgcd/basis.hpp"
#include "hdgcd/dofmap.hpp"
#include "hdgcd/field.hpp"
#include "hdgcd/problem.hpp"
#include "hdgcd/quadrature.hpp"

namespace hdgcd {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Upwind split of x: plus - minus = x, plus + minus = |x|, both >= 0.
struct Brackets {
  double plus;
  double minus;
};

inline Brackets bracket(double x) {
  return {x > 0.0 ? x : 0.0, x < 0.0 ? -x : 0.0};
}

/// Per-element block system. Rows are test functions, columns trial
/// functions; "u" are interior dofs, "t" the element's 3*(k+1) trace slots
/// (local edge major, edge slot minor).
struct LocalBlocks {
  RowMatrix uu, ut, tu, tt;
  Eigen::VectorXd bu, bt;

  LocalBlocks() = default;
  LocalBlocks(std::size_t interior, std::size_t trace);

  LocalBlocks& operator+=(const LocalBlocks& other);
  /// The full (interior+trace) square matrix.
  Eigen::MatrixXd full() const;
};

/// Basis functions tabulated at reference quadrature points.
class ReferenceElement {
 public:
  ReferenceElement(int degree, SkeletonMode mode, int quad_order);

  const ElementBasis& basis() const { return basis_; }
  const EdgeBasis& edge_basis() const { return edge_basis_; }
  const TriangleQuadrature& volume_rule() const { return volume_rule_; }
  const EdgeQuadrature& edge_rule() const { return edge_rule_; }
  int quad_order() const { return quad_order_; }

  struct Table {
    RowMatrix values, dxi, deta;  // basis x points
  };
  const Table& volume() const { return volume_; }
  /// Element basis along local edge j; `aligned` selects the orientation.
  const Table& edge(int j, bool aligned) const { return edges_[static_cast<std::size_t>(2 * j + (aligned ? 1 : 0))]; }
  /// Edge basis at the edge rule points (edge parameter s).
  const RowMatrix& trace_values() const { return trace_values_; }

 private:
  Table tabulate(const std::vector<Eigen::Vector2d>& points) const;

  ElementBasis basis_;
  EdgeBasis edge_basis_;
  TriangleQuadrature volume_rule_;
  EdgeQuadrature edge_rule_;
  int quad_order_;
  Table volume_;
  std::array<Table, 6> edges_;
  RowMatrix trace_values_;
};

/// Default penalty 10 k^2.
inline double default_eta(int degree) { return 10.0 * degree * degree; }
/// Default assembly quadrature exactness 2k + 2.
inline int default_quad_order(int degree) { return 2 * degree + 2; }

/// eps[(grad u, grad v)_K + <du/dn, vhat - v> + <dv/dn, uhat - u>
///     + (eta/h_e)<uhat - u, vhat - v>] over the non-Neumann edges of K.
/// Throws std::invalid_argument when eta <= 0.
LocalBlocks local_diffusion(const Mesh& mesh, std::size_t element,
                            const ReferenceElement& ref, double epsilon, double eta);

/// (b.grad u + c u, v)_K + <uhat - u, [b.n]+ vhat - [b.n]- v> over the
/// non-Neumann edges of K, with b.n taken pointwise.
LocalBlocks local_convection(const Mesh& mesh, std::size_t element,
                             const ReferenceElement& ref, const VectorField& velocity,
                             const ScalarField& reaction);

/// bu = (f, v)_K + <g_N, v> on the Neumann edges of K; bt = 0.
LocalBlocks local_load(const Mesh& mesh, std::size_t element, const ReferenceElement& ref,
                       const ScalarField& source, const BoundaryData& neumann);

struct AssemblyOptions {
  int degree = 1;
  SkeletonMode skeleton = SkeletonMode::Discontinuous;
  double eta = 0.0;          // <= 0 selects default_eta(degree)
  int quad_order = 0;        // <= 0 selects default_quad_order(degree)
  int load_quad_order = 0;   // <= 0 uses quad_order

  double resolved_eta() const { return eta > 0.0 ? eta : default_eta(degree); }
  int resolved_quad_order() const { return quad_order > 0 ? quad_order : default_quad_order(degree); }
  int resolved_load_quad_order() const {
    return load_quad_order > 0 ? load_quad_order : resolved_quad_order();
  }
};

/// Full local system (diffusion + convection + load) for every element.
std::vector<LocalBlocks> assemble_local_systems(const Mesh& mesh, const ProblemSpec& problem,
                                                const AssemblyOptions& options);

/// Global system over interior dofs (first) and active trace dofs (after).
struct MonolithicSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

/// Throws std::invalid_argument when `dofmap` does not fit `mesh` or the
/// options.
MonolithicSystem assemble_monolithic(const Mesh& mesh, const DofMap& dofmap,
                                     const ProblemSpec& problem, const AssemblyOptions& options);

MonolithicSystem assemble_monolithic(const std::vector<LocalBlocks>& locals, const DofMap& dofmap);

/// Coordinate text dump, one "row col value" line per stored entry.
void write_coordinate(const Eigen::SparseMatrix<double>& matrix, std::ostream& out);

}  // namespace hdgcd
