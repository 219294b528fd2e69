#include "hdgcd/solver.hpp"

#include <ostream>

#include <Eigen/OrderingMethods>
#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <fmt/format.h>

namespace hdgcd {

ElementSolvabilityError::ElementSolvabilityError(std::size_t element, double condition)
    : std::runtime_error(fmt::format(
          "element {} interior block is not solvable (condition estimate {:.3e}); "
          "the penalty may be too small or the data degenerate",
          element, condition)),
      element_(element),
      condition_(condition) {}

Eigen::VectorXd HdgSolution::edge_coefficients(std::size_t edge) const {
  const auto dofs = dofmap.edge_dofs(edge);
  Eigen::VectorXd c(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t s = 0; s < dofs.size(); ++s)
    c(static_cast<Eigen::Index>(s)) = dofs[s] == DofMap::kFixed ? 0.0 : traces(dofs[s]);
  return c;
}

EdgeBasis HdgSolution::edge_basis() const {
  return dofmap.mode() == SkeletonMode::Continuous
             ? EdgeBasis(1, EdgeBasis::Kind::Nodal)
             : EdgeBasis(dofmap.degree(), EdgeBasis::Kind::Orthonormal);
}

double HdgSolution::trace_value(std::size_t edge, double s) const {
  return edge_basis().values(s).dot(edge_coefficients(edge));
}

CondensedSystem condense(const std::vector<LocalBlocks>& locals, const DofMap& dofmap,
                         const AssemblyOptions& options) {
  if (locals.size() != dofmap.num_elements())
    throw std::invalid_argument("local system count does not match the dof map");
  CondensedSystem sys{{}, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofmap.num_trace())),
                      {}, dofmap, options};
  sys.elements.reserve(locals.size());
  std::vector<Eigen::Triplet<double>> triplets;

  for (std::size_t k = 0; k < locals.size(); ++k) {
    const LocalBlocks& b = locals[k];
    const Eigen::MatrixXd uu = b.uu;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(uu);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                : std::numeric_limits<double>::infinity();
    if (!(cond <= kConditionLimit)) throw ElementSolvabilityError(k, cond);

    ElementFactor f{Eigen::PartialPivLU<Eigen::MatrixXd>(uu), b.ut, b.bu,
                    dofmap.element_trace_dofs(k)};
    const Eigen::MatrixXd x = f.interior.solve(f.coupling);   // A_uu^-1 A_ut
    const Eigen::VectorXd y = f.interior.solve(f.load);       // A_uu^-1 b_u
    const Eigen::MatrixXd schur = b.tt - b.tu * x;
    const Eigen::VectorXd g = b.bt - b.tu * y;

    for (Eigen::Index r = 0; r < schur.rows(); ++r) {
      const long gr = f.trace_dofs[static_cast<std::size_t>(r)];
      if (gr == DofMap::kFixed) continue;
      sys.load(gr) += g(r);
      for (Eigen::Index c = 0; c < schur.cols(); ++c) {
        const long gc = f.trace_dofs[static_cast<std::size_t>(c)];
        if (gc == DofMap::kFixed) continue;
        triplets.emplace_back(gr, gc, schur(r, c));
      }
    }
    sys.elements.push_back(std::move(f));
  }
  const auto n = static_cast<Eigen::Index>(dofmap.num_trace());
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw std::invalid_argument("solve_sparse: dimension mismatch");
  if (matrix.rows() == 0) return Eigen::VectorXd();
  Eigen::SparseMatrix<double> a = matrix;
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("sparse LU factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SingularSystemError("sparse LU solve failed");

  double norm_a = 0.0;  // infinity norm: max absolute row sum
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
      row_sums(it.row()) += std::abs(it.value());
  norm_a = row_sums.maxCoeff();
  const double residual = (a * x - rhs).lpNorm<Eigen::Infinity>();
  const double bound =
      1e-10 * (norm_a * x.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>());
  if (residual > bound)
    throw SingularSystemError(
        fmt::format("sparse solve residual {:.3e} exceeds bound {:.3e}", residual, bound));
  return x;
}

Eigen::VectorXd solve_skeleton(const CondensedSystem& system) {
  return solve_sparse(system.matrix, system.load);
}

HdgSolution recover_interior(const Eigen::VectorXd& traces, const CondensedSystem& system) {
  if (static_cast<std::size_t>(traces.size()) != system.dofmap.num_trace())
    throw std::invalid_argument("trace vector size does not match the skeleton system");
  HdgSolution sol{system.dofmap, system.options,
                  PiecewisePolynomial(system.dofmap.num_elements(), system.dofmap.degree()), traces};
  for (std::size_t k = 0; k < system.elements.size(); ++k) {
    const ElementFactor& f = system.elements[k];
    Eigen::VectorXd local(static_cast<Eigen::Index>(f.trace_dofs.size()));
    for (std::size_t s = 0; s < f.trace_dofs.size(); ++s)
      local(static_cast<Eigen::Index>(s)) =
          f.trace_dofs[s] == DofMap::kFixed ? 0.0 : traces(f.trace_dofs[s]);
    sol.interior.element(k) = f.interior.solve(f.load - f.coupling * local);
  }
  return sol;
}

HdgSolution solve_hdg(const ProblemSpec& problem, const Mesh& mesh, const AssemblyOptions& options) {
  validate_problem(problem, mesh);
  const DofMap dofmap(mesh, options.degree, options.skeleton);
  const CondensedSystem system = condense(assemble_local_systems(mesh, problem, options), dofmap, options);
  return recover_interior(solve_skeleton(system), system);
}

HdgSolution solve_monolithic(const ProblemSpec& problem, const Mesh& mesh,
                             const AssemblyOptions& options) {
  validate_problem(problem, mesh);
  const DofMap dofmap(mesh, options.degree, options.skeleton);
  const MonolithicSystem sys = assemble_monolithic(mesh, dofmap, problem, options);
  const Eigen::VectorXd x = solve_sparse(sys.matrix, sys.rhs);
  const auto ni = static_cast<Eigen::Index>(dofmap.num_interior());
  return HdgSolution{dofmap, options, PiecewisePolynomial(dofmap.degree(), x.head(ni)),
                     x.tail(x.size() - ni)};
}

void write_solution(const HdgSolution& solution, std::ostream& out) {
  const auto& u = solution.interior;
  for (std::size_t k = 0; k < u.num_elements(); ++k) {
    out << "K " << k;
    for (double c : u.element(k)) out << fmt::format(" {:.17g}", c);
    out << '\n';
  }
  for (std::size_t e : solution.dofmap.skeleton()) {
    out << "E " << e;
    for (double c : solution.edge_coefficients(e)) out << fmt::format(" {:.17g}", c);
    out << '\n';
  }
}

}  // namespace hdgcd
