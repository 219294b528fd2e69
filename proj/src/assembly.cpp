#include "hdgcd/assembly.hpp"

#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "hdgcd/kernels.hpp"

namespace hdgcd {
namespace {

const std::array<Vec2, 3> kRefVertices = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

// out(i, j) += sum_q w_q a(i, q) b(j, q)
void accumulate(RowMatrix& out, const RowMatrix& a, const RowMatrix& b, const std::vector<double>& w) {
  kernels::accumulate_weighted_products(
      {a.data(), static_cast<std::size_t>(a.size())}, static_cast<std::size_t>(a.rows()),
      {b.data(), static_cast<std::size_t>(b.size())}, static_cast<std::size_t>(b.rows()), w,
      {out.data(), static_cast<std::size_t>(out.size())});
}

// Same, into the column block [col, col + b.rows()) of `out`.
void accumulate_cols(RowMatrix& out, Eigen::Index col, const RowMatrix& a, const RowMatrix& b,
                     const std::vector<double>& w) {
  RowMatrix tmp = RowMatrix::Zero(a.rows(), b.rows());
  accumulate(tmp, a, b, w);
  out.middleCols(col, b.rows()) += tmp;
}

void accumulate_rows(RowMatrix& out, Eigen::Index row, const RowMatrix& a, const RowMatrix& b,
                     const std::vector<double>& w) {
  RowMatrix tmp = RowMatrix::Zero(a.rows(), b.rows());
  accumulate(tmp, a, b, w);
  out.middleRows(row, a.rows()) += tmp;
}

std::vector<double> scaled(const std::vector<double>& w, double s) {
  std::vector<double> out(w);
  for (double& x : out) x *= s;
  return out;
}

std::vector<double> times(const std::vector<double>& w, const std::vector<double>& v) {
  std::vector<double> out(w);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= v[i];
  return out;
}

// Physical gradients of the basis at tabulated points.
void physical_gradients(const AffineMap& map, const ReferenceElement::Table& t, RowMatrix& gx,
                        RowMatrix& gy) {
  const Mat2& inv = map.inverse;
  gx = inv(0, 0) * t.dxi + inv(1, 0) * t.deta;
  gy = inv(0, 1) * t.dxi + inv(1, 1) * t.deta;
}

struct EdgeGeometry {
  std::size_t edge;
  Vec2 normal;
  std::vector<Vec2> points;
  std::vector<double> weights;
  const ReferenceElement::Table* table;
};

EdgeGeometry edge_geometry(const Mesh& mesh, std::size_t element, int j, const ReferenceElement& ref) {
  EdgeGeometry g;
  g.edge = mesh.element_edges(element)[static_cast<std::size_t>(j)];
  const Edge& e = mesh.edge(g.edge);
  g.normal = mesh.outward_normal(element, g.edge);
  const Vec2& a = mesh.vertex(e.vertices[0]);
  const Vec2& b = mesh.vertex(e.vertices[1]);
  const auto& rule = ref.edge_rule();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    g.points.push_back(a + rule.points[q] * (b - a));
    g.weights.push_back(rule.weights[q] * e.length);
  }
  g.table = &ref.edge(j, mesh.edge_aligned(element, j));
  return g;
}

}  // namespace

LocalBlocks::LocalBlocks(std::size_t interior, std::size_t trace)
    : uu(RowMatrix::Zero(static_cast<Eigen::Index>(interior), static_cast<Eigen::Index>(interior))),
      ut(RowMatrix::Zero(static_cast<Eigen::Index>(interior), static_cast<Eigen::Index>(trace))),
      tu(RowMatrix::Zero(static_cast<Eigen::Index>(trace), static_cast<Eigen::Index>(interior))),
      tt(RowMatrix::Zero(static_cast<Eigen::Index>(trace), static_cast<Eigen::Index>(trace))),
      bu(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior))),
      bt(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trace))) {}

LocalBlocks& LocalBlocks::operator+=(const LocalBlocks& o) {
  uu += o.uu;
  ut += o.ut;
  tu += o.tu;
  tt += o.tt;
  bu += o.bu;
  bt += o.bt;
  return *this;
}

Eigen::MatrixXd LocalBlocks::full() const {
  const Eigen::Index ni = uu.rows(), nt = tt.rows();
  Eigen::MatrixXd m(ni + nt, ni + nt);
  m.topLeftCorner(ni, ni) = uu;
  m.topRightCorner(ni, nt) = ut;
  m.bottomLeftCorner(nt, ni) = tu;
  m.bottomRightCorner(nt, nt) = tt;
  return m;
}

ReferenceElement::ReferenceElement(int degree, SkeletonMode mode, int quad_order)
    : basis_(degree),
      edge_basis_(mode == SkeletonMode::Continuous ? 1 : degree,
                  mode == SkeletonMode::Continuous ? EdgeBasis::Kind::Nodal
                                                   : EdgeBasis::Kind::Orthonormal),
      volume_rule_(quad_triangle(quad_order)),
      edge_rule_(quad_edge(quad_order)),
      quad_order_(quad_order) {
  if (mode == SkeletonMode::Continuous && degree != 1)
    throw std::invalid_argument("continuous skeleton mode requires degree 1");
  volume_ = tabulate(volume_rule_.points);
  for (int j = 0; j < 3; ++j) {
    const Vec2& a = kRefVertices[static_cast<std::size_t>(j)];
    const Vec2& b = kRefVertices[static_cast<std::size_t>((j + 1) % 3)];
    for (int aligned = 0; aligned < 2; ++aligned) {
      std::vector<Vec2> pts;
      for (double s : edge_rule_.points) {
        const double t = aligned ? s : 1.0 - s;
        pts.push_back(a + t * (b - a));
      }
      edges_[static_cast<std::size_t>(2 * j + aligned)] = tabulate(pts);
    }
  }
  trace_values_.resize(static_cast<Eigen::Index>(edge_basis_.size()),
                       static_cast<Eigen::Index>(edge_rule_.size()));
  for (std::size_t q = 0; q < edge_rule_.size(); ++q)
    trace_values_.col(static_cast<Eigen::Index>(q)) = edge_basis_.values(edge_rule_.points[q]);
}

ReferenceElement::Table ReferenceElement::tabulate(const std::vector<Vec2>& points) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  const auto nq = static_cast<Eigen::Index>(points.size());
  Table t{RowMatrix(n, nq), RowMatrix(n, nq), RowMatrix(n, nq)};
  for (Eigen::Index q = 0; q < nq; ++q) {
    const auto v = basis_.eval(points[static_cast<std::size_t>(q)]);
    t.values.col(q) = v.values;
    t.dxi.col(q) = v.gradients.col(0);
    t.deta.col(q) = v.gradients.col(1);
  }
  return t;
}

LocalBlocks local_diffusion(const Mesh& mesh, std::size_t element, const ReferenceElement& ref,
                            double epsilon, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument(fmt::format("penalty eta must be positive, got {}", eta));
  const std::size_t ni = ref.basis().size();
  const std::size_t ne = ref.edge_basis().size();
  LocalBlocks blocks(ni, 3 * ne);
  const AffineMap map = AffineMap::of(mesh, element);

  RowMatrix gx, gy;
  physical_gradients(map, ref.volume(), gx, gy);
  const std::vector<double> w = scaled(ref.volume_rule().weights, epsilon * map.det);
  accumulate(blocks.uu, gx, gx, w);
  accumulate(blocks.uu, gy, gy, w);

  const RowMatrix& psi = ref.trace_values();
  for (int j = 0; j < 3; ++j) {
    const EdgeGeometry g = edge_geometry(mesh, element, j, ref);
    const Edge& e = mesh.edge(g.edge);
    if (e.tag == BoundaryTag::Neumann) continue;
    const double sigma = eta / e.length;
    RowMatrix ex, ey;
    physical_gradients(map, *g.table, ex, ey);
    const RowMatrix dn = g.normal.x() * ex + g.normal.y() * ey;
    const RowMatrix& phi = g.table->values;
    const auto col = static_cast<Eigen::Index>(static_cast<std::size_t>(j) * ne);

    const std::vector<double> we = scaled(g.weights, epsilon);
    const std::vector<double> wp = scaled(g.weights, epsilon * sigma);
    const std::vector<double> mwe = scaled(g.weights, -epsilon);
    const std::vector<double> mwp = scaled(g.weights, -epsilon * sigma);

    accumulate(blocks.uu, phi, dn, mwe);
    accumulate(blocks.uu, dn, phi, mwe);
    accumulate(blocks.uu, phi, phi, wp);
    accumulate_cols(blocks.ut, col, dn, psi, we);
    accumulate_cols(blocks.ut, col, phi, psi, mwp);
    accumulate_rows(blocks.tu, col, psi, dn, we);
    accumulate_rows(blocks.tu, col, psi, phi, mwp);
    RowMatrix tt = RowMatrix::Zero(psi.rows(), psi.rows());
    accumulate(tt, psi, psi, wp);
    blocks.tt.block(col, col, psi.rows(), psi.rows()) += tt;
  }
  return blocks;
}

LocalBlocks local_convection(const Mesh& mesh, std::size_t element, const ReferenceElement& ref,
                             const VectorField& velocity, const ScalarField& reaction) {
  const std::size_t ni = ref.basis().size();
  const std::size_t ne = ref.edge_basis().size();
  LocalBlocks blocks(ni, 3 * ne);
  const AffineMap map = AffineMap::of(mesh, element);

  RowMatrix gx, gy;
  physical_gradients(map, ref.volume(), gx, gy);
  const RowMatrix& phi = ref.volume().values;
  const auto& rule = ref.volume_rule();
  RowMatrix transport(phi.rows(), phi.cols());
  for (Eigen::Index q = 0; q < phi.cols(); ++q) {
    const Vec2 x = map.to_physical(rule.points[static_cast<std::size_t>(q)]);
    const Vec2 b = velocity(x);
    transport.col(q) = b.x() * gx.col(q) + b.y() * gy.col(q) + reaction(x) * phi.col(q);
  }
  accumulate(blocks.uu, phi, transport, scaled(rule.weights, map.det));

  const RowMatrix& psi = ref.trace_values();
  for (int j = 0; j < 3; ++j) {
    const EdgeGeometry g = edge_geometry(mesh, element, j, ref);
    if (mesh.edge(g.edge).tag == BoundaryTag::Neumann) continue;
    std::vector<double> plus(g.points.size()), minus(g.points.size());
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const auto br = bracket(velocity(g.points[q]).dot(g.normal));
      plus[q] = br.plus;
      minus[q] = br.minus;
    }
    const std::vector<double> wm = times(g.weights, minus);
    const std::vector<double> wpl = times(g.weights, plus);
    const RowMatrix& phie = g.table->values;
    const auto col = static_cast<Eigen::Index>(static_cast<std::size_t>(j) * ne);

    accumulate(blocks.uu, phie, phie, wm);
    accumulate_cols(blocks.ut, col, phie, psi, scaled(wm, -1.0));
    accumulate_rows(blocks.tu, col, psi, phie, scaled(wpl, -1.0));
    RowMatrix tt = RowMatrix::Zero(psi.rows(), psi.rows());
    accumulate(tt, psi, psi, wpl);
    blocks.tt.block(col, col, psi.rows(), psi.rows()) += tt;
  }
  return blocks;
}

LocalBlocks local_load(const Mesh& mesh, std::size_t element, const ReferenceElement& ref,
                       const ScalarField& source, const BoundaryData& neumann) {
  const std::size_t ni = ref.basis().size();
  const std::size_t ne = ref.edge_basis().size();
  LocalBlocks blocks(ni, 3 * ne);
  const AffineMap map = AffineMap::of(mesh, element);
  const auto& rule = ref.volume_rule();

  RowMatrix f(1, static_cast<Eigen::Index>(rule.size()));
  for (std::size_t q = 0; q < rule.size(); ++q)
    f(0, static_cast<Eigen::Index>(q)) = source(map.to_physical(rule.points[q]));
  RowMatrix bu = RowMatrix::Zero(static_cast<Eigen::Index>(ni), 1);
  accumulate(bu, ref.volume().values, f, scaled(rule.weights, map.det));

  for (int j = 0; j < 3; ++j) {
    const EdgeGeometry g = edge_geometry(mesh, element, j, ref);
    if (mesh.edge(g.edge).tag != BoundaryTag::Neumann) continue;
    RowMatrix gn(1, static_cast<Eigen::Index>(g.points.size()));
    for (std::size_t q = 0; q < g.points.size(); ++q)
      gn(0, static_cast<Eigen::Index>(q)) = neumann(g.points[q], g.normal);
    accumulate(bu, g.table->values, gn, g.weights);
  }
  blocks.bu = bu.col(0);
  return blocks;
}

std::vector<LocalBlocks> assemble_local_systems(const Mesh& mesh, const ProblemSpec& problem,
                                                const AssemblyOptions& options) {
  const ReferenceElement ref(options.degree, options.skeleton, options.resolved_quad_order());
  const int load_order = options.resolved_load_quad_order();
  const ReferenceElement load_ref(options.degree, options.skeleton, load_order);
  const double eta = options.resolved_eta();

  std::vector<LocalBlocks> locals;
  locals.reserve(mesh.num_elements());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    LocalBlocks blocks = local_diffusion(mesh, k, ref, problem.epsilon, eta);
    blocks += local_convection(mesh, k, ref, problem.velocity, problem.reaction);
    blocks += local_load(mesh, k, load_ref, problem.source, problem.neumann);
    locals.push_back(std::move(blocks));
  }
  return locals;
}

MonolithicSystem assemble_monolithic(const std::vector<LocalBlocks>& locals, const DofMap& dofmap) {
  if (locals.size() != dofmap.num_elements())
    throw std::invalid_argument("local system count does not match the dof map");
  const std::size_t ni = dofmap.interior_per_element();
  const std::size_t n = dofmap.num_total();
  const auto offset_t = static_cast<long>(dofmap.num_interior());

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < locals.size(); ++k) {
    const LocalBlocks& b = locals[k];
    if (static_cast<std::size_t>(b.uu.rows()) != ni ||
        static_cast<std::size_t>(b.tt.rows()) != dofmap.trace_per_element())
      throw std::invalid_argument(fmt::format("local block size mismatch on element {}", k));
    std::vector<long> rows(ni + dofmap.trace_per_element());
    for (std::size_t i = 0; i < ni; ++i) rows[i] = static_cast<long>(dofmap.interior_offset(k) + i);
    const std::vector<long> tdofs = dofmap.element_trace_dofs(k);
    for (std::size_t s = 0; s < tdofs.size(); ++s)
      rows[ni + s] = tdofs[s] == DofMap::kFixed ? DofMap::kFixed : offset_t + tdofs[s];

    const Eigen::MatrixXd full = b.full();
    Eigen::VectorXd load(full.rows());
    load << b.bu, b.bt;
    for (Eigen::Index r = 0; r < full.rows(); ++r) {
      const long gr = rows[static_cast<std::size_t>(r)];
      if (gr == DofMap::kFixed) continue;
      rhs(gr) += load(r);
      for (Eigen::Index c = 0; c < full.cols(); ++c) {
        const long gc = rows[static_cast<std::size_t>(c)];
        if (gc == DofMap::kFixed || full(r, c) == 0.0) continue;
        triplets.emplace_back(gr, gc, full(r, c));
      }
    }
  }
  MonolithicSystem sys;
  sys.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = std::move(rhs);
  return sys;
}

MonolithicSystem assemble_monolithic(const Mesh& mesh, const DofMap& dofmap, const ProblemSpec& problem,
                                     const AssemblyOptions& options) {
  if (!dofmap.consistent_with(mesh))
    throw std::invalid_argument("dof map was built for a different mesh");
  if (dofmap.degree() != options.degree || dofmap.mode() != options.skeleton)
    throw std::invalid_argument("dof map degree or skeleton mode differs from the assembly options");
  return assemble_monolithic(assemble_local_systems(mesh, problem, options), dofmap);
}

void write_coordinate(const Eigen::SparseMatrix<double>& matrix, std::ostream& out) {
  for (Eigen::Index c = 0; c < matrix.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, c); it; ++it)
      out << fmt::format("{} {} {:.17g}\n", it.row(), it.col(), it.value());
}

}  // namespace hdgcd
