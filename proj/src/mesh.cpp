#include "hdgcd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "hdgcd/quadrature.hpp"

namespace hdgcd {
namespace {

constexpr double kBoundaryTol = 1e-12;

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

BoundaryPartition BoundaryPartition::dirichlet_left_only() {
  return {BoundaryTag::Dirichlet, BoundaryTag::Neumann, BoundaryTag::Neumann,
          BoundaryTag::Neumann};
}

BoundaryTag BoundaryPartition::classify(const Vec2& p) const {
  if (std::abs(p.x()) <= kBoundaryTol) return left;
  if (std::abs(p.x() - 1.0) <= kBoundaryTol) return right;
  if (std::abs(p.y()) <= kBoundaryTol) return bottom;
  if (std::abs(p.y() - 1.0) <= kBoundaryTol) return top;
  throw std::invalid_argument(
      fmt::format("point ({}, {}) is not on the unit-square boundary", p.x(), p.y()));
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
           const BoundaryPartition& partition)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  build([&](const Edge& e) {
    const Vec2 mid = 0.5 * (vertices_[e.vertices[0]] + vertices_[e.vertices[1]]);
    return partition.classify(mid);
  });
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
           const std::function<BoundaryTag(const Edge&)>& boundary_tag)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  build(boundary_tag);
}

void Mesh::build(const std::function<BoundaryTag(const Edge&)>& boundary_tag) {
  const std::size_t nv = vertices_.size();
  areas_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());
  element_edges_.resize(triangles_.size());

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    const Triangle& t = triangles_[k];
    for (std::size_t v : t)
      if (v >= nv)
        throw std::invalid_argument(fmt::format("triangle {} references vertex {} of {}", k, v, nv));
    const double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (!(a > 0.0))
      throw std::invalid_argument(fmt::format("triangle {} has non-positive signed area {}", k, a));
    areas_.push_back(a);
    double diam = 0.0;
    for (int j = 0; j < 3; ++j) {
      const std::size_t va = t[j];
      const std::size_t vb = t[(j + 1) % 3];
      diam = std::max(diam, (vertices_[va] - vertices_[vb]).norm());
      const auto key = std::minmax(va, vb);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge e;
        e.vertices = {va, vb};
        e.left = k;
        e.length = (vertices_[va] - vertices_[vb]).norm();
        lookup.emplace(key, edges_.size());
        element_edges_[k][j] = edges_.size();
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.right)
          throw std::invalid_argument(fmt::format(
              "edge ({}, {}) is shared by more than two triangles", va, vb));
        if (e.vertices[0] != vb)
          throw std::invalid_argument(fmt::format(
              "triangles {} and {} have inconsistent orientation", e.left, k));
        e.right = k;
        element_edges_[k][j] = it->second;
      }
    }
    diameters_.push_back(diam);
  }

  for (Edge& e : edges_) {
    if (e.right) {
      e.tag = BoundaryTag::Interior;
    } else {
      e.tag = boundary_tag(e);
      if (e.tag == BoundaryTag::Interior)
        throw std::invalid_argument("boundary edge tagged Interior");
    }
  }
}

std::size_t Mesh::num_boundary_edges() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_boundary(); }));
}

bool Mesh::edge_aligned(std::size_t k, int j) const {
  const Edge& e = edges_[element_edges_.at(k)[j]];
  return e.vertices[0] == triangles_[k][j];
}

std::array<Vec2, 3> Mesh::element_vertices(std::size_t k) const {
  const Triangle& t = triangles_.at(k);
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

Vec2 Mesh::barycenter(std::size_t k) const {
  const auto p = element_vertices(k);
  return (p[0] + p[1] + p[2]) / 3.0;
}

double Mesh::h() const {
  return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
}

double Mesh::quasi_uniformity_ratio() const {
  if (diameters_.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(diameters_.begin(), diameters_.end());
  return *hi / *lo;
}

std::optional<int> Mesh::local_edge_index(std::size_t element, std::size_t edge) const {
  const auto& ee = element_edges_.at(element);
  for (int j = 0; j < 3; ++j)
    if (ee[j] == edge) return j;
  return std::nullopt;
}

Vec2 Mesh::outward_normal(std::size_t element, std::size_t edge) const {
  const auto j = local_edge_index(element, edge);
  if (!j)
    throw std::invalid_argument(fmt::format("edge {} is not on element {}", edge, element));
  const Edge& e = edges_[edge];
  const Vec2 t = vertices_[e.vertices[1]] - vertices_[e.vertices[0]];
  Vec2 n(t.y(), -t.x());
  n /= n.norm();
  return edge_aligned(element, *j) ? n : Vec2(-n);
}

Mesh build_uniform_triangulation(int n, const BoundaryPartition& partition) {
  if (n < 1) throw std::invalid_argument("subdivision count must be >= 1");
  const auto id = [n](int i, int j) { return static_cast<std::size_t>(j * (n + 1) + i); };
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t sw = id(i, j), se = id(i + 1, j), ne = id(i + 1, j + 1),
                        nw = id(i, j + 1);
      triangles.push_back({sw, se, ne});
      triangles.push_back({sw, ne, nw});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), partition);
}

std::vector<std::size_t> extract_skeleton(const Mesh& mesh) {
  std::vector<std::size_t> skeleton;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge(e).tag != BoundaryTag::Neumann) skeleton.push_back(e);
  return skeleton;
}

InflowReport verify_inflow_in_dirichlet(const Mesh& mesh,
                                        const std::function<Vec2(const Vec2&)>& velocity) {
  constexpr double kTol = 1e-12;
  const EdgeQuadrature rule = quad_edge(6);
  InflowReport report;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (!edge.is_boundary() || edge.tag == BoundaryTag::Dirichlet) continue;
    const Vec2 n = mesh.outward_normal(edge.left, e);
    const Vec2& a = mesh.vertex(edge.vertices[0]);
    const Vec2& b = mesh.vertex(edge.vertices[1]);
    for (double s : rule.points) {
      const Vec2 x = a + s * (b - a);
      if (velocity(x).dot(n) < -kTol) {
        report.ok = false;
        report.violations.push_back({e, x});
      }
    }
  }
  return report;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << ' ' << mesh.num_edges() << '\n';
  for (const Vec2& v : mesh.vertices()) out << fmt::format("{:.17g} {:.17g}\n", v.x(), v.y());
  for (const Triangle& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const Edge& e : mesh.edges())
    out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << static_cast<int>(e.tag) << '\n';
}

Mesh read_mesh(std::istream& in) {
  std::size_t nv = 0, nt = 0, ne = 0;
  if (!(in >> nv >> nt >> ne)) throw std::invalid_argument("mesh file: bad header");
  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices)
    if (!(in >> v.x() >> v.y())) throw std::invalid_argument("mesh file: bad vertex line");
  std::vector<Triangle> triangles(nt);
  for (auto& t : triangles)
    if (!(in >> t[0] >> t[1] >> t[2])) throw std::invalid_argument("mesh file: bad triangle line");
  std::map<std::pair<std::size_t, std::size_t>, BoundaryTag> tags;
  for (std::size_t i = 0; i < ne; ++i) {
    std::size_t a = 0, b = 0;
    int tag = 0;
    if (!(in >> a >> b >> tag) || tag < 0 || tag > 2)
      throw std::invalid_argument("mesh file: bad edge line");
    tags[std::minmax(a, b)] = static_cast<BoundaryTag>(tag);
  }
  Mesh mesh(std::move(vertices), std::move(triangles), [&](const Edge& e) {
    auto it = tags.find(std::minmax(e.vertices[0], e.vertices[1]));
    if (it == tags.end()) throw std::invalid_argument("mesh file: boundary edge without tag");
    return it->second;
  });
  if (mesh.num_edges() != ne)
    throw std::invalid_argument(fmt::format("mesh file: declares {} edges, triangles give {}",
                                            ne, mesh.num_edges()));
  return mesh;
}

}  // namespace hdgcd
