#pragma once
// Conforming triangulations of the unit square with edge adjacency and
// boundary classification.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace hdgcd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class BoundaryTag : int { Interior = 0, Dirichlet = 1, Neumann = 2 };

/// Assigns Dirichlet/Neumann to the four sides of the unit square.
/// Corner-adjacent edges are classified by their midpoint.
struct BoundaryPartition {
  BoundaryTag left = BoundaryTag::Dirichlet;    // x = 0
  BoundaryTag right = BoundaryTag::Dirichlet;   // x = 1
  BoundaryTag bottom = BoundaryTag::Dirichlet;  // y = 0
  BoundaryTag top = BoundaryTag::Dirichlet;     // y = 1

  static BoundaryPartition all_dirichlet() { return {}; }
  /// Dirichlet on x = 0, Neumann elsewhere.
  static BoundaryPartition dirichlet_left_only();

  /// Tag of the side containing `point` (tolerance 1e-12). Throws
  /// std::invalid_argument when the point is not on the boundary of the
  /// unit square.
  BoundaryTag classify(const Vec2& point) const;
};

struct Edge {
  std::array<std::size_t, 2> vertices;  // oriented as first seen (CCW in `left`)
  std::size_t left;
  std::optional<std::size_t> right;
  BoundaryTag tag = BoundaryTag::Interior;
  double length = 0.0;

  bool is_boundary() const { return !right.has_value(); }
};

using Triangle = std::array<std::size_t, 3>;

/// Immutable triangulation. Local edge j of a triangle joins its local
/// vertices j and (j+1) mod 3.
class Mesh {
 public:
  /// Builds edges and geometry from a vertex/triangle list. Throws
  /// std::invalid_argument on non-positive areas, out-of-range indices or
  /// edges shared by more than two triangles.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
       const BoundaryPartition& partition);

  /// Same as above with explicit boundary tags, keyed by edge vertex pairs.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
       const std::function<BoundaryTag(const Edge&)>& boundary_tag);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_boundary_edges() const;

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const Vec2& vertex(std::size_t v) const { return vertices_.at(v); }

  /// Global edge indices of the local edges of element k.
  const std::array<std::size_t, 3>& element_edges(std::size_t k) const {
    return element_edges_.at(k);
  }
  /// True when local edge j of element k is traversed in the edge's stored
  /// orientation.
  bool edge_aligned(std::size_t k, int j) const;

  /// Vertex coordinates of element k.
  std::array<Vec2, 3> element_vertices(std::size_t k) const;
  double area(std::size_t k) const { return areas_.at(k); }
  double diameter(std::size_t k) const { return diameters_.at(k); }
  Vec2 barycenter(std::size_t k) const;

  /// h = max_K h_K.
  double h() const;
  /// max h_K / min h_K; a quasi-uniformity diagnostic.
  double quasi_uniformity_ratio() const;

  /// Unit normal to `edge` pointing out of `element`. Throws
  /// std::invalid_argument when the edge is not on the element.
  Vec2 outward_normal(std::size_t element, std::size_t edge) const;

  /// Local index (0..2) of `edge` in `element`, if present.
  std::optional<int> local_edge_index(std::size_t element,
                                      std::size_t edge) const;

 private:
  void build(const std::function<BoundaryTag(const Edge&)>& boundary_tag);

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<std::size_t, 3>> element_edges_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
};

/// (n+1)^2 vertices, 2n^2 triangles; each cell split along its SW-NE diagonal.
Mesh build_uniform_triangulation(
    int n, const BoundaryPartition& partition = BoundaryPartition::all_dirichlet());

/// Interior and Dirichlet edges in increasing edge index; Neumann edges are
/// excluded.
std::vector<std::size_t> extract_skeleton(const Mesh& mesh);

struct InflowViolation {
  std::size_t edge;
  Vec2 point;
};

struct InflowReport {
  bool ok = true;
  std::vector<InflowViolation> violations;
};

/// Samples b.n at Gauss points of every boundary edge; any point with
/// b.n < -1e-12 must lie on a Dirichlet edge.
InflowReport verify_inflow_in_dirichlet(
    const Mesh& mesh, const std::function<Vec2(const Vec2&)>& velocity);

/// Plain-text mesh format: "V T E", V lines "x y", T lines "i j k",
/// E lines "i j tag" (0 interior, 1 Dirichlet, 2 Neumann).
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);

}  // namespace hdgcd
