#include "hdgcd/dofmap.hpp"

#include <stdexcept>

namespace hdgcd {

DofMap::DofMap(const Mesh& mesh, int degree, SkeletonMode mode)
    : degree_(degree),
      mode_(mode),
      num_elements_(mesh.num_elements()),
      interior_per_element_(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2)),
      trace_per_edge_(static_cast<std::size_t>(degree + 1)),
      num_vertices_(mesh.num_vertices()) {
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (mode == SkeletonMode::Continuous && degree != 1)
    throw std::invalid_argument("continuous skeleton mode requires degree 1");

  skeleton_ = extract_skeleton(mesh);
  on_skeleton_.assign(mesh.num_edges(), false);
  for (std::size_t e : skeleton_) on_skeleton_[e] = true;
  element_edges_.reserve(mesh.num_elements());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
    element_edges_.push_back(mesh.element_edges(k));

  edge_dofs_.assign(mesh.num_edges() * trace_per_edge_, kFixed);
  long next = 0;
  if (mode == SkeletonMode::Discontinuous) {
    for (std::size_t e : skeleton_) {
      num_trace_unreduced_ += trace_per_edge_;
      if (mesh.edge(e).tag == BoundaryTag::Dirichlet) continue;
      for (std::size_t s = 0; s < trace_per_edge_; ++s)
        edge_dofs_[e * trace_per_edge_ + s] = next++;
    }
  } else {
    std::vector<bool> touches_skeleton(mesh.num_vertices(), false);
    std::vector<bool> on_dirichlet(mesh.num_vertices(), false);
    for (std::size_t e : skeleton_) {
      const Edge& edge = mesh.edge(e);
      for (std::size_t v : edge.vertices) {
        touches_skeleton[v] = true;
        if (edge.tag == BoundaryTag::Dirichlet) on_dirichlet[v] = true;
      }
    }
    std::vector<long> vertex_dof(mesh.num_vertices(), kFixed);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      if (!touches_skeleton[v]) continue;
      ++num_trace_unreduced_;
      if (!on_dirichlet[v]) vertex_dof[v] = next++;
    }
    for (std::size_t e : skeleton_)
      for (std::size_t s = 0; s < 2; ++s)
        edge_dofs_[e * 2 + s] = vertex_dof[mesh.edge(e).vertices[s]];
  }
  num_trace_ = static_cast<std::size_t>(next);
}

std::vector<long> DofMap::element_trace_dofs(std::size_t element) const {
  std::vector<long> dofs;
  dofs.reserve(trace_per_element());
  for (std::size_t e : element_edges_.at(element)) {
    const auto slots = edge_dofs(e);
    dofs.insert(dofs.end(), slots.begin(), slots.end());
  }
  return dofs;
}

bool DofMap::consistent_with(const Mesh& mesh) const {
  return mesh.num_elements() == num_elements_ && mesh.num_edges() == num_edges() &&
         mesh.num_vertices() == num_vertices_;
}

}  // namespace hdgcd
