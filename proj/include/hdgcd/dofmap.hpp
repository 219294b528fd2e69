#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdgcd/mesh.hpp"

namespace hdgcd {

enum class SkeletonMode {
  Discontinuous,  // k+1 trace dofs per skeleton edge
  Continuous,     // one trace dof per skeleton vertex (k = 1 only)
};

/// Degree-of-freedom numbering for element interiors and skeleton traces.
///
/// Trace dofs fixed to zero (on the Dirichlet boundary) have no global index
/// and are reported as kFixed. Neumann edges carry no trace slots at all;
/// their slots are also kFixed.
class DofMap {
 public:
  static constexpr long kFixed = -1;

  DofMap(const Mesh& mesh, int degree, SkeletonMode mode);

  int degree() const { return degree_; }
  SkeletonMode mode() const { return mode_; }
  std::size_t num_elements() const { return num_elements_; }
  std::size_t num_edges() const { return edge_dofs_.size() / trace_per_edge_; }

  std::size_t interior_per_element() const { return interior_per_element_; }
  /// Local trace slots per edge (k+1 in both modes; 2 for k = 1 continuous).
  std::size_t trace_per_edge() const { return trace_per_edge_; }
  /// 3 * trace_per_edge().
  std::size_t trace_per_element() const { return 3 * trace_per_edge_; }

  std::size_t num_interior() const { return num_elements_ * interior_per_element_; }
  /// Active (globally numbered) trace dofs.
  std::size_t num_trace() const { return num_trace_; }
  /// Trace dofs counted before Dirichlet elimination.
  std::size_t num_trace_before_elimination() const { return num_trace_unreduced_; }
  std::size_t num_total() const { return num_interior() + num_trace(); }

  std::size_t interior_offset(std::size_t element) const {
    return element * interior_per_element_;
  }

  /// Global trace index per slot of `edge` (kFixed where eliminated).
  std::span<const long> edge_dofs(std::size_t edge) const {
    return {edge_dofs_.data() + edge * trace_per_edge_, trace_per_edge_};
  }

  /// Global trace index per local trace slot of `element`, ordered by local
  /// edge then edge slot. Slots follow the edge's stored orientation.
  std::vector<long> element_trace_dofs(std::size_t element) const;

  const std::vector<std::size_t>& skeleton() const { return skeleton_; }
  bool on_skeleton(std::size_t edge) const { return on_skeleton_.at(edge); }

  /// True when this map was built for a mesh with the same counts.
  bool consistent_with(const Mesh& mesh) const;

 private:
  int degree_;
  SkeletonMode mode_;
  std::size_t num_elements_;
  std::size_t interior_per_element_;
  std::size_t trace_per_edge_;
  std::size_t num_trace_ = 0;
  std::size_t num_trace_unreduced_ = 0;
  std::size_t num_vertices_;
  std::vector<long> edge_dofs_;
  std::vector<std::array<std::size_t, 3>> element_edges_;
  std::vector<std::size_t> skeleton_;
  std::vector<bool> on_skeleton_;
};

}  // namespace hdgcd
