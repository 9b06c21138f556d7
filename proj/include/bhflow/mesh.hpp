#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "bhflow/types.hpp"

namespace bhflow {

/// Oriented genus-0 triangle mesh, either closed (Euler characteristic 2) or
/// a topological disk with a single boundary loop (characteristic 1).
/// Construct through build(), which validates and derives adjacency.
struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  /// Boundary cycles in face-edge direction (counter-clockwise for a
  /// positively oriented disk). Empty for closed meshes.
  std::vector<std::vector<int>> boundary_loops;

  /// Incident faces per vertex, unordered.
  std::vector<std::vector<int>> vertex_faces;
  std::vector<char> boundary_flag;
  int edge_count = 0;

  static TriMesh build(std::vector<Eigen::Vector3d> vertices,
                       std::vector<std::array<int, 3>> faces);

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  bool is_closed() const { return boundary_loops.empty(); }
  bool is_boundary(int v) const { return boundary_flag[v] != 0; }

  double face_area(int f) const;

  /// Undirected vertex adjacency, derived on demand.
  std::vector<std::vector<int>> vertex_neighbors() const;
};

using MeshPtr = std::shared_ptr<const TriMesh>;

inline MeshPtr make_mesh(std::vector<Eigen::Vector3d> vertices,
                         std::vector<std::array<int, 3>> faces) {
  return std::make_shared<const TriMesh>(
      TriMesh::build(std::move(vertices), std::move(faces)));
}

}  // namespace bhflow
