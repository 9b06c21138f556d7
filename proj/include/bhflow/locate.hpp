#pragma once

#include <array>
#include <optional>

#include "bhflow/embedding.hpp"

namespace bhflow {

struct PointLocation {
  int face = -1;
  std::array<double, 3> bary{};
};

/// Uniform-grid point locator over the planar image of a triangulation.
/// Faces incident to `skip_vertex` are excluded (sphere-chart pole ring).
class PointLocator {
 public:
  PointLocator(MeshPtr mesh, VertexField<cplx> coords, int skip_vertex = -1);

  explicit PointLocator(const PlanarEmbedding& embed)
      : PointLocator(embed.mesh, embed.coords,
                     embed.domain == DomainKind::Sphere ? embed.pole_vertex
                                                        : -1) {}

  /// Containing face, or the nearest face if the query is within snap_tol of
  /// the triangulation; barycentrics clamped to [0,1] and renormalized.
  std::optional<PointLocation> try_locate(cplx query,
                                          double snap_tol = 1e-7) const;

  /// As try_locate, OutsideDomain on failure.
  PointLocation locate(cplx query, double snap_tol = 1e-7) const;

  /// Nearest point of the triangulation regardless of distance.
  PointLocation locate_clamped(cplx query) const;

  template <class T>
  T interpolate(const PointLocation& loc, std::span<const T> field) const {
    const auto& t = mesh_->faces[loc.face];
    return static_cast<T>(field[t[0]] * loc.bary[0] +
                          field[t[1]] * loc.bary[1] +
                          field[t[2]] * loc.bary[2]);
  }

  const MeshPtr& mesh() const { return mesh_; }

 private:
  std::optional<PointLocation> scan_faces(cplx query,
                                          std::span<const int> faces,
                                          double* best_dist,
                                          PointLocation* best) const;
  std::span<const int> cell_faces(int cx, int cy) const;

  MeshPtr mesh_;
  VertexField<cplx> coords_;
  std::vector<int> active_faces_;
  int nx_ = 1, ny_ = 1;
  double x0_ = 0, y0_ = 0, cell_w_ = 1, cell_h_ = 1;
  std::vector<std::vector<int>> cells_;
};

}  // namespace bhflow
