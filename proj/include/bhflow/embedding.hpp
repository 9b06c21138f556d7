#pragma once

#include <memory>

#include "bhflow/mesh.hpp"
#include "bhflow/types.hpp"

namespace bhflow {

enum class DomainKind { Disk, Sphere };

const char* domain_kind_name(DomainKind d);

/// Planar parameter-domain coordinates for a mesh: the closed unit disk, or
/// the stereographic chart of the sphere where one designated pole vertex
/// sits at infinity (its stored coordinate is ignored).
struct PlanarEmbedding {
  MeshPtr mesh;
  VertexField<cplx> coords;
  DomainKind domain = DomainKind::Disk;
  int pole_vertex = -1;

  static PlanarEmbedding disk(MeshPtr mesh, VertexField<cplx> coords);
  static PlanarEmbedding sphere(MeshPtr mesh, VertexField<cplx> coords,
                                int pole_vertex);

  int vertex_count() const { return mesh->vertex_count(); }
  bool skip_vertex(int v) const {
    return domain == DomainKind::Sphere && v == pole_vertex;
  }
  bool skip_face(int f) const;

  /// Twice the signed parameter-domain area would be Im(conj(e1) e2); this
  /// returns the area itself (positive for counter-clockwise faces).
  double face_signed_area(int f) const;

  void validate() const;
};

using EmbeddingPtr = std::shared_ptr<const PlanarEmbedding>;

double face_signed_area(cplx a, cplx b, cplx c);

/// Faces with non-positive parameter-domain image area. Pole-incident faces
/// are skipped for sphere charts; `coords` overrides the embedding's own
/// coordinates when given (used on map images).
std::vector<int> flipped_faces(const PlanarEmbedding& embed);
std::vector<int> flipped_faces(const PlanarEmbedding& embed,
                               std::span<const cplx> coords);

/// Lumped vertex measure: one third of incident face areas, zero at the pole.
VertexField<double> vertex_area(const PlanarEmbedding& embed);

double mean_edge_length(const PlanarEmbedding& embed);

}  // namespace bhflow
