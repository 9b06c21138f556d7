#pragma once

#include "bhflow/mesh.hpp"

namespace bhflow {

/// Pointwise curvature estimates from the 3D mesh. Mean curvature comes from
/// the cotangent Laplacian of the coordinates over mixed vertex areas, signed
/// against the area-weighted outward vertex normal; Gaussian curvature is the
/// angle deficit over the same areas. Boundary vertices copy the value of
/// their nearest interior vertex (graph distance, lowest index on ties).
struct Curvatures {
  VertexField<double> mean;
  VertexField<double> gauss;
  /// Faces where the Voronoi area was replaced by the obtuse fallback.
  int mixed_area_fallbacks = 0;
};

Curvatures discrete_curvatures(const TriMesh& mesh);

}  // namespace bhflow
