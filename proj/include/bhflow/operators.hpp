#pragma once

#include "bhflow/embedding.hpp"

namespace bhflow {

/// Per-face gradient (g_x + i g_y) of a piecewise-linear scalar field over the
/// parameter domain, from the 2x2 edge system with unit-length edge rows.
/// Exact for affine fields. Pole-incident faces of sphere charts get 0.
std::vector<cplx> face_gradient(const PlanarEmbedding& embed,
                                std::span<const double> field);

///// Vertex gradient (D_x + i D_y): unweighted mean of incident face gradients,
/// boundary vertices included with their partial one-ring.
VertexField<cplx> vertex_derivatives(const PlanarEmbedding& embed,
                                     std::span<const double> field);

/// Wirtinger derivatives of a complex map sampled on vertices:
///   f_z    = ((D_x f1 + D_y f2) + i (D_x f2 - D_y f1)) / 2
///   f_zbar = ((D_x f1 - D_y f2) + i (D_x f2 + D_y f1)) / 2
struct WirtingerDerivatives {
  VertexField<cplx> fz;
  VertexField<cplx> fzbar;
};

WirtingerDerivatives wirtinger_derivatives(const PlanarEmbedding& embed,
                                           std::span<const cplx> map_values);

}  // namespace bhflow
