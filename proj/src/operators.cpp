#include "bhflow/operators.hpp"

#include <cmath>

namespace bhflow {

namespace {

void check_field_size(const PlanarEmbedding& embed, size_t n) {
  if (n != static_cast<size_t>(embed.vertex_count()))
    fail(ErrorCode::Validation,
         "field has " + std::to_string(n) + " values for " +
             std::to_string(embed.vertex_count()) + " vertices");
}

// Solves [u1; u2] g = [d1; d2] for g encoded as g_x + i g_y, where u1, u2 are
// unit edge directions and d1, d2 the matching normalized field differences.
cplx solve_edge_system(cplx u1, cplx u2, double d1, double d2, int face) {
  const double det = u1.real() * u2.imag() - u1.imag() * u2.real();
  if (std::abs(det) < 1e-12)
    fail(ErrorCode::SingularFace,
         "parameter-domain face " + std::to_string(face) +
             " is degenerate (collinear edges)");
  const double gx = (d1 * u2.imag() - d2 * u1.imag()) / det;
  const double gy = (u1.real() * d2 - u2.real() * d1) / det;
  return {gx, gy};
}

}  // namespace

std::vector<cplx> face_gradient(const PlanarEmbedding& embed,
                                std::span<const double> field) {
  check_field_size(embed, field.size());
  const auto& mesh = *embed.mesh;
  std::vector<cplx> grad(mesh.face_count(), cplx(0.0, 0.0));
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (embed.skip_face(f)) continue;
    const auto& t = mesh.faces[f];
    const cplx e1 = embed.coords[t[1]] - embed.coords[t[0]];
    const cplx e2 = embed.coords[t[2]] - embed.coords[t[0]];
    const double l1 = std::abs(e1), l2 = std::abs(e2);
    if (l1 < 1e-300 || l2 < 1e-300)
      fail(ErrorCode::SingularFace,
           "parameter-domain face " + std::to_string(f) + " has a zero edge");
    grad[f] = solve_edge_system(e1 / l1, e2 / l2,
                                (field[t[1]] - field[t[0]]) / l1,
                                (field[t[2]] - field[t[0]]) / l2, f);
  }
  return grad;
}

VertexField<cplx> vertex_derivatives(const PlanarEmbedding& embed,
                                     std::span<const double> field) {
  check_field_size(embed, field.size());
  const auto& mesh = *embed.mesh;
  const auto grad = face_gradient(embed, field);
  VertexField<cplx> out(mesh.vertex_count(), cplx(0.0, 0.0));
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (embed.skip_vertex(v)) continue;
    cplx acc(0.0, 0.0);
    int used = 0;
    for (int f : mesh.vertex_faces[v]) {
      if (embed.skip_face(f)) continue;
      acc += grad[f];
      ++used;
    }
    if (used == 0)
      fail(ErrorCode::SingularFace,
           "vertex " + std::to_string(v) + " has no usable incident face");
    out[v] = acc / static_cast<double>(used);
  }
  return out;
}

WirtingerDerivatives wirtinger_derivatives(const PlanarEmbedding& embed,
                                           std::span<const cplx> map_values) {
  check_field_size(embed, map_values.size());
  const int nv = embed.vertex_count();
  std::vector<double> f1(nv), f2(nv);
  for (int v = 0; v < nv; ++v) {
    f1[v] = map_values[v].real();
    f2[v] = map_values[v].imag();
  }
  // Pole values are meaningless in sphere charts; pole-incident faces are
  // already skipped, zeroing keeps the remaining arithmetic finite.
  if (embed.domain == DomainKind::Sphere) {
    f1[embed.pole_vertex] = 0.0;
    f2[embed.pole_vertex] = 0.0;
  }
  const auto g1 = vertex_derivatives(embed, f1);
  const auto g2 = vertex_derivatives(embed, f2);
  WirtingerDerivatives d;
  d.fz.resize(nv);
  d.fzbar.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const double dxf1 = g1[v].real(), dyf1 = g1[v].imag();
    const double dxf2 = g2[v].real(), dyf2 = g2[v].imag();
    d.fz[v] = 0.5 * cplx(dxf1 + dyf2, dxf2 - dyf1);
    d.fzbar[v] = 0.5 * cplx(dxf1 - dyf2, dxf2 + dyf1);
  }
  return d;
}

}  // namespace bhflow
