#include "bhflow/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_set>

namespace bhflow {

const char* domain_kind_name(DomainKind d) {
  return d == DomainKind::Disk ? "disk" : "sphere";
}

PlanarEmbedding PlanarEmbedding::disk(MeshPtr mesh, VertexField<cplx> coords) {
  PlanarEmbedding e;
  e.mesh = std::move(mesh);
  e.coords = std::move(coords);
  e.domain = DomainKind::Disk;
  e.validate();
  return e;
}

PlanarEmbedding PlanarEmbedding::sphere(MeshPtr mesh, VertexField<cplx> coords,
                                        int pole_vertex) {
  PlanarEmbedding e;
  e.mesh = std::move(mesh);
  e.coords = std::move(coords);
  e.domain = DomainKind::Sphere;
  e.pole_vertex = pole_vertex;
  e.validate();
  return e;
}

bool PlanarEmbedding::skip_face(int f) const {
  if (domain != DomainKind::Sphere) return false;
  const auto& t = mesh->faces[f];
  return t[0] == pole_vertex || t[1] == pole_vertex || t[2] == pole_vertex;
}

double face_signed_area(cplx a, cplx b, cplx c) {
  return 0.5 * (std::imag(std::conj(b - a) * (c - a)));
}

double PlanarEmbedding::face_signed_area(int f) const {
  const auto& t = mesh->faces[f];
  return bhflow::face_signed_area(coords[t[0]], coords[t[1]], coords[t[2]]);
}

void PlanarEmbedding::validate() const {
  if (!mesh) fail(ErrorCode::Validation, "embedding has no mesh");
  if (coords.size() != static_cast<size_t>(mesh->vertex_count()))
    fail(ErrorCode::Validation,
         "embedding has " + std::to_string(coords.size()) +
             " coordinates for " + std::to_string(mesh->vertex_count()) +
             " vertices");
  if (domain == DomainKind::Disk) {
    if (!mesh->boundary_loops.empty()) {
      for (int v : mesh->boundary_loops.front()) {
        const double r = std::abs(coords[v]);
        if (std::abs(r - 1.0) > 1e-9)
          fail(ErrorCode::Validation,
               "disk boundary vertex " + std::to_string(v) +
                   " has |z| = " + std::to_string(r));
      }
    }
    for (int v = 0; v < mesh->vertex_count(); ++v)
      if (std::abs(coords[v]) > 1.0 + 1e-9)
        fail(ErrorCode::Validation,
             "disk vertex " + std::to_string(v) + " lies outside the unit disk");
  } else {
    if (pole_vertex < 0 || pole_vertex >= mesh->vertex_count())
      fail(ErrorCode::Validation, "sphere embedding needs a valid pole vertex");
    if (!mesh->is_closed())
      fail(ErrorCode::Validation, "sphere embedding needs a closed mesh");
    for (int v = 0; v < mesh->vertex_count(); ++v)
      if (v != pole_vertex && !std::isfinite(coords[v].real() + coords[v].imag()))
        fail(ErrorCode::Validation,
             "non-finite chart coordinate at vertex " + std::to_string(v));
  }
  const auto flips = flipped_faces(*this);
  if (!flips.empty()) {
    std::ostringstream os;
    os << flips.size() << " flipped face(s) in parameter domain, first: "
       << flips.front();
    fail(ErrorCode::Validation, os.str());
  }
}

std::vector<int> flipped_faces(const PlanarEmbedding& embed) {
  return flipped_faces(embed, embed.coords);
}

std::vector<int> flipped_faces(const PlanarEmbedding& embed,
                               std::span<const cplx> coords) {
  std::vector<int> out;
  const auto& mesh = *embed.mesh;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (embed.skip_face(f)) continue;
    const auto& t = mesh.faces[f];
    if (face_signed_area(coords[t[0]], coords[t[1]], coords[t[2]]) <= 0.0)
      out.push_back(f);
  }
  return out;
}

VertexField<double> vertex_area(const PlanarEmbedding& embed) {
  const auto& mesh = *embed.mesh;
  VertexField<double> area(mesh.vertex_count(), 0.0);
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (embed.skip_face(f)) continue;
    const double a = embed.face_signed_area(f) / 3.0;
    const auto& t = mesh.faces[f];
    for (int c = 0; c < 3; ++c) area[t[c]] += a;
  }
  if (embed.domain == DomainKind::Sphere) area[embed.pole_vertex] = 0.0;
  return area;
}

double mean_edge_length(const PlanarEmbedding& embed) {
  const auto& mesh = *embed.mesh;
  std::unordered_set<uint64_t> seen;
  double total = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (embed.skip_face(f)) continue;
    const auto& t = mesh.faces[f];
    for (int c = 0; c < 3; ++c) {
      const int a = std::min(t[c], t[(c + 1) % 3]);
      const int b = std::max(t[c], t[(c + 1) % 3]);
      const uint64_t key =
          (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
          static_cast<uint32_t>(b);
      if (seen.insert(key).second)
        total += std::abs(embed.coords[a] - embed.coords[b]);
    }
  }
  if (seen.empty()) fail(ErrorCode::Validation, "embedding has no usable edges");
  return total / static_cast<double>(seen.size());
}

}  // namespace bhflow
