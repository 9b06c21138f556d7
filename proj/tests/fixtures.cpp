#include "fixtures.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace bhflow::fixtures {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

MeshPtr polar_disk_mesh(int rings) {
  std::vector<Eigen::Vector3d> vertices;
  vertices.emplace_back(0.0, 0.0, 0.0);
  auto ring_start = [](int j) { return 1 + 3 * j * (j - 1); };
  for (int j = 1; j <= rings; ++j) {
    const double r = static_cast<double>(j) / rings;
    const int n = 6 * j;
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * kPi * i / n;
      vertices.emplace_back(r * std::cos(theta), r * std::sin(theta), 0.0);
    }
  }
  // Boundary gauge vertex: angle 0 on the last ring is exactly (1, 0).
  vertices[ring_start(rings)] = Eigen::Vector3d(1.0, 0.0, 0.0);

  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < 6; ++i)
    faces.push_back({0, 1 + i, 1 + (i + 1) % 6});
  for (int j = 1; j < rings; ++j) {
    const int inner = ring_start(j), outer = ring_start(j + 1);
    const int ni = 6 * j, no = 6 * (j + 1);
    for (int s = 0; s < 6; ++s) {
      auto a = [&](int i) { return inner + (j * s + i) % ni; };
      auto b = [&](int i) { return outer + ((j + 1) * s + i) % no; };
      for (int i = 0; i < j; ++i) {
        faces.push_back({a(i), b(i), b(i + 1)});
        faces.push_back({a(i), b(i + 1), a(i + 1)});
      }
      faces.push_back({a(j), b(j), b(j + 1)});
    }
  }
  return make_mesh(std::move(vertices), std::move(faces));
}

EmbeddingPtr polar_disk_chart(int rings) {
  MeshPtr mesh = polar_disk_mesh(rings);
  VertexField<cplx> coords(mesh->vertex_count());
  for (int v = 0; v < mesh->vertex_count(); ++v)
    coords[v] = cplx(mesh->vertices[v].x(), mesh->vertices[v].y());
  return std::make_shared<const PlanarEmbedding>(
      PlanarEmbedding::disk(mesh, std::move(coords)));
}

namespace {

MeshPtr subdivided_icosahedron(int subdiv,
                               const std::function<double(
                                   const Eigen::Vector3d&)>& radius_of) {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> vertices = {
      {-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0},
      {0, -1, p}, {0, 1, p},   {0, -1, -p}, {0, 1, -p},
      {p, 0, -1}, {p, 0, 1},   {-p, 0, -1}, {-p, 0, 1},
  };
  for (auto& v : vertices) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int s = 0; s < subdiv; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(vertices.size());
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]),
                ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  for (auto& v : vertices) v *= radius_of(v);
  return make_mesh(std::move(vertices), std::move(faces));
}

}  // namespace

MeshPtr icosphere_mesh(int subdiv, double radius) {
  return subdivided_icosahedron(subdiv,
                                [radius](const Eigen::Vector3d&) {
                                  return radius;
                                });
}

MeshPtr bumped_sphere_mesh(int subdiv, double radius, double amp,
                           double sigma) {
  const Eigen::Vector3d axis = Eigen::Vector3d(1, 1, 1).normalized();
  return subdivided_icosahedron(subdiv, [=](const Eigen::Vector3d& dir) {
    const double angle =
        std::acos(std::clamp(dir.normalized().dot(axis), -1.0, 1.0));
    return radius * (1.0 + amp * std::exp(-angle * angle /
                                          (2.0 * sigma * sigma)));
  });
}

EmbeddingPtr sphere_chart(MeshPtr mesh, int pole, int p0, int p1) {
  PlanarEmbedding chart = stereographic_embed(mesh, pole);
  chart = sphere_embed_normalize(chart, p0, p1, pole);
  return std::make_shared<const PlanarEmbedding>(std::move(chart));
}

MeshPtr cylinder_patch_mesh(int nu, int nv, double wrap) {
  std::vector<Eigen::Vector3d> vertices;
  for (int j = 0; j <= nv; ++j) {
    const double z = 2.0 * j / nv;
    for (int i = 0; i <= nu; ++i) {
      const double theta = wrap * 2.0 * kPi * i / nu;
      vertices.emplace_back(std::cos(theta), std::sin(theta), z);
    }
  }
  auto id = [&](int i, int j) { return j * (nu + 1) + i; };
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return make_mesh(std::move(vertices), std::move(faces));
}

VertexField<cplx> affine_map_values(const PlanarEmbedding& chart, double k) {
  VertexField<cplx> out(chart.vertex_count());
  for (int v = 0; v < chart.vertex_count(); ++v) {
    const cplx z = chart.coords[v];
    out[v] = (z + k * std::conj(z)) / (1.0 + k);
  }
  return out;
}

VertexField<cplx> twist_map_values(const PlanarEmbedding& chart, double eps) {
  VertexField<cplx> out(chart.vertex_count());
  for (int v = 0; v < chart.vertex_count(); ++v) {
    const cplx z = chart.coords[v];
    out[v] = z * std::exp(cplx(0, eps * (1.0 - std::norm(z))));
  }
  return out;
}

VertexField<cplx> twist_map_bc(const PlanarEmbedding& chart, double eps) {
  VertexField<cplx> out(chart.vertex_count());
  for (int v = 0; v < chart.vertex_count(); ++v) {
    const cplx z = chart.coords[v];
    out[v] = cplx(0, -eps) * z * z / (1.0 - cplx(0, eps) * std::norm(z));
  }
  return out;
}

std::array<int, 3> bump_gauge(const TriMesh& mesh) {
  const Eigen::Vector3d axis = Eigen::Vector3d(1, 1, 1).normalized();
  int pole = 0, peak = 0, equator = 0;
  double dpole = 2.0, dpeak = 2.0, deq = 2.0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Eigen::Vector3d dir = mesh.vertices[v].normalized();
    const double a = dir.dot(axis);
    if (1.0 + a < dpole) {
      dpole = 1.0 + a;
      pole = v;
    }
    if (1.0 - a < dpeak) {
      dpeak = 1.0 - a;
      peak = v;
    }
    if (std::abs(a) < deq) {
      deq = std::abs(a);
      equator = v;
    }
  }
  return {pole, peak, equator};
}

}  // namespace bhflow::fixtures
