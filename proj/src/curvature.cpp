#include "bhflow/curvature.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace bhflow {

namespace {

double corner_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& p,
                    const Eigen::Vector3d& q) {
  const Eigen::Vector3d u = p - at, v = q - at;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

double cot(double angle) {
  const double t = std::tan(angle);
  if (std::abs(t) < 1e-300) return 0.0;
  return 1.0 / t;
}

}  // namespace

Curvatures discrete_curvatures(const TriMesh& mesh) {
  const int nv = mesh.vertex_count();
  const int nf = mesh.face_count();

  Curvatures out;
  out.mean.assign(nv, 0.0);
  out.gauss.assign(nv, 0.0);

  VertexField<double> mixed_area(nv, 0.0);
  VertexField<double> angle_sum(nv, 0.0);
  std::vector<Eigen::Vector3d> laplace(nv, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> normal(nv, Eigen::Vector3d::Zero());

  for (int f = 0; f < nf; ++f) {
    const auto& t = mesh.faces[f];
    const Eigen::Vector3d& a = mesh.vertices[t[0]];
    const Eigen::Vector3d& b = mesh.vertices[t[1]];
    const Eigen::Vector3d& c = mesh.vertices[t[2]];
    const double area = mesh.face_area(f);
    const Eigen::Vector3d fn = (b - a).cross(c - a);

    double ang[3];
    ang[0] = corner_angle(a, b, c);
    ang[1] = corner_angle(b, c, a);
    ang[2] = corner_angle(c, a, b);

    const bool obtuse = ang[0] > std::numbers::pi / 2 ||
                        ang[1] > std::numbers::pi / 2 ||
                        ang[2] > std::numbers::pi / 2;
    if (obtuse) ++out.mixed_area_fallbacks;

    for (int cidx = 0; cidx < 3; ++cidx) {
      const int v = t[cidx];
      const int vn = t[(cidx + 1) % 3];
      const int vp = t[(cidx + 2) % 3];
      angle_sum[v] += ang[cidx];
      normal[v] += fn;  // area-weighted: |fn| = 2 area

      if (obtuse) {
        mixed_area[v] += (ang[cidx] > std::numbers::pi / 2) ? area / 2.0
                                                            : area / 4.0;
      } else {
        // Voronoi portion: 1/8 (|e_vp|^2 cot(angle at vn) + |e_vn|^2 cot(angle at vp))
        const double e_n2 =
            (mesh.vertices[vn] - mesh.vertices[v]).squaredNorm();
        const double e_p2 =
            (mesh.vertices[vp] - mesh.vertices[v]).squaredNorm();
        mixed_area[v] +=
            (e_p2 * cot(ang[(cidx + 1) % 3]) + e_n2 * cot(ang[(cidx + 2) % 3])) /
            8.0;
      }

      // Cotangent Laplacian: edge (v, vn) weighted by the angle opposite it.
      const double w = cot(ang[(cidx + 2) % 3]);
      laplace[v] += w * (mesh.vertices[v] - mesh.vertices[vn]);
      laplace[vn] += w * (mesh.vertices[vn] - mesh.vertices[v]);
    }
  }

  for (int v = 0; v < nv; ++v) {
    if (mesh.is_boundary(v)) continue;
    const double area = mixed_area[v];
    if (area < 1e-300) fail(ErrorCode::Validation,
                            "vertex " + std::to_string(v) + " has zero mixed area");
    const Eigen::Vector3d hvec = laplace[v] / (2.0 * area);
    const double sign = hvec.dot(normal[v]) >= 0.0 ? 1.0 : -1.0;
    out.mean[v] = sign * 0.5 * hvec.norm();
    out.gauss[v] = (2.0 * std::numbers::pi - angle_sum[v]) / area;
  }

  if (!mesh.boundary_loops.empty()) {
    // Multi-source BFS from interior vertices, index order within each layer,
    // so every boundary vertex adopts a nearest interior value deterministically.
    const auto nbrs = mesh.vertex_neighbors();
    std::vector<int> source(nv, -1);
    std::deque<int> queue;
    for (int v = 0; v < nv; ++v)
      if (!mesh.is_boundary(v)) {
        source[v] = v;
        queue.push_back(v);
      }
    if (queue.empty())
      fail(ErrorCode::Validation,
           "mesh has no interior vertex to extend curvature from");
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int n : nbrs[v])
        if (source[n] == -1) {
          source[n] = source[v];
          queue.push_back(n);
        }
    }
    for (int v = 0; v < nv; ++v)
      if (mesh.is_boundary(v)) {
        out.mean[v] = out.mean[source[v]];
        out.gauss[v] = out.gauss[source[v]];
      }
  }

  return out;
}

}  // namespace bhflow
