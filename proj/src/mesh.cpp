#include "bhflow/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bhflow {

namespace {

uint64_t edge_key(int a, int b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

}  // namespace

TriMesh TriMesh::build(std::vector<Eigen::Vector3d> vertices,
                       std::vector<std::array<int, 3>> faces) {
  TriMesh m;
  m.vertices = std::move(vertices);
  m.faces = std::move(faces);
  const int nv = m.vertex_count();
  const int nf = m.face_count();
  if (nv < 3 || nf < 1)
    fail(ErrorCode::Topology, "mesh needs at least 3 vertices and 1 face");

  double scale = 0.0;
  {
    Eigen::Vector3d lo = m.vertices[0], hi = m.vertices[0];
    for (const auto& p : m.vertices) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    scale = (hi - lo).norm();
    if (scale <= 0.0) fail(ErrorCode::Topology, "all vertices coincide");
  }

  for (int f = 0; f < nf; ++f) {
    const auto& t = m.faces[f];
    for (int c = 0; c < 3; ++c) {
      if (t[c] < 0 || t[c] >= nv)
        fail(ErrorCode::Topology,
             "face " + std::to_string(f) + " references vertex " +
                 std::to_string(t[c]) + " out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      fail(ErrorCode::Topology,
           "face " + std::to_string(f) + " repeats a vertex index");
    const Eigen::Vector3d e1 = m.vertices[t[1]] - m.vertices[t[0]];
    const Eigen::Vector3d e2 = m.vertices[t[2]] - m.vertices[t[0]];
    if (e1.cross(e2).norm() * 0.5 < 1e-14 * scale * scale)
      fail(ErrorCode::Topology,
           "face " + std::to_string(f) + " has zero area");
  }

  // Directed edges: consistent orientation means no directed edge repeats and
  // every interior edge shows up once per direction.
  std::unordered_map<uint64_t, int> directed;
  directed.reserve(nf * 3);
  for (int f = 0; f < nf; ++f) {
    const auto& t = m.faces[f];
    for (int c = 0; c < 3; ++c) {
      const int a = t[c], b = t[(c + 1) % 3];
      auto [it, inserted] = directed.emplace(edge_key(a, b), f);
      if (!inserted)
        fail(ErrorCode::Topology,
             "edge (" + std::to_string(a) + "," + std::to_string(b) +
                 ") appears twice with the same orientation (faces " +
                 std::to_string(it->second) + "," + std::to_string(f) + ")");
    }
  }

  // Boundary = directed edges with no opposite partner.
  std::unordered_map<int, int> boundary_next;
  int undirected = 0;
  for (const auto& [key, f] : directed) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (directed.count(edge_key(b, a))) {
      if (a < b) ++undirected;
    } else {
      ++undirected;
      auto [it, inserted] = boundary_next.emplace(a, b);
      if (!inserted)
        fail(ErrorCode::Topology,
             "non-manifold boundary at vertex " + std::to_string(a));
    }
  }
  m.edge_count = undirected;

  m.boundary_flag.assign(nv, 0);
  std::unordered_set<int> visited;
  while (visited.size() < boundary_next.size()) {
    int start = -1;
    for (const auto& [a, b] : boundary_next)
      if (!visited.count(a)) {
        start = a;
        break;
      }
    std::vector<int> loop;
    int cur = start;
    do {
      if (visited.count(cur))
        fail(ErrorCode::Topology,
             "boundary walk re-enters vertex " + std::to_string(cur));
      visited.insert(cur);
      m.boundary_flag[cur] = 1;
      loop.push_back(cur);
      auto it = boundary_next.find(cur);
      if (it == boundary_next.end())
        fail(ErrorCode::Topology,
             "boundary chain broken at vertex " + std::to_string(cur));
      cur = it->second;
    } while (cur != start);
    m.boundary_loops.push_back(std::move(loop));
  }

  const int chi = nv - undirected + nf;
  const int loops = static_cast<int>(m.boundary_loops.size());
  if (!((chi == 2 && loops == 0) || (chi == 1 && loops == 1))) {
    std::ostringstream os;
    os << "unsupported topology: Euler characteristic " << chi << " with "
       << loops << " boundary loop(s); need a closed genus-0 mesh or a disk";
    fail(ErrorCode::Topology, os.str());
  }

  m.vertex_faces.assign(nv, {});
  for (int f = 0; f < nf; ++f)
    for (int c = 0; c < 3; ++c) m.vertex_faces[m.faces[f][c]].push_back(f);
  for (int v = 0; v < nv; ++v)
    if (m.vertex_faces[v].empty())
      fail(ErrorCode::Topology, "isolated vertex " + std::to_string(v));

  return m;
}

double TriMesh::face_area(int f) const {
  const auto& t = faces[f];
  const Eigen::Vector3d e1 = vertices[t[1]] - vertices[t[0]];
  const Eigen::Vector3d e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * e1.cross(e2).norm();
}

std::vector<std::vector<int>> TriMesh::vertex_neighbors() const {
  std::vector<std::unordered_set<int>> sets(vertices.size());
  for (const auto& t : faces)
    for (int c = 0; c < 3; ++c) {
      sets[t[c]].insert(t[(c + 1) % 3]);
      sets[t[c]].insert(t[(c + 2) % 3]);
    }
  std::vector<std::vector<int>> out(vertices.size());
  for (size_t v = 0; v < sets.size(); ++v) {
    out[v].assign(sets[v].begin(), sets[v].end());
    std::sort(out[v].begin(), out[v].end());
  }
  return out;
}

}  // namespace bhflow
