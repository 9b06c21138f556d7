#include "bhflow/embed.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

namespace bhflow {

namespace {

struct HalfedgeWeights {
  // Accumulated mean-value weights per directed edge, stored sparsely.
  std::vector<std::vector<std::pair<int, double>>> w;

  explicit HalfedgeWeights(const TriMesh& mesh,
                           const std::vector<Eigen::Vector3d>& pos)
      : w(mesh.vertex_count()) {
    for (const auto& t : mesh.faces) {
      for (int c = 0; c < 3; ++c) {
        const int i = t[c], j = t[(c + 1) % 3], k = t[(c + 2) % 3];
        const Eigen::Vector3d u = pos[j] - pos[i];
        const Eigen::Vector3d v = pos[k] - pos[i];
        const double angle = std::atan2(u.cross(v).norm(), u.dot(v));
        const double half_tan = std::tan(angle / 2.0);
        add(i, j, half_tan / std::max(u.norm(), 1e-300));
        add(i, k, half_tan / std::max(v.norm(), 1e-300));
      }
    }
  }

  void add(int i, int j, double value) {
    for (auto& [to, acc] : w[i])
      if (to == j) {
        acc += value;
        return;
      }
    w[i].emplace_back(j, value);
  }
};

}  // namespace

VertexField<cplx> solve_convex_combination(
    const TriMesh& mesh, const std::vector<Eigen::Vector3d>& positions,
    const std::vector<std::pair<int, cplx>>& pins) {
  const int nv = mesh.vertex_count();
  if (positions.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "positions size mismatch");

  std::vector<char> pinned(nv, 0);
  VertexField<cplx> result(nv, cplx(0, 0));
  for (const auto& [v, value] : pins) {
    if (v < 0 || v >= nv)
      fail(ErrorCode::Validation, "pin vertex " + std::to_string(v) +
                                      " out of range");
    pinned[v] = 1;
    result[v] = value;
  }

  std::vector<int> unknown_index(nv, -1);
  std::vector<int> unknowns;
  for (int v = 0; v < nv; ++v)
    if (!pinned[v]) {
      unknown_index[v] = static_cast<int>(unknowns.size());
      unknowns.push_back(v);
    }
  if (unknowns.empty()) return result;

  const HalfedgeWeights weights(mesh, positions);

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs_x(unknowns.size()), rhs_y(unknowns.size());
  rhs_x.setZero();
  rhs_y.setZero();
  for (size_t row = 0; row < unknowns.size(); ++row) {
    const int v = unknowns[row];
    double total = 0.0;
    for (const auto& [j, wij] : weights.w[v]) total += wij;
    if (total <= 0.0)
      fail(ErrorCode::SolveFailure,
           "vertex " + std::to_string(v) + " has no positive weights");
    trips.emplace_back(static_cast<int>(row), static_cast<int>(row), total);
    for (const auto& [j, wij] : weights.w[v]) {
      if (pinned[j]) {
        rhs_x[row] += wij * result[j].real();
        rhs_y[row] += wij * result[j].imag();
      } else {
        trips.emplace_back(static_cast<int>(row), unknown_index[j], -wij);
      }
    }
  }

  Eigen::SparseMatrix<double> A(unknowns.size(), unknowns.size());
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::SolveFailure, "convex-combination factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs_x);
  const Eigen::VectorXd y = solver.solve(rhs_y);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::SolveFailure, "convex-combination solve failed");

  for (size_t row = 0; row < unknowns.size(); ++row)
    result[unknowns[row]] = cplx(x[row], y[row]);
  return result;
}

PlanarEmbedding fallback_disk_embed(MeshPtr mesh) {
  if (mesh->boundary_loops.size() != 1)
    fail(ErrorCode::Topology, "disk embedding needs exactly one boundary loop");
  const auto& loop = mesh->boundary_loops.front();

  std::vector<double> cumulative(loop.size() + 1, 0.0);
  for (size_t i = 0; i < loop.size(); ++i) {
    const int a = loop[i], b = loop[(i + 1) % loop.size()];
    cumulative[i + 1] =
        cumulative[i] + (mesh->vertices[a] - mesh->vertices[b]).norm();
  }
  const double total = cumulative.back();
  if (total <= 0.0) fail(ErrorCode::Validation, "degenerate boundary loop");

  std::vector<std::pair<int, cplx>> pins;
  pins.reserve(loop.size());
  for (size_t i = 0; i < loop.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * cumulative[i] / total;
    pins.emplace_back(loop[i], std::polar(1.0, theta));
  }

  auto coords = solve_convex_combination(*mesh, mesh->vertices, pins);
  return PlanarEmbedding::disk(std::move(mesh), std::move(coords));
}

namespace {

CPoint chart_point(const PlanarEmbedding& embed, int v) {
  if (embed.skip_vertex(v)) return CPoint::inf();
  return CPoint(embed.coords[v]);
}

}  // namespace

PlanarEmbedding sphere_embed_normalize(const PlanarEmbedding& embed, int p0,
                                       int p1, int p2) {
  if (embed.domain != DomainKind::Sphere)
    fail(ErrorCode::Validation, "expected a sphere chart");
  const int nv = embed.vertex_count();
  if (p0 == p1 || p1 == p2 || p0 == p2 || p0 < 0 || p1 < 0 || p2 < 0 ||
      p0 >= nv || p1 >= nv || p2 >= nv)
    fail(ErrorCode::InvalidPoints, "gauge vertices must be three distinct ids");

  const MobiusTransform T = mobius_to_standard_triple(
      chart_point(embed, p0), chart_point(embed, p1), chart_point(embed, p2));

  VertexField<cplx> coords(nv);
  for (int v = 0; v < nv; ++v) {
    if (v == p2) {
      coords[v] = cplx(0, 0);  // stored value unused for the pole
      continue;
    }
    const CPoint image = T.apply(chart_point(embed, v));
    if (image.infinite)
      fail(ErrorCode::InvalidPoints,
           "vertex " + std::to_string(v) + " maps to infinity; only the third "
           "gauge vertex may");
    coords[v] = image.value;
  }
  coords[p0] = cplx(0, 0);
  coords[p1] = cplx(1, 0);
  return PlanarEmbedding::sphere(embed.mesh, std::move(coords), p2);
}

PlanarEmbedding disk_embed_normalize(const PlanarEmbedding& embed, int q0,
                                     int q1) {
  if (embed.domain != DomainKind::Disk)
    fail(ErrorCode::Validation, "expected a disk embedding");
  const int nv = embed.vertex_count();
  if (q0 == q1 || q0 < 0 || q1 < 0 || q0 >= nv || q1 >= nv)
    fail(ErrorCode::InvalidPoints, "gauge vertices must be two distinct ids");
  if (embed.mesh->is_boundary(q0))
    fail(ErrorCode::InvalidPoints,
         "first gauge vertex must be interior (it is pinned to 0)");
  if (!embed.mesh->is_boundary(q1))
    fail(ErrorCode::InvalidPoints,
         "second gauge vertex must lie on the disk boundary (it is pinned "
         "to 1)");

  const MobiusTransform T =
      disk_automorphism_two_point(embed.coords[q0], embed.coords[q1]);
  VertexField<cplx> coords(nv);
  for (int v = 0; v < nv; ++v) {
    coords[v] = T.apply_finite(embed.coords[v]);
    // Guard against rounding pushing boundary points just outside the disk.
    const double r = std::abs(coords[v]);
    if (r > 1.0 && r < 1.0 + 1e-9) coords[v] /= r;
  }
  coords[q0] = cplx(0, 0);
  coords[q1] = cplx(1, 0);
  return PlanarEmbedding::disk(embed.mesh, std::move(coords));
}

PlanarEmbedding stereographic_embed(MeshPtr mesh, int pole_vertex) {
  const int nv = mesh->vertex_count();
  if (pole_vertex < 0 || pole_vertex >= nv)
    fail(ErrorCode::InvalidPoints, "pole vertex out of range");
  if (!mesh->is_closed())
    fail(ErrorCode::Topology, "stereographic chart needs a closed mesh");

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : mesh->vertices) centroid += p;
  centroid /= static_cast<double>(nv);

  std::vector<Eigen::Vector3d> dirs(nv);
  for (int v = 0; v < nv; ++v) {
    const Eigen::Vector3d d = mesh->vertices[v] - centroid;
    const double n = d.norm();
    if (n < 1e-300)
      fail(ErrorCode::Validation,
           "vertex " + std::to_string(v) + " coincides with the centroid");
    dirs[v] = d / n;
  }

  // Rotate the pole direction onto +z, then project from the north pole.
  const Eigen::Vector3d north(0, 0, 1);
  const Eigen::Quaterniond q =
      Eigen::Quaterniond::FromTwoVectors(dirs[pole_vertex], north);
  VertexField<cplx> coords(nv, cplx(0, 0));
  for (int v = 0; v < nv; ++v) {
    if (v == pole_vertex) continue;
    const Eigen::Vector3d p = q * dirs[v];
    const double den = 1.0 - p.z();
    if (den < 1e-12)
      fail(ErrorCode::InvalidPoints,
           "vertex " + std::to_string(v) + " coincides with the pole direction");
    coords[v] = cplx(p.x() / den, -p.y() / den);
  }
  return PlanarEmbedding::sphere(std::move(mesh), std::move(coords),
                                 pole_vertex);
}

}  // namespace bhflow
