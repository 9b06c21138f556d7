#pragma once

#include <optional>

#include "bhflow/embedding.hpp"
#include "bhflow/mobius.hpp"

namespace bhflow {

/// Mean-value convex-combination solve: every vertex not pinned becomes the
/// weighted average of its neighbors; weights come from `positions`. Pins are
/// (vertex, value) pairs. SolveFailure if the factorization fails.
VertexField<cplx> solve_convex_combination(
    const TriMesh& mesh, const std::vector<Eigen::Vector3d>& positions,
    const std::vector<std::pair<int, cplx>>& pins);

/// Disk embedding for a mesh with one boundary loop: boundary mapped to the
/// unit circle by arc length (3D), interior by the convex-combination solve.
/// The gauge is not fixed beyond the boundary placement.
PlanarEmbedding fallback_disk_embed(MeshPtr mesh);

/// Post-compose a sphere chart with the Mobius transform sending the chart
/// coordinates of (p0, p1, p2) to (0, 1, infinity); p2 becomes the pole.
PlanarEmbedding sphere_embed_normalize(const PlanarEmbedding& embed, int p0,
                                       int p1, int p2);

/// Post-compose a disk embedding with the automorphism sending the chart
/// coordinates of (q0, q1) to (0, 1); q1 should be a boundary vertex.
PlanarEmbedding disk_embed_normalize(const PlanarEmbedding& embed, int q0,
                                     int q1);

/// Stereographic chart of a closed mesh whose vertices are treated as
/// directions from their centroid; `pole_vertex` projects to infinity.
PlanarEmbedding stereographic_embed(MeshPtr mesh, int pole_vertex);

}  // namespace bhflow
