#pragma once

#include "bhflow/embed.hpp"
#include "bhflow/embedding.hpp"

namespace bhflow::fixtures {

/// Flat unit-disk triangulation: center vertex 0 at the origin, `rings`
/// concentric rings with 6j vertices on ring j, boundary vertex at exactly
/// 1+0i. V = 1 + 3 rings (rings+1), F = 6 rings^2.
MeshPtr polar_disk_mesh(int rings);

/// Identity chart over polar_disk_mesh: coords are the xy plane positions.
EmbeddingPtr polar_disk_chart(int rings);

/// Icosahedron subdivided `subdiv` times, vertices scaled to the given
/// per-direction radius function (constant radius by default).
/// V = 10 * 4^subdiv + 2.
MeshPtr icosphere_mesh(int subdiv, double radius = 1.0);

/// Icosphere with a smooth radial bump: r(v) = radius * (1 + amp *
/// exp(-angle(v, axis)^2 / (2 sigma^2))), axis = normalize((1,1,1)).
MeshPtr bumped_sphere_mesh(int subdiv, double radius, double amp,
                           double sigma);

/// Stereographic chart of a closed genus-0 mesh, pole at vertex `pole`,
/// gauge vertices `p0` -> 0 and `p1` -> 1.
EmbeddingPtr sphere_chart(MeshPtr mesh, int pole = 0, int p0 = 3, int p1 = 4);

/// Open cylindrical patch (radius 1, height 2) wrapping `wrap` of the full
/// turn; (nu+1) x (nv+1) grid, disk topology, outward orientation.
MeshPtr cylinder_patch_mesh(int nu, int nv, double wrap = 2.0 / 3.0);

/// f(z) = (z + k conj(z)) / (1 + k): fixes 0 and 1, constant coefficient k.
VertexField<cplx> affine_map_values(const PlanarEmbedding& chart, double k);

/// f(z) = z exp(i eps (1 - |z|^2)): disk self-map fixing 0, 1 and the whole
/// boundary circle; coefficient -i eps z^2 / (1 - i eps |z|^2).
VertexField<cplx> twist_map_values(const PlanarEmbedding& chart, double eps);
VertexField<cplx> twist_map_bc(const PlanarEmbedding& chart, double eps);

/// Chart gauge (pole, ->0, ->1) aligned to the bump axis (1,1,1): pole at the
/// vertex nearest the antipode so the bump sits near the chart origin, where
/// vertex areas are small and kernel sums are well resolved. The far field of
/// such a chart is then bump-free and contributes no curvature residual.
std::array<int, 3> bump_gauge(const TriMesh& mesh);

}  // namespace bhflow::fixtures
