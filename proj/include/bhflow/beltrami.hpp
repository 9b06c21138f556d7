#pragma once

#include "bhflow/embedding.hpp"
#include "bhflow/operators.hpp"

namespace bhflow {

/// Vertex-sampled Beltrami coefficient, |values| < 1 (0 at a sphere pole).
struct BeltramiCoefficient {
  VertexField<cplx> values;
  double sup_norm = 0.0;

  static BeltramiCoefficient from_values(VertexField<cplx> values);
};

/// Vertex map between two parameter domains sharing the source connectivity.
/// values[v] is the target-chart image of source vertex v.
struct DiscreteMap {
  EmbeddingPtr source;
  EmbeddingPtr target;
  VertexField<cplx> values;

  int vertex_count() const { return source->vertex_count(); }
};

DiscreteMap identity_map(EmbeddingPtr embed);

/// mu = f_zbar / f_z per vertex from one-ring averaged derivatives.
/// DegenerateJacobian if |2 f_z| < 1e-12 anywhere, NotAdmissible if any
/// |mu| >= 1.
BeltramiCoefficient compute_bc(const DiscreteMap& map);

/// Quasiconformal dilation (1 + |mu|) / (1 - |mu|) per vertex.
VertexField<double> dilation(const BeltramiCoefficient& mu);

/// Radial clamp of |mu| onto <= 1 - delta. Returns the clamped coefficient
/// and reports via `changed` (optional) whether any vertex moved.
BeltramiCoefficient project_admissible(VertexField<cplx> mu, double delta,
                                       bool* changed = nullptr);

/// Coefficient of f_sigma after precomposition with the inverse of f_mu,
/// sampled on the target chart vertices of f_mu:
///   tau = ((sigma - mu) / (1 - conj(mu) sigma) * p / conj(p)) o (f_mu)^-1,
/// p = (f_mu)_z. Inverse lookups outside the image snap to its boundary.
BeltramiCoefficient compose_bc(const BeltramiCoefficient& mu,
                               const BeltramiCoefficient& sigma,
                               const DiscreteMap& f_mu);

}  // namespace bhflow
