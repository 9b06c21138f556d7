#include "bhflow/beltrami.hpp"

#include <cmath>
#include <sstream>

#include "bhflow/locate.hpp"

namespace bhflow {

BeltramiCoefficient BeltramiCoefficient::from_values(VertexField<cplx> values) {
  BeltramiCoefficient bc;
  bc.values = std::move(values);
  std::vector<int> offending;
  for (size_t v = 0; v < bc.values.size(); ++v) {
    const double a = std::abs(bc.values[v]);
    if (a >= 1.0) offending.push_back(static_cast<int>(v));
    bc.sup_norm = std::max(bc.sup_norm, a);
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << offending.size() << " vertex(es) with |mu| >= 1, first: "
       << offending.front() << " (|mu| = "
       << std::abs(bc.values[offending.front()]) << ")";
    fail(ErrorCode::NotAdmissible, os.str());
  }
  return bc;
}

DiscreteMap identity_map(EmbeddingPtr embed) {
  DiscreteMap m;
  m.values = embed->coords;
  m.source = embed;
  m.target = std::move(embed);
  return m;
}

BeltramiCoefficient compute_bc(const DiscreteMap& map) {
  const auto& embed = *map.source;
  const auto d = wirtinger_derivatives(embed, map.values);
  const int nv = embed.vertex_count();

  VertexField<cplx> mu(nv, cplx(0, 0));
  std::vector<int> degenerate;
  for (int v = 0; v < nv; ++v) {
    if (embed.skip_vertex(v)) continue;
    if (std::abs(2.0 * d.fz[v]) < 1e-12) {
      degenerate.push_back(v);
      continue;
    }
    mu[v] = d.fzbar[v] / d.fz[v];
  }
  if (!degenerate.empty()) {
    std::ostringstream os;
    os << degenerate.size() << " vertex(es) with degenerate Jacobian, first: "
       << degenerate.front();
    fail(ErrorCode::DegenerateJacobian, os.str());
  }
  return BeltramiCoefficient::from_values(std::move(mu));
}

VertexField<double> dilation(const BeltramiCoefficient& mu) {
  VertexField<double> k(mu.values.size());
  for (size_t v = 0; v < mu.values.size(); ++v) {
    const double a = std::abs(mu.values[v]);
    k[v] = (1.0 + a) / (1.0 - a);
  }
  return k;
}

BeltramiCoefficient project_admissible(VertexField<cplx> mu, double delta,
                                       bool* changed) {
  if (delta <= 0.0 || delta >= 1.0)
    fail(ErrorCode::Validation, "admissibility margin must lie in (0, 1)");
  const double cap = 1.0 - delta;
  bool any = false;
  for (auto& m : mu) {
    const double a = std::abs(m);
    if (a > cap) {
      m *= cap / a;
      any = true;
    }
  }
  if (changed) *changed = any;
  return BeltramiCoefficient::from_values(std::move(mu));
}

BeltramiCoefficient compose_bc(const BeltramiCoefficient& mu,
                               const BeltramiCoefficient& sigma,
                               const DiscreteMap& f_mu) {
  const auto& source = *f_mu.source;
  const auto& target = *f_mu.target;
  const int nv = source.vertex_count();
  if (mu.values.size() != static_cast<size_t>(nv) ||
      sigma.values.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "coefficient size mismatch");

  // Transition field on source vertices.
  const auto d = wirtinger_derivatives(source, f_mu.values);
  VertexField<cplx> g(nv, cplx(0, 0));
  std::vector<int> degenerate;
  for (int v = 0; v < nv; ++v) {
    if (source.skip_vertex(v)) continue;
    const cplx p = d.fz[v];
    if (std::abs(2.0 * p) < 1e-12) {
      degenerate.push_back(v);
      continue;
    }
    const cplx num = sigma.values[v] - mu.values[v];
    const cplx den = 1.0 - std::conj(mu.values[v]) * sigma.values[v];
    g[v] = num / den * (p / std::conj(p));
  }
  if (!degenerate.empty())
    fail(ErrorCode::DegenerateJacobian,
         std::to_string(degenerate.size()) +
             " vertex(es) with degenerate map Jacobian, first: " +
             std::to_string(degenerate.front()));

  // Pull back through the inverse map: locate each target vertex in the
  // image triangulation of f_mu and interpolate the transition field.
  const int skip = source.domain == DomainKind::Sphere ? source.pole_vertex
                                                       : -1;
  PointLocator locator(source.mesh, f_mu.values, skip);

  VertexField<cplx> tau(target.vertex_count(), cplx(0, 0));
  for (int w = 0; w < target.vertex_count(); ++w) {
    if (target.skip_vertex(w)) continue;
    const PointLocation loc = locator.locate_clamped(target.coords[w]);
    tau[w] = locator.interpolate<cplx>(loc, g);
  }
  return BeltramiCoefficient::from_values(std::move(tau));
}

}  // namespace bhflow
