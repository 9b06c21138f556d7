#include "bhflow/flow.hpp"

#include <cmath>

namespace bhflow {

namespace {

constexpr double kSingularTol = 1e-12;

struct FlowState {
  const DiscreteMap* map;
  DomainKind domain;
  VertexField<cplx> fz2;
  VertexField<double> area;
  std::vector<char> skip;

  FlowState(const DiscreteMap& f, DomainKind dom) : map(&f), domain(dom) {
    const auto& src = *f.source;
    const int nv = src.vertex_count();
    if (f.values.size() != static_cast<size_t>(nv))
      fail(ErrorCode::Validation, "map values size mismatch");
    const auto d = wirtinger_derivatives(src, f.values);
    fz2.resize(nv);
    skip.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
      fz2[v] = d.fz[v] * d.fz[v];
      if (src.skip_vertex(v)) skip[v] = 1;
    }
    area = vertex_area(src);
  }
};

KernelCoefficients coefficients_from_parts(cplx fz2, cplx fv, cplx fw,
                                           DomainKind domain) {
  KernelCoefficients out;
  const cplx dc = fv * (fv - 1.0) * (fv - fw);
  if (std::abs(fv) < kSingularTol || std::abs(fv - 1.0) < kSingularTol ||
      std::abs(fv - fw) < kSingularTol)
    return out;
  if (domain == DomainKind::Disk) {
    const cplx fc = std::conj(fv);
    const cplx dd = fc * (1.0 - fc) * (1.0 - fc * fw);
    if (std::abs(1.0 - fc * fw) < kSingularTol) return out;
    out.d = std::conj(fz2) / dd;
  }
  out.c = fz2 / dc;
  return out;
}

}  // namespace

KernelCoefficients kernel_coefficients(cplx fz_at_z, cplx f_at_z, cplx f_at_w,
                                       DomainKind domain) {
  return coefficients_from_parts(fz_at_z * fz_at_z, f_at_z, f_at_w, domain);
}

BhfKernelTerms kernel_row(const DiscreteMap& f, std::span<const cplx> nu,
                          int w, DomainKind domain, bool with_decomposition) {
  const FlowState st(f, domain);
  const int nv = f.vertex_count();
  if (nu.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "nu size mismatch");
  if (w < 0 || w >= nv) fail(ErrorCode::Validation, "row vertex out of range");

  BhfKernelTerms row;
  row.k.assign(nv, cplx(0, 0));
  if (with_decomposition) {
    row.g1.assign(nv, 0.0);
    row.g2.assign(nv, 0.0);
    row.g3.assign(nv, 0.0);
    row.g4.assign(nv, 0.0);
  }
  if (st.skip[w]) return row;

  const cplx fw = f.values[w];
  const cplx pref = kernel_prefactor(fw);
  for (int z = 0; z < nv; ++z) {
    if (st.skip[z]) continue;
    const auto kc =
        coefficients_from_parts(st.fz2[z], f.values[z], fw, domain);
    const cplx c = pref * kc.c;
    const cplx d = pref * kc.d;
    row.k[z] = c * nu[z] + d * std::conj(nu[z]);
    if (with_decomposition) {
      row.g1[z] = (c + d).real();
      row.g2[z] = -(c - d).imag();
      row.g3[z] = (c + d).imag();
      row.g4[z] = (c - d).real();
    }
  }
  return row;
}

VertexField<cplx> variation(const DiscreteMap& f, std::span<const cplx> nu,
                            DomainKind domain) {
  const FlowState st(f, domain);
  const int nv = f.vertex_count();
  if (nu.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "nu size mismatch");

  VertexField<cplx> out(nv, cplx(0, 0));

#pragma omp parallel
  {
    std::vector<cplx> scratch(nv);
#pragma omp for schedule(static)
    for (int w = 0; w < nv; ++w) {
      if (st.skip[w]) continue;
      const cplx fw = f.values[w];
      const cplx pref = kernel_prefactor(fw);
      if (std::abs(pref) == 0.0) continue;
      for (int z = 0; z < nv; ++z) {
        if (st.skip[z]) {
          scratch[z] = cplx(0, 0);
          continue;
        }
        const auto kc =
            coefficients_from_parts(st.fz2[z], f.values[z], fw, domain);
        scratch[z] =
            (kc.c * nu[z] + kc.d * std::conj(nu[z])) * st.area[z];
      }
      out[w] = pref * pairwise_sum(std::span<const cplx>(scratch));
    }
  }
  return out;
}

VertexField<cplx> variation(const DiscreteMap& f, std::span<const cplx> nu) {
  return variation(f, nu, f.source->domain);
}

VertexField<cplx> descent_pairing(const DiscreteMap& f,
                                  std::span<const cplx> q, DomainKind domain) {
  const FlowState st(f, domain);
  const int nv = f.vertex_count();
  if (q.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "weight size mismatch");

  VertexField<cplx> out(nv, cplx(0, 0));

#pragma omp parallel
  {
    std::vector<cplx> scratch(nv);
#pragma omp for schedule(static)
    for (int z = 0; z < nv; ++z) {
      if (st.skip[z]) continue;
      const cplx fv = f.values[z];
      const cplx fz2 = st.fz2[z];
      for (int w = 0; w < nv; ++w) {
        if (st.skip[w]) {
          scratch[w] = cplx(0, 0);
          continue;
        }
        const cplx pref = kernel_prefactor(f.values[w]);
        const auto kc = coefficients_from_parts(fz2, fv, f.values[w], domain);
        const cplx c = pref * kc.c;
        const cplx d = pref * kc.d;
        scratch[w] =
            (q[w] * std::conj(c) + std::conj(q[w]) * d) * st.area[w];
      }
      out[z] = pairwise_sum(std::span<const cplx>(scratch));
    }
  }
  return out;
}

DiscreteMap reconstruct(const BeltramiCoefficient& mu,
                        const FlowSchedule& schedule, EmbeddingPtr source,
                        EmbeddingPtr target,
                        std::optional<DomainKind> kernel_domain) {
  const int n = schedule.n_steps;
  if (n < 1) fail(ErrorCode::Validation, "flow needs at least one step");
  const int nv = source->vertex_count();
  if (mu.values.size() != static_cast<size_t>(nv))
    fail(ErrorCode::Validation, "mu size mismatch");

  const DomainKind domain = kernel_domain.value_or(source->domain);

  DiscreteMap cur;
  cur.source = source;
  cur.target = std::move(target);
  cur.values = source->coords;

  VertexField<cplx> nu(nv);
  for (int v = 0; v < nv; ++v)
    nu[v] = mu.values[v] / static_cast<double>(n);

  // Gauge vertices never move: the prefactor vanishes at 0 and 1.
  std::vector<int> gauge;
  for (int v = 0; v < nv; ++v) {
    if (source->skip_vertex(v)) continue;
    if (std::abs(cur.values[v]) < 1e-15 ||
        std::abs(cur.values[v] - 1.0) < 1e-15)
      gauge.push_back(v);
  }

  for (int k = 0; k < n; ++k) {
    const auto v = variation(cur, nu, domain);
    for (int i = 0; i < nv; ++i) {
      if (source->skip_vertex(i)) continue;
      cur.values[i] += v[i];
      if (domain == DomainKind::Disk) {
        const double r = std::abs(cur.values[i]);
        if (r > 1.0) cur.values[i] /= r;
      }
    }
    for (int g : gauge) {
      const cplx ref = std::abs(source->coords[g]) < 0.5 ? cplx(0, 0)
                                                         : cplx(1, 0);
      if (std::abs(cur.values[g] - ref) > 1e-8)
        fail(ErrorCode::StepFailed,
             "gauge vertex " + std::to_string(g) + " drifted at step " +
                 std::to_string(k + 1));
    }
    const auto flips = flipped_faces(*source, cur.values);
    if (!flips.empty())
      fail(ErrorCode::FoldDetected,
           std::to_string(flips.size()) + " face(s) folded at step " +
               std::to_string(k + 1) + " of " + std::to_string(n) +
               ", first: " + std::to_string(flips.front()));
  }
  return cur;
}

}  // namespace bhflow
