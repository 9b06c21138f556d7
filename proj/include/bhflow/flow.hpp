#pragma once

#include <optional>

#include "bhflow/beltrami.hpp"

namespace bhflow {

struct FlowSchedule {
  int n_steps = 20;
};

/// K(z, w) = prefactor(f(w)) * (c nu(z) + d conj(nu(z))) with
///   c = f_z(z)^2 / (f(z) (f(z) - 1) (f(z) - f(w)))
///   d = conj(f_z(z))^2 / (conj(f(z)) (1 - conj(f(z))) (1 - conj(f(z)) f(w)))
/// d only contributes on disk domains. Entries with a near-singular
/// denominator are zeroed.
struct KernelCoefficients {
  cplx c{0, 0};
  cplx d{0, 0};
};

KernelCoefficients kernel_coefficients(cplx fz_at_z, cplx f_at_z, cplx f_at_w,
                                       DomainKind domain);

inline cplx kernel_prefactor(cplx f_at_w) {
  constexpr double pi = 3.14159265358979323846;
  return -f_at_w * (f_at_w - 1.0) / pi;
}

/// One kernel row: entries K(z_v, w) for all source vertices v, plus the real
/// 2x2 decomposition [[g1, g2], [g3, g4]] acting on (nu1, nu2) when requested.
struct BhfKernelTerms {
  VertexField<cplx> k;
  VertexField<double> g1, g2, g3, g4;
};

BhfKernelTerms kernel_row(const DiscreteMap& f, std::span<const cplx> nu,
                          int w, DomainKind domain,
                          bool with_decomposition = false);

/// First variation of the flow at map f in coefficient direction nu:
/// V(w) = sum_z K(z, w) area(z). Zero at gauge images (f(w) in {0, 1}) and at
/// the sphere pole.
VertexField<cplx> variation(const DiscreteMap& f, std::span<const cplx> nu,
                            DomainKind domain);
VertexField<cplx> variation(const DiscreteMap& f, std::span<const cplx> nu);

/// Adjoint pairing used by the descent steps: given per-vertex weights
/// q(w) = A(w) + i B(w), returns per-source-vertex
///   sum_w (q(w) conj(C(z, w)) + conj(q(w)) D(z, w)) area(w)
/// where C, D are the prefactored kernel coefficient fields. Row z equals the
/// complex form of (int (A g1 + B g3) dw, int (A g2 + B g4) dw).
VertexField<cplx> descent_pairing(const DiscreteMap& f,
                                  std::span<const cplx> q, DomainKind domain);

/// Flow from the identity to the map of `mu` in n_steps composition-free
/// updates: f_{k+1} = f_k + V(f_k, mu / N) along mu_k = k mu / N.
/// Disk iterates are snapped radially onto the closed disk each step;
/// FoldDetected if any face image inverts.
DiscreteMap reconstruct(const BeltramiCoefficient& mu,
                        const FlowSchedule& schedule, EmbeddingPtr source,
                        EmbeddingPtr target,
                        std::optional<DomainKind> kernel_domain = {});

}  // namespace bhflow
