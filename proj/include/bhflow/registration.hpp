#pragma once

#include <array>

#include "bhflow/curvature.hpp"
#include "bhflow/flow.hpp"

namespace bhflow {

struct EnergyParams {
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 2.0;
  double dt = 0.1;
  double epsilon = 1e-6;
  int max_iters = 500;
  double delta_margin = 0.02;
  /// Step halvings tried before giving up on an iteration.
  int max_halvings = 8;
  /// Re-synchronize the map with a full reconstruction every this many
  /// accepted iterations (coefficient-driven runs only); 0 disables.
  int resync_every = 25;
};

struct EnergyBreakdown {
  double total = 0.0;
  std::array<double, 3> components{0.0, 0.0, 0.0};
};

enum class StopReason { Converged, MaxIterations, StepFailed };
const char* stop_reason_name(StopReason reason);

struct TraceRow {
  int iteration = 0;
  double total = 0.0;
  std::array<double, 3> components{0.0, 0.0, 0.0};
  double dt = 0.0;
  double sup_mu = 0.0;
};

struct RegistrationRun {
  DiscreteMap map;
  BeltramiCoefficient mu;
  std::vector<TraceRow> trace;
  StopReason stop = StopReason::Converged;
  int iterations = 0;
  /// Landmark runs: largest distance any pinned vertex ever showed from its
  /// pin across accepted iterates (exactly 0 when pins are honored).
  double max_landmark_deviation = 0.0;
};

/// ---- intensity (feature) matching -------------------------------------

/// E = int (F1 - F2 o f)^2 + |mu|^2 over the source chart; components are
/// (data term, coefficient term, 0).
EnergyBreakdown feature_energy(const DiscreteMap& f,
                               const BeltramiCoefficient& mu,
                               std::span<const double> f1,
                               std::span<const double> f2);

/// Descent direction nu with dE/dt along nu equal to -<nu, direction>:
/// pairing of 2 (F1 - F2 o f) grad F2 o f through the kernel, minus 2 mu.
VertexField<cplx> feature_descent_direction(const DiscreteMap& f,
                                            const BeltramiCoefficient& mu,
                                            std::span<const double> f1,
                                            std::span<const double> f2);

/// One backtracking descent iteration on an existing run state. Returns true
/// if a step was accepted, false at an epsilon-stationary point; StepFailed
/// if the energy cannot be decreased and the state is not stationary.
bool feature_descent_step(RegistrationRun& run, std::span<const double> f1,
                          std::span<const double> f2,
                          const EnergyParams& params,
                          const FlowSchedule& schedule);

RegistrationRun register_features(EmbeddingPtr source, EmbeddingPtr target,
                                  VertexField<double> f1,
                                  VertexField<double> f2,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule);

/// ---- landmark matching -------------------------------------------------

struct LandmarkCurve {
  std::vector<int> vertices;  // source vertex ids along the curve
  std::vector<cplx> targets;  // target chart polyline, same length
};

struct LandmarkSet {
  std::vector<LandmarkCurve> curves;
  /// Mask radius in the parameter chart; non-positive means 3x the mean
  /// parameter edge length.
  double mask_radius = -1.0;
};

/// Pin positions per landmark vertex: each source vertex goes to the point at
/// its source arc-length fraction along the matching target polyline.
std::vector<std::pair<int, cplx>> landmark_pins(const PlanarEmbedding& source,
                                                const LandmarkSet& landmarks);

/// C1 ramp in chart distance to the landmark vertices: 0 within half the
/// mask radius, 1 beyond the radius. Pinned vertices always read exactly 0.
VertexField<double> landmark_mask(const PlanarEmbedding& source,
                                  const LandmarkSet& landmarks);

/// Constrained harmonic start: boundary and gauge vertices keep their chart
/// positions, landmark vertices sit on their pins, interior is the
/// convex-combination solve. FoldDetected if the result is not injective.
DiscreteMap landmark_initial_map(EmbeddingPtr source,
                                 const LandmarkSet& landmarks);

/// Curve-preserving harmonic-coefficient descent: coefficients shrink toward
/// conformal away from the landmarks while pinned vertices never move.
RegistrationRun register_landmarks(EmbeddingPtr source,
                                   const LandmarkSet& landmarks,
                                   const EnergyParams& params,
                                   const FlowSchedule& schedule);

/// ---- curvature (geometric) matching -------------------------------------

/// E = alpha int |mu|^2 + beta int (H1 - H2 o f)^2 + gamma int (K1 - K2 o f)^2;
/// components are the three weighted terms in that order.
EnergyBreakdown shape_energy(const DiscreteMap& f,
                             const BeltramiCoefficient& mu,
                             std::span<const double> h1,
                             std::span<const double> k1,
                             std::span<const double> h2,
                             std::span<const double> k2,
                             const EnergyParams& params);

VertexField<cplx> geometry_descent_direction(const DiscreteMap& f,
                                             const BeltramiCoefficient& mu,
                                             std::span<const double> h1,
                                             std::span<const double> k1,
                                             std::span<const double> h2,
                                             std::span<const double> k2,
                                             const EnergyParams& params);

RegistrationRun register_geometry(EmbeddingPtr source, EmbeddingPtr target,
                                  VertexField<double> h1,
                                  VertexField<double> k1,
                                  VertexField<double> h2,
                                  VertexField<double> k2,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule);

/// Convenience overload computing both curvature pairs from the 3D meshes.
RegistrationRun register_geometry(EmbeddingPtr source, EmbeddingPtr target,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule);

}  // namespace bhflow
