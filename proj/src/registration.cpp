#include "bhflow/registration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "bhflow/embed.hpp"
#include "bhflow/locate.hpp"

namespace bhflow {

namespace {

void check_params(const EnergyParams& p) {
  if (p.dt <= 0.0) fail(ErrorCode::Validation, "dt must be positive");
  if (p.epsilon <= 0.0) fail(ErrorCode::Validation, "epsilon must be positive");
  if (p.max_iters < 1) fail(ErrorCode::Validation, "max_iters must be >= 1");
  if (p.delta_margin <= 0.0 || p.delta_margin >= 1.0)
    fail(ErrorCode::Validation, "delta_margin must lie in (0, 1)");
  if (p.max_halvings < 0 || p.resync_every < 0)
    fail(ErrorCode::Validation, "halvings and resync period must be >= 0");
}

void check_field(const PlanarEmbedding& embed, size_t n, const char* what) {
  if (n != static_cast<size_t>(embed.vertex_count()))
    fail(ErrorCode::Validation, std::string(what) + " size mismatch");
}

/// Clamped interpolation of target-chart fields at map image points.
struct TargetSampler {
  PointLocator locator;

  explicit TargetSampler(const PlanarEmbedding& target) : locator(target) {}

  double value(std::span<const double> field, cplx at) const {
    return locator.interpolate<double>(locator.locate_clamped(at), field);
  }
  cplx value(std::span<const cplx> field, cplx at) const {
    return locator.interpolate<cplx>(locator.locate_clamped(at), field);
  }
};

double quad_term(std::span<const double> residual,
                 std::span<const double> area) {
  std::vector<double> cells(residual.size());
  for (size_t i = 0; i < residual.size(); ++i)
    cells[i] = residual[i] * residual[i] * area[i];
  return pairwise_sum(std::span<const double>(cells));
}

double mu_quad_term(std::span<const cplx> mu, std::span<const double> area) {
  std::vector<double> cells(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) cells[i] = std::norm(mu[i]) * area[i];
  return pairwise_sum(std::span<const double>(cells));
}

double sup_abs(std::span<const cplx> values) {
  double s = 0.0;
  for (const cplx& v : values) s = std::max(s, std::abs(v));
  return s;
}

/// Shared backtracking loop for coefficient-driven descent (intensity and
/// curvature matching). Holds borrowed problem data; keep it alive only for
/// the duration of a run.
struct MuDescentEngine {
  EmbeddingPtr source;
  EmbeddingPtr target;
  const EnergyParams& params;
  const FlowSchedule& schedule;
  std::function<VertexField<cplx>(const DiscreteMap&,
                                  std::span<const cplx>)> direction;
  std::function<EnergyBreakdown(std::span<const cplx>,
                                std::span<const cplx>)> energy;

  DomainKind domain() const { return source->domain; }

  void init(RegistrationRun& run) const {
    run.map.source = source;
    run.map.target = target;
    run.map.values = source->coords;
    run.mu.values.assign(source->vertex_count(), cplx(0, 0));
    run.mu.sup_norm = 0.0;
    const EnergyBreakdown e = energy(run.map.values, run.mu.values);
    run.trace.push_back({0, e.total, e.components, 0.0, 0.0});
    run.iterations = 0;
    run.stop = StopReason::MaxIterations;
  }

  /// One accepted iteration. False means epsilon-stationary (Converged);
  /// throws StepFailed when no acceptable candidate exists.
  bool step(RegistrationRun& run) const {
    const int nv = source->vertex_count();
    const double e_prev = run.trace.back().total;

    const VertexField<cplx> dir = direction(run.map, run.mu.values);
    const VertexField<cplx> v_dir = variation(run.map, dir, domain());

    double best_gap = std::numeric_limits<double>::max();
    for (int j = 0; j <= params.max_halvings; ++j) {
      const double dt = params.dt / static_cast<double>(1 << j);

      VertexField<cplx> mu_raw(nv);
      for (int v = 0; v < nv; ++v)
        mu_raw[v] = run.mu.values[v] + dt * dir[v];
      bool clipped = false;
      BeltramiCoefficient mu_cand =
          project_admissible(std::move(mu_raw), params.delta_margin, &clipped);

      VertexField<cplx> cand = run.map.values;
      if (!clipped) {
        for (int v = 0; v < nv; ++v) cand[v] += dt * v_dir[v];
      } else {
        VertexField<cplx> delta(nv);
        for (int v = 0; v < nv; ++v)
          delta[v] = mu_cand.values[v] - run.mu.values[v];
        const VertexField<cplx> v_delta = variation(run.map, delta, domain());
        for (int v = 0; v < nv; ++v) cand[v] += v_delta[v];
      }
      if (domain() == DomainKind::Disk)
        for (cplx& z : cand) {
          const double r = std::abs(z);
          if (r > 1.0) z /= r;
        }

      if (!flipped_faces(*source, cand).empty()) continue;

      const EnergyBreakdown ec = energy(cand, mu_cand.values);
      if (ec.total <= e_prev) {
        run.map.values = std::move(cand);
        run.mu = std::move(mu_cand);
        run.iterations += 1;
        EnergyBreakdown accepted = ec;

        if (params.resync_every > 0 &&
            run.iterations % params.resync_every == 0)
          try_resync(run, &accepted);

        run.trace.push_back({run.iterations, accepted.total,
                             accepted.components, dt, run.mu.sup_norm});
        return true;
      }
      best_gap = std::min(best_gap, ec.total - e_prev);
    }

    if (best_gap < params.epsilon) return false;
    fail(ErrorCode::StepFailed,
         "no step decreased the energy (smallest increase " +
             std::to_string(best_gap) + ")");
  }

  void try_resync(RegistrationRun& run, EnergyBreakdown* current) const {
    try {
      DiscreteMap sync =
          reconstruct(run.mu, schedule, source, target, domain());
      const EnergyBreakdown es = energy(sync.values, run.mu.values);
      if (es.total <= current->total) {
        run.map.values = std::move(sync.values);
        *current = es;
      }
    } catch (const Error&) {
      // Keep the incrementally updated map when the full flow misbehaves.
    }
  }
};

void run_descent_loop(const MuDescentEngine& engine, RegistrationRun& run) {
  engine.init(run);
  while (run.iterations < engine.params.max_iters) {
    bool accepted = false;
    try {
      accepted = engine.step(run);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StepFailed) {
        run.stop = StopReason::StepFailed;
        return;
      }
      throw;
    }
    if (!accepted) {
      run.stop = StopReason::Converged;
      return;
    }
    const size_t n = run.trace.size();
    const double de = run.trace[n - 2].total - run.trace[n - 1].total;
    if (std::abs(de) < engine.params.epsilon) {
      run.stop = StopReason::Converged;
      return;
    }
  }
  run.stop = StopReason::MaxIterations;
}

}  // namespace

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::StepFailed: return "step_failed";
  }
  return "unknown";
}

/// ---- intensity (feature) matching ---------------------------------------

EnergyBreakdown feature_energy(const DiscreteMap& f,
                               const BeltramiCoefficient& mu,
                               std::span<const double> f1,
                               std::span<const double> f2) {
  const auto& source = *f.source;
  check_field(source, f1.size(), "feature field F1");
  check_field(*f.target, f2.size(), "feature field F2");
  check_field(source, mu.values.size(), "mu");
  const auto area = vertex_area(source);
  const TargetSampler sampler(*f.target);

  const int nv = source.vertex_count();
  std::vector<double> residual(nv, 0.0);
  for (int w = 0; w < nv; ++w) {
    if (source.skip_vertex(w)) continue;
    residual[w] = f1[w] - sampler.value(f2, f.values[w]);
  }
  EnergyBreakdown e;
  e.components[0] = quad_term(residual, area);
  e.components[1] = mu_quad_term(mu.values, area);
  e.total = e.components[0] + e.components[1];
  return e;
}

VertexField<cplx> feature_descent_direction(const DiscreteMap& f,
                                            const BeltramiCoefficient& mu,
                                            std::span<const double> f1,
                                            std::span<const double> f2) {
  const auto& source = *f.source;
  const auto& target = *f.target;
  check_field(source, f1.size(), "feature field F1");
  check_field(target, f2.size(), "feature field F2");
  check_field(source, mu.values.size(), "mu");

  const auto grad_f2 = vertex_derivatives(target, f2);
  const TargetSampler sampler(target);

  const int nv = source.vertex_count();
  VertexField<cplx> q(nv, cplx(0, 0));
  for (int w = 0; w < nv; ++w) {
    if (source.skip_vertex(w)) continue;
    const cplx fw = f.values[w];
    const double r = f1[w] - sampler.value(f2, fw);
    q[w] = 2.0 * r * sampler.value(std::span<const cplx>(grad_f2), fw);
  }

  VertexField<cplx> dir = descent_pairing(f, q, source.domain);
  for (int v = 0; v < nv; ++v) dir[v] -= 2.0 * mu.values[v];
  return dir;
}

namespace {

MuDescentEngine make_feature_engine(EmbeddingPtr source, EmbeddingPtr target,
                                    std::span<const double> f1,
                                    std::span<const double> f2,
                                    const EnergyParams& params,
                                    const FlowSchedule& schedule) {
  check_params(params);
  check_field(*source, f1.size(), "feature field F1");
  check_field(*target, f2.size(), "feature field F2");

  MuDescentEngine engine{source, target, params, schedule, {}, {}};
  engine.direction = [source, target, f1, f2](const DiscreteMap& f,
                                              std::span<const cplx> mu) {
    BeltramiCoefficient bc;
    bc.values.assign(mu.begin(), mu.end());
    bc.sup_norm = sup_abs(mu);
    return feature_descent_direction(f, bc, f1, f2);
  };
  engine.energy = [source, target, f1, f2](std::span<const cplx> map_values,
                                           std::span<const cplx> mu) {
    DiscreteMap f;
    f.source = source;
    f.target = target;
    f.values.assign(map_values.begin(), map_values.end());
    BeltramiCoefficient bc;
    bc.values.assign(mu.begin(), mu.end());
    bc.sup_norm = sup_abs(mu);
    return feature_energy(f, bc, f1, f2);
  };
  return engine;
}

}  // namespace

bool feature_descent_step(RegistrationRun& run, std::span<const double> f1,
                          std::span<const double> f2,
                          const EnergyParams& params,
                          const FlowSchedule& schedule) {
  if (!run.map.source)
    fail(ErrorCode::Validation, "run has no initialized map");
  const MuDescentEngine engine = make_feature_engine(
      run.map.source, run.map.target, f1, f2, params, schedule);
  if (run.trace.empty()) engine.init(run);
  return engine.step(run);
}

RegistrationRun register_features(EmbeddingPtr source, EmbeddingPtr target,
                                  VertexField<double> f1,
                                  VertexField<double> f2,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule) {
  const MuDescentEngine engine =
      make_feature_engine(source, target, f1, f2, params, schedule);
  RegistrationRun run;
  run_descent_loop(engine, run);
  return run;
}

/// ---- landmark matching ---------------------------------------------------

std::vector<std::pair<int, cplx>> landmark_pins(const PlanarEmbedding& source,
                                                const LandmarkSet& landmarks) {
  const int nv = source.vertex_count();
  std::vector<std::pair<int, cplx>> pins;
  std::unordered_map<int, size_t> seen;

  for (size_t c = 0; c < landmarks.curves.size(); ++c) {
    const auto& curve = landmarks.curves[c];
    const size_t n = curve.vertices.size();
    if (n == 0)
      fail(ErrorCode::Validation, "landmark curve " + std::to_string(c) +
                                      " is empty");
    if (curve.targets.size() != n)
      fail(ErrorCode::Validation,
           "landmark curve " + std::to_string(c) +
               " pairs " + std::to_string(n) + " vertices with " +
               std::to_string(curve.targets.size()) + " targets");
    for (size_t i = 0; i < n; ++i) {
      const int v = curve.vertices[i];
      if (v < 0 || v >= nv)
        fail(ErrorCode::Validation,
             "landmark vertex " + std::to_string(v) + " out of range");
      if (!seen.emplace(v, c).second)
        fail(ErrorCode::Validation,
             "vertex " + std::to_string(v) + " appears in two landmarks");
      if (std::abs(curve.targets[i]) > 1.0 + 1e-9)
        fail(ErrorCode::Validation,
             "landmark target for vertex " + std::to_string(v) +
                 " lies outside the unit disk");
    }

    if (n == 1) {
      pins.emplace_back(curve.vertices[0], curve.targets[0]);
      continue;
    }

    // Source arc-length fractions in the chart.
    std::vector<double> sfrac(n, 0.0);
    for (size_t i = 1; i < n; ++i)
      sfrac[i] = sfrac[i - 1] + std::abs(source.coords[curve.vertices[i]] -
                                         source.coords[curve.vertices[i - 1]]);
    if (sfrac.back() <= 0.0)
      fail(ErrorCode::InvalidPoints,
           "landmark curve " + std::to_string(c) + " has zero chart length");
    for (double& s : sfrac) s /= sfrac.back();

    // Target polyline cumulative lengths.
    std::vector<double> tlen(n, 0.0);
    for (size_t i = 1; i < n; ++i)
      tlen[i] = tlen[i - 1] + std::abs(curve.targets[i] - curve.targets[i - 1]);
    const double ttotal = tlen.back();

    for (size_t i = 0; i < n; ++i) {
      cplx pin;
      if (ttotal <= 0.0) {
        pin = curve.targets[0];
      } else {
        const double want = sfrac[i] * ttotal;
        size_t k = 1;
        while (k < n - 1 && tlen[k] < want) ++k;
        const double seg = tlen[k] - tlen[k - 1];
        const double t = seg > 0.0 ? (want - tlen[k - 1]) / seg : 0.0;
        pin = curve.targets[k - 1] +
              t * (curve.targets[k] - curve.targets[k - 1]);
      }
      pins.emplace_back(curve.vertices[i], pin);
    }
  }
  return pins;
}

VertexField<double> landmark_mask(const PlanarEmbedding& source,
                                  const LandmarkSet& landmarks) {
  const auto pins = landmark_pins(source, landmarks);
  double radius = landmarks.mask_radius;
  if (radius <= 0.0) radius = 3.0 * mean_edge_length(source);

  const int nv = source.vertex_count();
  VertexField<double> mask(nv, 1.0);
  for (int v = 0; v < nv; ++v) {
    // Distance to the landmark vertices themselves: pinned vertices must sit
    // at exactly 0 so the masked update never moves them.
    double d = std::numeric_limits<double>::max();
    for (const auto& [pv, pos] : pins) {
      (void)pos;
      d = std::min(d, std::abs(source.coords[v] - source.coords[pv]));
    }
    const double s = std::clamp((d - radius / 2.0) / (radius / 2.0), 0.0, 1.0);
    mask[v] = s * s * (3.0 - 2.0 * s);
  }
  return mask;
}

DiscreteMap landmark_initial_map(EmbeddingPtr source,
                                 const LandmarkSet& landmarks) {
  const auto& embed = *source;
  if (embed.domain != DomainKind::Disk)
    fail(ErrorCode::Validation, "landmark matching runs on disk charts");

  std::vector<std::pair<int, cplx>> pins;
  for (const auto& loop : embed.mesh->boundary_loops)
    for (int v : loop) pins.emplace_back(v, embed.coords[v]);
  for (int v = 0; v < embed.vertex_count(); ++v)
    if (!embed.mesh->is_boundary(v) &&
        (std::abs(embed.coords[v]) < 1e-12 ||
         std::abs(embed.coords[v] - 1.0) < 1e-12))
      pins.emplace_back(v, embed.coords[v]);

  // Landmark pins win over boundary and gauge placement.
  std::unordered_map<int, size_t> index;
  for (size_t i = 0; i < pins.size(); ++i) index[pins[i].first] = i;
  for (const auto& [v, pos] : landmark_pins(embed, landmarks)) {
    auto it = index.find(v);
    if (it == index.end()) {
      index[v] = pins.size();
      pins.emplace_back(v, pos);
    } else {
      pins[it->second].second = pos;
    }
  }

  std::vector<Eigen::Vector3d> positions(embed.vertex_count());
  for (int v = 0; v < embed.vertex_count(); ++v)
    positions[v] = Eigen::Vector3d(embed.coords[v].real(),
                                   embed.coords[v].imag(), 0.0);

  DiscreteMap map;
  map.source = source;
  map.target = source;
  map.values = solve_convex_combination(*embed.mesh, positions, pins);

  const auto flips = flipped_faces(embed, map.values);
  if (!flips.empty())
    fail(ErrorCode::FoldDetected,
         "landmark start map folds " + std::to_string(flips.size()) +
             " face(s), first: " + std::to_string(flips.front()));
  return map;
}

RegistrationRun register_landmarks(EmbeddingPtr source,
                                   const LandmarkSet& landmarks,
                                   const EnergyParams& params,
                                   const FlowSchedule& schedule) {
  (void)schedule;
  check_params(params);
  const auto& embed = *source;
  const int nv = embed.vertex_count();

  const auto pins = landmark_pins(embed, landmarks);
  const auto mask = landmark_mask(embed, landmarks);
  const auto area = vertex_area(embed);

  RegistrationRun run;
  run.map = landmark_initial_map(source, landmarks);
  run.mu = compute_bc(run.map);
  if (run.mu.sup_norm > 1.0 - params.delta_margin)
    fail(ErrorCode::NotAdmissible,
         "landmark start map has sup |mu| = " +
             std::to_string(run.mu.sup_norm) +
             ", beyond the admissibility margin");

  auto energy_of = [&](std::span<const cplx> mu) {
    return mu_quad_term(mu, area);
  };
  auto pin_deviation = [&](std::span<const cplx> values) {
    double d = 0.0;
    for (const auto& [v, pos] : pins) d = std::max(d, std::abs(values[v] - pos));
    return d;
  };

  double e_prev = energy_of(run.mu.values);
  run.trace.push_back({0, e_prev, {e_prev, 0.0, 0.0}, 0.0, run.mu.sup_norm});
  run.max_landmark_deviation = pin_deviation(run.map.values);
  run.stop = StopReason::MaxIterations;

  while (run.iterations < params.max_iters) {
    VertexField<cplx> dir(nv);
    for (int v = 0; v < nv; ++v) dir[v] = -2.0 * run.mu.values[v];
    const VertexField<cplx> vbar = variation(run.map, dir, embed.domain);

    bool accepted = false;
    double best_gap = std::numeric_limits<double>::max();
    for (int j = 0; j <= params.max_halvings; ++j) {
      const double dt = params.dt / static_cast<double>(1 << j);
      VertexField<cplx> cand = run.map.values;
      for (int v = 0; v < nv; ++v) {
        cand[v] += dt * mask[v] * vbar[v];
        const double r = std::abs(cand[v]);
        if (r > 1.0) cand[v] /= r;
      }
      if (!flipped_faces(embed, cand).empty()) continue;

      DiscreteMap trial;
      trial.source = source;
      trial.target = run.map.target;
      trial.values = std::move(cand);
      BeltramiCoefficient mu_cand;
      try {
        mu_cand = compute_bc(trial);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NotAdmissible ||
            e.code() == ErrorCode::DegenerateJacobian)
          continue;
        throw;
      }
      if (mu_cand.sup_norm > 1.0 - params.delta_margin) continue;

      const double ec = energy_of(mu_cand.values);
      if (ec <= e_prev) {
        run.map.values = std::move(trial.values);
        run.mu = std::move(mu_cand);
        run.iterations += 1;
        run.max_landmark_deviation =
            std::max(run.max_landmark_deviation,
                     pin_deviation(run.map.values));
        run.trace.push_back({run.iterations, ec, {ec, 0.0, 0.0}, dt,
                             run.mu.sup_norm});
        const double de = e_prev - ec;
        e_prev = ec;
        accepted = true;
        if (std::abs(de) < params.epsilon) {
          run.stop = StopReason::Converged;
          return run;
        }
        break;
      }
      best_gap = std::min(best_gap, ec - e_prev);
    }

    if (!accepted) {
      run.stop = best_gap < params.epsilon ? StopReason::Converged
                                           : StopReason::StepFailed;
      return run;
    }
  }
  return run;
}

/// ---- curvature (geometric) matching --------------------------------------

EnergyBreakdown shape_energy(const DiscreteMap& f,
                             const BeltramiCoefficient& mu,
                             std::span<const double> h1,
                             std::span<const double> k1,
                             std::span<const double> h2,
                             std::span<const double> k2,
                             const EnergyParams& params) {
  const auto& source = *f.source;
  check_field(source, h1.size(), "H1");
  check_field(source, k1.size(), "K1");
  check_field(*f.target, h2.size(), "H2");
  check_field(*f.target, k2.size(), "K2");
  check_field(source, mu.values.size(), "mu");

  const auto area = vertex_area(source);
  const TargetSampler sampler(*f.target);
  const int nv = source.vertex_count();

  std::vector<double> rh(nv, 0.0), rk(nv, 0.0);
  for (int w = 0; w < nv; ++w) {
    if (source.skip_vertex(w)) continue;
    rh[w] = h1[w] - sampler.value(h2, f.values[w]);
    rk[w] = k1[w] - sampler.value(k2, f.values[w]);
  }
  EnergyBreakdown e;
  e.components[0] = params.alpha * mu_quad_term(mu.values, area);
  e.components[1] = params.beta * quad_term(rh, area);
  e.components[2] = params.gamma * quad_term(rk, area);
  e.total = e.components[0] + e.components[1] + e.components[2];
  return e;
}

VertexField<cplx> geometry_descent_direction(const DiscreteMap& f,
                                             const BeltramiCoefficient& mu,
                                             std::span<const double> h1,
                                             std::span<const double> k1,
                                             std::span<const double> h2,
                                             std::span<const double> k2,
                                             const EnergyParams& params) {
  const auto& source = *f.source;
  const auto& target = *f.target;
  check_field(source, h1.size(), "H1");
  check_field(source, k1.size(), "K1");
  check_field(target, h2.size(), "H2");
  check_field(target, k2.size(), "K2");
  check_field(source, mu.values.size(), "mu");

  const auto grad_h2 = vertex_derivatives(target, h2);
  const auto grad_k2 = vertex_derivatives(target, k2);
  const TargetSampler sampler(target);

  const int nv = source.vertex_count();
  VertexField<cplx> q(nv, cplx(0, 0));
  for (int w = 0; w < nv; ++w) {
    if (source.skip_vertex(w)) continue;
    const cplx fw = f.values[w];
    const double dh = h1[w] - sampler.value(h2, fw);
    const double dk = k1[w] - sampler.value(k2, fw);
    q[w] = params.beta * dh *
               sampler.value(std::span<const cplx>(grad_h2), fw) +
           params.gamma * dk *
               sampler.value(std::span<const cplx>(grad_k2), fw);
  }

  VertexField<cplx> dir = descent_pairing(f, q, source.domain);
  for (int v = 0; v < nv; ++v)
    dir[v] = 2.0 * (dir[v] - params.alpha * mu.values[v]);
  return dir;
}

RegistrationRun register_geometry(EmbeddingPtr source, EmbeddingPtr target,
                                  VertexField<double> h1,
                                  VertexField<double> k1,
                                  VertexField<double> h2,
                                  VertexField<double> k2,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule) {
  check_params(params);
  check_field(*source, h1.size(), "H1");
  check_field(*source, k1.size(), "K1");
  check_field(*target, h2.size(), "H2");
  check_field(*target, k2.size(), "K2");

  MuDescentEngine engine{source, target, params, schedule, {}, {}};
  engine.direction = [source, target, h1, k1, h2, k2, &params](
                         const DiscreteMap& f, std::span<const cplx> mu) {
    BeltramiCoefficient bc;
    bc.values.assign(mu.begin(), mu.end());
    bc.sup_norm = sup_abs(mu);
    return geometry_descent_direction(f, bc, h1, k1, h2, k2, params);
  };
  engine.energy = [source, target, h1, k1, h2, k2, &params](
                      std::span<const cplx> map_values,
                      std::span<const cplx> mu) {
    DiscreteMap f;
    f.source = source;
    f.target = target;
    f.values.assign(map_values.begin(), map_values.end());
    BeltramiCoefficient bc;
    bc.values.assign(mu.begin(), mu.end());
    bc.sup_norm = sup_abs(mu);
    return shape_energy(f, bc, h1, k1, h2, k2, params);
  };

  RegistrationRun run;
  run_descent_loop(engine, run);
  return run;
}

RegistrationRun register_geometry(EmbeddingPtr source, EmbeddingPtr target,
                                  const EnergyParams& params,
                                  const FlowSchedule& schedule) {
  const Curvatures cs = discrete_curvatures(*source->mesh);
  const Curvatures ct = discrete_curvatures(*target->mesh);
  return register_geometry(std::move(source), std::move(target), cs.mean,
                           cs.gauss, ct.mean, ct.gauss, params, schedule);
}

}  // namespace bhflow
