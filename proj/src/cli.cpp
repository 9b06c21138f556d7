#include "bhflow/cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

namespace bhflow {

namespace {

constexpr const char* kVersion = "0.1.0";

double config_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || p != end)
    fail(ErrorCode::Config, "config key " + key + " needs a number, got '" +
                                value + "'");
  return v;
}

long config_long(const std::string& key, const std::string& value) {
  long v = 0;
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || p != end)
    fail(ErrorCode::Config, "config key " + key + " needs an integer, got '" +
                                value + "'");
  return v;
}

/// Applies config-file values for keys whose flags were not given explicitly.
void merge_config(RunConfig& cfg, CLI::App* sub) {
  const auto kv = load_config(cfg.config_path);

  auto flag_given = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::vector<std::tuple<std::string, std::string, Setter>> keys = {
      {"mesh_a", "--mesh-a", [&](auto&, auto& v) { cfg.mesh_a = v; }},
      {"mesh_b", "--mesh-b", [&](auto&, auto& v) { cfg.mesh_b = v; }},
      {"param_a", "--param-a", [&](auto&, auto& v) { cfg.param_a = v; }},
      {"param_b", "--param-b", [&](auto&, auto& v) { cfg.param_b = v; }},
      {"landmarks", "--landmarks", [&](auto&, auto& v) { cfg.landmarks = v; }},
      {"field_a", "--field-a", [&](auto&, auto& v) { cfg.field_a = v; }},
      {"field_b", "--field-b", [&](auto&, auto& v) { cfg.field_b = v; }},
      {"bc", "--bc", [&](auto&, auto& v) { cfg.bc = v; }},
      {"out", "--out", [&](auto&, auto& v) { cfg.out_dir = v; }},
      {"n_steps", "--n-steps",
       [&](auto& k, auto& v) {
         cfg.schedule.n_steps = static_cast<int>(config_long(k, v));
       }},
      {"dt", "--dt",
       [&](auto& k, auto& v) { cfg.params.dt = config_double(k, v); }},
      {"alpha", "--alpha",
       [&](auto& k, auto& v) { cfg.params.alpha = config_double(k, v); }},
      {"beta", "--beta",
       [&](auto& k, auto& v) { cfg.params.beta = config_double(k, v); }},
      {"gamma", "--gamma",
       [&](auto& k, auto& v) { cfg.params.gamma = config_double(k, v); }},
      {"max_iters", "--max-iters",
       [&](auto& k, auto& v) {
         cfg.params.max_iters = static_cast<int>(config_long(k, v));
       }},
      {"epsilon", "--epsilon",
       [&](auto& k, auto& v) { cfg.params.epsilon = config_double(k, v); }},
      {"delta_margin", "",
       [&](auto& k, auto& v) { cfg.params.delta_margin = config_double(k, v); }},
      {"max_halvings", "",
       [&](auto& k, auto& v) {
         cfg.params.max_halvings = static_cast<int>(config_long(k, v));
       }},
      {"resync_every", "",
       [&](auto& k, auto& v) {
         cfg.params.resync_every = static_cast<int>(config_long(k, v));
       }},
      {"mask_radius", "",
       [&](auto& k, auto& v) { cfg.mask_radius = config_double(k, v); }},
      {"seed", "", [&](auto& k, auto& v) { cfg.seed = config_long(k, v); }},
  };

  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const auto& [name, flag, set] : keys) {
      if (name != key) continue;
      known = true;
      if (flag.empty() || !flag_given(flag)) set(key, value);
      break;
    }
    if (!known) fail(ErrorCode::Config, "unknown config key '" + key + "'");
  }
}

void need(const std::string& value, const std::string& flag) {
  if (value.empty())
    fail(ErrorCode::Config, "missing required input " + flag);
}

EmbeddingPtr load_chart(const std::string& mesh_path,
                        const std::string& param_path, int* fan_splits) {
  LoadedMesh lm = load_mesh(mesh_path);
  if (lm.fan_split_faces > 0) {
    *fan_splits += lm.fan_split_faces;
    std::cerr << "warning: " << mesh_path << ": fan-triangulated "
              << lm.fan_split_faces << " non-triangle face(s)\n";
  }
  return std::make_shared<const PlanarEmbedding>(
      load_param(param_path, lm.mesh));
}

/// Vertex-correspondence map: vertex v of chart A goes to chart B's position
/// of the same vertex. Requires equal vertex counts (and matching poles for
/// sphere charts).
DiscreteMap correspondence_map(EmbeddingPtr source, EmbeddingPtr target) {
  if (source->vertex_count() != target->vertex_count())
    fail(ErrorCode::Validation,
         "charts pair " + std::to_string(source->vertex_count()) + " with " +
             std::to_string(target->vertex_count()) + " vertices");
  if (source->domain != target->domain)
    fail(ErrorCode::Validation, "charts live on different domains");
  if (source->domain == DomainKind::Sphere &&
      source->pole_vertex != target->pole_vertex)
    fail(ErrorCode::Validation, "sphere charts disagree on the pole vertex");
  DiscreteMap map;
  map.source = std::move(source);
  map.target = std::move(target);
  map.values = map.target->coords;
  return map;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_mu_outputs(const RunConfig& cfg, const BeltramiCoefficient& mu,
                      const TriMesh& mesh) {
  FieldFile f = make_complex_field("mu", mu.values);
  save_field(out_path(cfg, "mu.field"), f);
  VertexField<double> abs_mu(mu.values.size());
  for (size_t i = 0; i < mu.values.size(); ++i)
    abs_mu[i] = std::abs(mu.values[i]);
  export_field(abs_mu, mesh, out_path(cfg, "mu_abs.ply"), ExportMode::PlyColor,
               "abs_mu");
}

void write_map_output(const RunConfig& cfg, const DiscreteMap& map) {
  FieldFile f = make_complex_field("map", map.values);
  f.domain = map.source->domain;
  if (map.source->domain == DomainKind::Sphere)
    f.pole = map.source->pole_vertex;
  save_field(out_path(cfg, "map.field"), f);
}

std::vector<std::pair<std::string, std::string>> base_metadata(
    const RunConfig& cfg) {
  return {
      {"version", kVersion},
      {"task", cfg.task},
      {"mesh_a", cfg.mesh_a},
      {"mesh_b", cfg.mesh_b},
      {"param_a", cfg.param_a},
      {"param_b", cfg.param_b},
      {"landmarks", cfg.landmarks},
      {"field_a", cfg.field_a},
      {"field_b", cfg.field_b},
      {"bc", cfg.bc},
      {"n_steps", std::to_string(cfg.schedule.n_steps)},
      {"dt", format_double(cfg.params.dt)},
      {"alpha", format_double(cfg.params.alpha)},
      {"beta", format_double(cfg.params.beta)},
      {"gamma", format_double(cfg.params.gamma)},
      {"epsilon", format_double(cfg.params.epsilon)},
      {"max_iters", std::to_string(cfg.params.max_iters)},
      {"delta_margin", format_double(cfg.params.delta_margin)},
      {"max_halvings", std::to_string(cfg.params.max_halvings)},
      {"resync_every", std::to_string(cfg.params.resync_every)},
      {"mask_radius", format_double(cfg.mask_radius)},
      {"seed", std::to_string(cfg.seed)},
  };
}

void finish_run(const RunConfig& cfg, const RegistrationRun& run,
                std::vector<std::pair<std::string, std::string>> meta,
                double wall_ms) {
  write_map_output(cfg, run.map);
  write_mu_outputs(cfg, run.mu, *run.map.source->mesh);
  save_trace(out_path(cfg, "trace.csv"), run.trace);
  meta.emplace_back("iterations", std::to_string(run.iterations));
  meta.emplace_back("stop", stop_reason_name(run.stop));
  meta.emplace_back("energy_final", format_double(run.trace.back().total));
  meta.emplace_back("sup_mu_final", format_double(run.mu.sup_norm));
  if (cfg.task == "register-landmarks")
    meta.emplace_back("max_landmark_deviation",
                      format_double(run.max_landmark_deviation));
  meta.emplace_back("wall_ms", format_double(wall_ms));
  save_key_values(out_path(cfg, "run.meta"), "bhflow-run-v1", meta);

  std::cout << "task=" << cfg.task << "\n"
            << "iterations=" << run.iterations << "\n"
            << "stop=" << stop_reason_name(run.stop) << "\n"
            << "energy_final=" << format_double(run.trace.back().total) << "\n"
            << "out=" << cfg.out_dir << "\n";
}

VertexField<double> load_scalar_field(const std::string& path,
                                      const PlanarEmbedding& embed,
                                      const char* what) {
  FieldFile f = load_field(path);
  if (f.arity != 1)
    fail(ErrorCode::Validation, path + ": " + what + " needs arity 1");
  if (f.count() != static_cast<size_t>(embed.vertex_count()))
    fail(ErrorCode::Validation,
         path + ": " + std::to_string(f.count()) + " rows for " +
             std::to_string(embed.vertex_count()) + " vertices");
  return std::move(f.scalars);
}

int run_task(RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + cfg.out_dir);

  int fan_splits = 0;
  auto wall_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  need(cfg.mesh_a, "--mesh-a");
  need(cfg.param_a, "--param-a");
  EmbeddingPtr source = load_chart(cfg.mesh_a, cfg.param_a, &fan_splits);

  auto load_target = [&]() -> EmbeddingPtr {
    need(cfg.param_b, "--param-b");
    return load_chart(cfg.mesh_b.empty() ? cfg.mesh_a : cfg.mesh_b,
                      cfg.param_b, &fan_splits);
  };

  if (cfg.task == "extract-bc") {
    const DiscreteMap map = correspondence_map(source, load_target());
    const BeltramiCoefficient mu = compute_bc(map);
    write_mu_outputs(cfg, mu, *source->mesh);
    auto meta = base_metadata(cfg);
    meta.emplace_back("sup_mu_final", format_double(mu.sup_norm));
    meta.emplace_back("wall_ms", format_double(wall_ms()));
    save_key_values(out_path(cfg, "run.meta"), "bhflow-run-v1", meta);
    std::cout << "task=" << cfg.task << "\n"
              << "sup_mu=" << format_double(mu.sup_norm) << "\n"
              << "out=" << cfg.out_dir << "\n";
    return 0;
  }

  if (cfg.task == "reconstruct") {
    need(cfg.bc, "--bc");
    FieldFile f = load_field(cfg.bc);
    if (f.arity != 2)
      fail(ErrorCode::Validation, cfg.bc + ": coefficient needs arity 2");
    if (f.count() != static_cast<size_t>(source->vertex_count()))
      fail(ErrorCode::Validation,
           cfg.bc + ": " + std::to_string(f.count()) + " rows for " +
               std::to_string(source->vertex_count()) + " vertices");
    const BeltramiCoefficient mu =
        BeltramiCoefficient::from_values(std::move(f.values));
    const DiscreteMap map = reconstruct(mu, cfg.schedule, source, source);
    write_map_output(cfg, map);
    auto meta = base_metadata(cfg);
    meta.emplace_back("sup_mu_final", format_double(mu.sup_norm));
    meta.emplace_back("wall_ms", format_double(wall_ms()));
    save_key_values(out_path(cfg, "run.meta"), "bhflow-run-v1", meta);
    std::cout << "task=" << cfg.task << "\n"
              << "n_steps=" << cfg.schedule.n_steps << "\n"
              << "out=" << cfg.out_dir << "\n";
    return 0;
  }

  if (cfg.task == "register-features") {
    need(cfg.field_a, "--field-a");
    need(cfg.field_b, "--field-b");
    EmbeddingPtr target = load_target();
    const auto f1 = load_scalar_field(cfg.field_a, *source, "feature field");
    const auto f2 = load_scalar_field(cfg.field_b, *target, "feature field");
    const RegistrationRun run =
        register_features(source, target, f1, f2, cfg.params, cfg.schedule);
    finish_run(cfg, run, base_metadata(cfg), wall_ms());
    return 0;
  }

  if (cfg.task == "register-landmarks") {
    need(cfg.landmarks, "--landmarks");
    LandmarkSet set = load_landmarks(cfg.landmarks, source->vertex_count());
    set.mask_radius = cfg.mask_radius;
    const RegistrationRun run =
        register_landmarks(source, set, cfg.params, cfg.schedule);
    finish_run(cfg, run, base_metadata(cfg), wall_ms());
    return 0;
  }

  if (cfg.task == "register-geometry") {
    need(cfg.mesh_b, "--mesh-b");
    EmbeddingPtr target = load_target();
    const RegistrationRun run =
        register_geometry(source, target, cfg.params, cfg.schedule);
    finish_run(cfg, run, base_metadata(cfg), wall_ms());
    return 0;
  }

  fail(ErrorCode::Config, "unknown task " + cfg.task);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Surface map toolkit: quasiconformal coefficients and their "
               "flow-based registration"};
  app.set_version_flag("--version", std::string("bhflow ") + kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"extract-bc",
       "Coefficient of the vertex-correspondence map between two charts"},
      {"reconstruct", "Flow the identity to the map of a given coefficient"},
      {"register-features", "Intensity-matching registration"},
      {"register-landmarks", "Curve-constrained registration on a disk chart"},
      {"register-geometry", "Curvature-matching registration"},
  };

  for (const auto& [name, help] : tasks) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--mesh-a", cfg.mesh_a, "Source surface (OBJ/PLY)");
    sub->add_option("--mesh-b", cfg.mesh_b, "Target surface (OBJ/PLY)");
    sub->add_option("--param-a", cfg.param_a, "Source chart field file");
    sub->add_option("--param-b", cfg.param_b, "Target chart field file");
    sub->add_option("--landmarks", cfg.landmarks, "Landmark curve file");
    sub->add_option("--field-a", cfg.field_a, "Source feature field file");
    sub->add_option("--field-b", cfg.field_b, "Target feature field file");
    sub->add_option("--bc", cfg.bc, "Coefficient field file");
    sub->add_option("--config", cfg.config_path, "key=value run config");
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--n-steps", cfg.schedule.n_steps, "Flow steps");
    sub->add_option("--dt", cfg.params.dt, "Descent step size");
    sub->add_option("--alpha", cfg.params.alpha, "Conformality weight");
    sub->add_option("--beta", cfg.params.beta, "Mean-curvature weight");
    sub->add_option("--gamma", cfg.params.gamma, "Gauss-curvature weight");
    sub->add_option("--max-iters", cfg.params.max_iters, "Iteration cap");
    sub->add_option("--epsilon", cfg.params.epsilon,
                    "Energy-decrease stopping threshold");
    sub->add_option("--seed", cfg.seed,
                    "Recorded for generated-data provenance");
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);
      fail(ErrorCode::Config, e.what());
    }
    CLI::App* sub = app.get_subcommands().front();
    cfg.task = sub->get_name();
    if (!cfg.config_path.empty()) merge_config(cfg, sub);
    need(cfg.out_dir, "--out");
    return run_task(cfg);
  } catch (const Error& e) {
    std::cerr << "error_code=" << error_code_name(e.code()) << ": " << e.what()
              << "\n";
    return is_input_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error_code=internal: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace bhflow
