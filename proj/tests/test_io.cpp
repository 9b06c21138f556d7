#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bhflow/io.hpp"
#include "fixtures.hpp"

using namespace bhflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::current_path() / "io_scratch";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_text(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  out << content;
  out.close();
  return p.string();
}

std::string path_in(const std::string& name) {
  return (scratch() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Fn>
void expect_error(Fn&& fn, ErrorCode code, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected an error containing '" << needle << "'");
  } catch (const Error& e) {
    CHECK(e.code() == code);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("mesh loading") {
  SUBCASE("tetrahedron OBJ") {
    const auto path = write_text("tetra.obj",
                                 "# tetra\n"
                                 "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
                                 "f 1 3 2\nf 1 2 4\nf 2 3 4\nf 1 4 3\n");
    const LoadedMesh lm = load_mesh(path);
    CHECK(lm.mesh->vertex_count() == 4);
    CHECK(lm.mesh->face_count() == 4);
    CHECK(lm.mesh->is_closed());
    CHECK(lm.fan_split_faces == 0);
  }

  SUBCASE("quad faces fan-split") {
    const auto path = write_text("quad.obj",
                                 "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
                                 "f 1 2 3 4\n");
    const LoadedMesh lm = load_mesh(path);
    CHECK(lm.mesh->face_count() == 2);
    CHECK(lm.fan_split_faces == 1);
    CHECK(lm.mesh->boundary_loops.size() == 1);
  }

  SUBCASE("OBJ face index syntax variants") {
    const auto path = write_text("syntax.obj",
                                 "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                                 "f 1/1 2/2/2 3//3\n");
    CHECK(load_mesh(path).mesh->face_count() == 1);
  }

  SUBCASE("tetrahedron PLY, with content sniff for odd extensions") {
    const std::string ply =
        "ply\nformat ascii 1.0\ncomment test\n"
        "element vertex 4\n"
        "property double x\nproperty double y\nproperty double z\n"
        "element face 4\n"
        "property list uchar int vertex_indices\n"
        "end_header\n"
        "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n";
    CHECK(load_mesh(write_text("tetra.ply", ply)).mesh->vertex_count() == 4);
    CHECK(load_mesh(write_text("tetra.data", ply)).mesh->vertex_count() == 4);
  }

  SUBCASE("non-manifold PLY edge is refused") {
    // Faces (0,1,2) and (0,1,3) repeat the directed edge 0->1.
    const auto path = write_text("pinch.ply",
                                 "ply\nformat ascii 1.0\n"
                                 "element vertex 4\n"
                                 "property double x\nproperty double y\n"
                                 "property double z\n"
                                 "element face 2\n"
                                 "property list uchar int vertex_indices\n"
                                 "end_header\n"
                                 "0 0 0\n1 0 0\n0 1 0\n0 -1 0\n"
                                 "3 0 1 2\n3 0 1 3\n");
    expect_error([&] { load_mesh(path); }, ErrorCode::Topology,
                 "same orientation");
  }

  SUBCASE("parse errors carry path and line") {
    const auto bad_number =
        write_text("badnum.obj", "v 0 0 0\nv 1 foo 0\nv 0 1 0\nf 1 2 3\n");
    expect_error([&] { load_mesh(bad_number); }, ErrorCode::Parse, ":2:");

    const auto bad_index = write_text("badidx.obj",
                                      "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
    expect_error([&] { load_mesh(bad_index); }, ErrorCode::Parse, ":4:");

    const auto bad_ply = write_text("short.ply",
                                    "ply\nformat ascii 1.0\n"
                                    "element vertex 2\n"
                                    "property double x\nproperty double y\n"
                                    "property double z\n"
                                    "element face 0\n"
                                    "property list uchar int vertex_indices\n"
                                    "end_header\n"
                                    "0 0 0\n");
    expect_error([&] { load_mesh(bad_ply); }, ErrorCode::Parse,
                 "unexpected end of file");
  }

  SUBCASE("missing file is an io error") {
    expect_error([&] { load_mesh(path_in("nope.obj")); }, ErrorCode::Io,
                 "cannot read");
  }
}

TEST_CASE("field files round-trip bitwise") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  SUBCASE("scalar") {
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) values.push_back(std::ldexp(u(rng), i - 25));
    values.push_back(0.0);
    values.push_back(-3.0303e-13);
    values.push_back(1.0 / 3.0);
    const auto path = path_in("scalar.field");
    save_field(path, make_scalar_field("curv", values));

    const FieldFile back = load_field(path);
    CHECK(back.name == "curv");
    CHECK(back.arity == 1);
    REQUIRE(back.scalars.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i)
      CHECK(back.scalars[i] == values[i]);
  }

  SUBCASE("complex with domain metadata") {
    std::vector<cplx> values;
    for (int i = 0; i < 40; ++i) values.emplace_back(u(rng), u(rng) * 1e-7);
    FieldFile f = make_complex_field("mu", values);
    f.domain = DomainKind::Sphere;
    f.pole = 17;
    const auto path = path_in("complex.field");
    save_field(path, f);

    const FieldFile back = load_field(path);
    CHECK(back.arity == 2);
    REQUIRE(back.domain.has_value());
    CHECK(*back.domain == DomainKind::Sphere);
    CHECK(back.pole == 17);
    REQUIRE(back.values.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i) CHECK(back.values[i] == values[i]);
  }

  SUBCASE("malformed inputs") {
    expect_error(
        [&] { load_field(write_text("nohdr.field", "name=x arity=1\n")); },
        ErrorCode::Parse, "header");
    expect_error(
        [&] {
          load_field(write_text("count.field",
                                "bhflow-field-v1\nname=x arity=1 count=3\n"
                                "0 1.5\n1 2.5\n"));
        },
        ErrorCode::Parse, "declared count 3");
    expect_error(
        [&] {
          load_field(write_text("order.field",
                                "bhflow-field-v1\nname=x arity=1 count=2\n"
                                "1 1.5\n0 2.5\n"));
        },
        ErrorCode::Parse, "expected index 0");
    expect_error(
        [&] {
          load_field(write_text("cols.field",
                                "bhflow-field-v1\nname=x arity=2 count=1\n"
                                "0 1.5\n"));
        },
        ErrorCode::Parse, "columns");
    expect_error(
        [&] {
          load_field(write_text("dup.field",
                                "bhflow-field-v1\nname=x name=y arity=1 "
                                "count=0\n"));
        },
        ErrorCode::Parse, "duplicate key");
  }
}

TEST_CASE("parameterization files") {
  auto chart = fixtures::polar_disk_chart(4);
  auto mesh = chart->mesh;
  const auto path = path_in("disk.param");
  save_param(path, *chart, "param");

  SUBCASE("round trip validates and preserves coordinates") {
    const PlanarEmbedding back = load_param(path, mesh);
    CHECK(back.domain == DomainKind::Disk);
    for (int v = 0; v < mesh->vertex_count(); ++v)
      CHECK(back.coords[v] == chart->coords[v]);
  }

  SUBCASE("vertex count mismatch") {
    auto small = fixtures::polar_disk_mesh(3);
    expect_error([&] { load_param(path, small); }, ErrorCode::Validation,
                 "vertices");
  }

  SUBCASE("interior fold is named") {
    auto coords = chart->coords;
    coords[0] = cplx(0.6, 0.0);  // drag the hub across ring 1
    FieldFile f = make_complex_field("param", coords);
    f.domain = DomainKind::Disk;
    const auto folded = path_in("folded.param");
    save_field(folded, f);
    expect_error([&] { load_param(folded, mesh); }, ErrorCode::Validation,
                 "flipped");
  }

  SUBCASE("boundary must sit on the unit circle") {
    auto coords = chart->coords;
    const int b = 1 + 3 * 4 * 3;  // first boundary vertex
    coords[b] *= 0.8;
    FieldFile f = make_complex_field("param", coords);
    f.domain = DomainKind::Disk;
    const auto off = path_in("offcircle.param");
    save_field(off, f);
    expect_error([&] { load_param(off, mesh); }, ErrorCode::Validation,
                 "boundary");
  }

  SUBCASE("sphere parameterization needs a pole") {
    auto sphere = fixtures::icosphere_mesh(1);
    auto schart = fixtures::sphere_chart(sphere);
    FieldFile f = make_complex_field("param", schart->coords);
    f.domain = DomainKind::Sphere;
    const auto nopole = path_in("nopole.param");
    save_field(nopole, f);
    expect_error([&] { load_param(nopole, sphere); }, ErrorCode::Validation,
                 "pole");
  }
}

TEST_CASE("landmark files") {
  SUBCASE("header-only file is an empty set") {
    const auto path = write_text("empty.lmk", "bhflow-landmarks-v1\n");
    CHECK(load_landmarks(path, 100).curves.empty());
  }

  SUBCASE("blocks split on blank lines") {
    const auto path = write_text("two.lmk",
                                 "bhflow-landmarks-v1\n"
                                 "0 0.1 0.2\n1 0.2 0.3\n2 0.3 0.4\n"
                                 "3 0.4 0.5\n4 0.5 0.6\n"
                                 "\n"
                                 "9 -0.1 0.0\n8 -0.2 0.0\n");
    const LandmarkSet set = load_landmarks(path, 100);
    REQUIRE(set.curves.size() == 2);
    CHECK(set.curves[0].vertices.size() == 5);
    CHECK(set.curves[1].vertices == std::vector<int>{9, 8});
    CHECK(set.curves[0].targets[4] == cplx(0.5, 0.6));
  }

  SUBCASE("vertex index out of range") {
    const auto path = write_text("oob.lmk",
                                 "bhflow-landmarks-v1\n12 0.1 0.1\n");
    expect_error([&] { load_landmarks(path, 12); }, ErrorCode::Validation,
                 ":2: vertex 12 out of range");
  }

  SUBCASE("save/load round trip") {
    LandmarkSet set;
    set.curves.push_back({{3, 4, 5}, {cplx(0.1, -0.2), cplx(0.15, -0.1),
                                      cplx(1.0 / 3.0, 0.0)}});
    set.curves.push_back({{9}, {cplx(-0.25, 0.125)}});
    const auto path = path_in("rt.lmk");
    save_landmarks(path, set);
    const LandmarkSet back = load_landmarks(path, 10);
    REQUIRE(back.curves.size() == 2);
    CHECK(back.curves[0].vertices == set.curves[0].vertices);
    for (size_t i = 0; i < 3; ++i)
      CHECK(back.curves[0].targets[i] == set.curves[0].targets[i]);
    CHECK(back.curves[1].vertices == set.curves[1].vertices);
    CHECK(back.curves[1].targets[0] == set.curves[1].targets[0]);
  }
}

TEST_CASE("field export") {
  auto mesh = fixtures::polar_disk_mesh(2);
  const int n = mesh->vertex_count();

  SUBCASE("csv mode round-trips bitwise") {
    VertexField<double> field(n);
    for (int v = 0; v < n; ++v) field[v] = std::sin(1e3 * (v + 1)) * 1e-5;
    const auto path = path_in("export.field");
    export_field(field, *mesh, path, ExportMode::Csv, "vals");
    const FieldFile back = load_field(path);
    REQUIRE(back.scalars.size() == field.size());
    for (int v = 0; v < n; ++v) CHECK(back.scalars[v] == field[v]);
  }

  SUBCASE("constant field colors every vertex the same, sidecar min=max") {
    VertexField<double> field(n, 0.75);
    const auto path = path_in("const.ply");
    export_field(field, *mesh, path, ExportMode::PlyColor, "c");

    const LoadedMesh lm = load_mesh(path);  // exported PLY is itself loadable
    CHECK(lm.mesh->vertex_count() == n);

    std::ifstream in(path);
    std::string line;
    bool body = false;
    int rows = 0;
    std::string first_color;
    while (std::getline(in, line)) {
      if (!body) {
        body = line == "end_header";
        continue;
      }
      if (rows >= n) break;
      // Columns: x y z r g b; the color triple must match row 0's.
      std::istringstream ss(line);
      std::string x, y, z, r, g, b;
      ss >> x >> y >> z >> r >> g >> b;
      if (rows == 0) first_color = r + " " + g + " " + b;
      CHECK(r + " " + g + " " + b == first_color);
      ++rows;
    }
    CHECK(rows == n);

    const std::string meta = slurp(path + ".meta");
    CHECK(meta.find("min=0.75") != std::string::npos);
    CHECK(meta.find("max=0.75") != std::string::npos);
  }

  SUBCASE("length mismatch is rejected") {
    VertexField<double> field(n + 1, 0.0);
    expect_error(
        [&] {
          export_field(field, *mesh, path_in("bad.ply"), ExportMode::PlyColor,
                       "c");
        },
        ErrorCode::Validation, "length");
  }
}

TEST_CASE("trace files") {
  std::vector<TraceRow> trace;
  trace.push_back({0, 1.25, {1.0, 0.25, 0.0}, 0.0, 0.0});
  trace.push_back({1, 0.5, {0.375, 0.125, 0.0}, 0.05, 0.25});
  const auto path = path_in("trace.csv");
  save_trace(path, trace);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# bhflow-trace-v1");
  std::getline(in, line);
  CHECK(line == "iteration,total,component_0,component_1,component_2,dt,sup_mu");
  std::getline(in, line);
  CHECK(line == "0,1.25,1,0.25,0,0,0");
  std::getline(in, line);
  CHECK(line.substr(0, 2) == "1,");
}

TEST_CASE("config files") {
  SUBCASE("keys parse with comments and whitespace") {
    const auto path = write_text("run.config",
                                 "bhflow-config-v1\n"
                                 "# solver knobs\n"
                                 "dt = 0.05\n"
                                 "max_iters=25\n"
                                 "\n"
                                 "out = results/run1\n");
    const auto kv = load_config(path);
    CHECK(kv.at("dt") == "0.05");
    CHECK(kv.at("max_iters") == "25");
    CHECK(kv.at("out") == "results/run1");
  }

  SUBCASE("duplicate keys are refused") {
    const auto path = write_text("dup.config",
                                 "bhflow-config-v1\ndt=0.1\ndt=0.2\n");
    expect_error([&] { load_config(path); }, ErrorCode::Parse,
                 "duplicate key 'dt'");
  }

  SUBCASE("missing version header") {
    const auto path = write_text("nohdr.config", "dt=0.1\n");
    expect_error([&] { load_config(path); }, ErrorCode::Parse, "header");
  }
}
