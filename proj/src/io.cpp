#include "bhflow/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bhflow {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& msg) {
  fail(ErrorCode::Parse, path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

double to_double(const std::string& tok, const std::string& path, int line) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end)
    parse_fail(path, line, "expected a number, got '" + tok + "'");
  return v;
}

long to_long(const std::string& tok, const std::string& path, int line) {
  long v = 0;
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end)
    parse_fail(path, line, "expected an integer, got '" + tok + "'");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

struct RawSurface {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
  int fan_splits = 0;

  void add_polygon(const std::vector<int>& poly, const std::string& path,
                   int line) {
    if (poly.size() < 3) parse_fail(path, line, "face with fewer than 3 vertices");
    for (size_t i = 1; i + 1 < poly.size(); ++i)
      faces.push_back({poly[0], poly[i], poly[i + 1]});
    if (poly.size() > 3) fan_splits += 1;
  }
};

RawSurface parse_obj(const std::string& path) {
  std::ifstream in = open_in(path);
  RawSurface raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "v") {
      if (toks.size() < 4) parse_fail(path, lineno, "v record needs x y z");
      raw.vertices.emplace_back(to_double(toks[1], path, lineno),
                                to_double(toks[2], path, lineno),
                                to_double(toks[3], path, lineno));
    } else if (toks[0] == "f") {
      std::vector<int> poly;
      for (size_t i = 1; i < toks.size(); ++i) {
        // i, i/t, i/t/n, i//n all start with the vertex index.
        const std::string head = toks[i].substr(0, toks[i].find('/'));
        const long idx = to_long(head, path, lineno);
        if (idx < 1)
          parse_fail(path, lineno, "face indices must be positive (1-based)");
        poly.push_back(static_cast<int>(idx - 1));
      }
      raw.add_polygon(poly, path, lineno);
    }
    // vn/vt/o/g/s/usemtl/mtllib carry no geometry here.
  }
  return raw;
}

RawSurface parse_ply(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;

  auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = split_ws(line);
      if (!toks.empty()) return toks;
    }
    parse_fail(path, lineno, "unexpected end of file");
  };

  if (next_line() != std::vector<std::string>{"ply"})
    parse_fail(path, lineno, "not a PLY file");
  if (auto t = next_line();
      t.size() != 3 || t[0] != "format" || t[1] != "ascii")
    parse_fail(path, lineno, "only ascii PLY is supported");

  long n_vertices = -1, n_faces = -1;
  int col_x = -1, col_y = -1, col_z = -1, vertex_cols = 0;
  bool face_is_list = false;
  std::string element;
  while (true) {
    const auto toks = next_line();
    if (toks[0] == "end_header") break;
    if (toks[0] == "comment" || toks[0] == "obj_info") continue;
    if (toks[0] == "element") {
      if (toks.size() != 3) parse_fail(path, lineno, "bad element record");
      element = toks[1];
      const long n = to_long(toks[2], path, lineno);
      if (element == "vertex") n_vertices = n;
      else if (element == "face") n_faces = n;
      else if (n != 0)
        parse_fail(path, lineno, "unsupported element '" + element + "'");
    } else if (toks[0] == "property") {
      if (element == "vertex") {
        if (toks.size() == 3) {
          if (toks[2] == "x") col_x = vertex_cols;
          if (toks[2] == "y") col_y = vertex_cols;
          if (toks[2] == "z") col_z = vertex_cols;
          vertex_cols += 1;
        } else {
          parse_fail(path, lineno, "list property on vertices unsupported");
        }
      } else if (element == "face") {
        if (toks.size() == 5 && toks[1] == "list" &&
            (toks[4] == "vertex_indices" || toks[4] == "vertex_index")) {
          face_is_list = true;
        } else {
          parse_fail(path, lineno, "faces need a single vertex_indices list");
        }
      }
    } else {
      parse_fail(path, lineno, "unexpected header record '" + toks[0] + "'");
    }
  }
  if (n_vertices < 0 || col_x < 0 || col_y < 0 || col_z < 0)
    parse_fail(path, lineno, "missing vertex element with x y z properties");
  if (n_faces < 0 || !face_is_list)
    parse_fail(path, lineno, "missing face element with vertex_indices");

  RawSurface raw;
  raw.vertices.reserve(n_vertices);
  for (long i = 0; i < n_vertices; ++i) {
    const auto toks = next_line();
    if (static_cast<int>(toks.size()) != vertex_cols)
      parse_fail(path, lineno, "vertex row has wrong column count");
    raw.vertices.emplace_back(to_double(toks[col_x], path, lineno),
                              to_double(toks[col_y], path, lineno),
                              to_double(toks[col_z], path, lineno));
  }
  for (long i = 0; i < n_faces; ++i) {
    const auto toks = next_line();
    const long k = to_long(toks[0], path, lineno);
    if (k < 3 || static_cast<long>(toks.size()) != k + 1)
      parse_fail(path, lineno, "face row does not match its vertex count");
    std::vector<int> poly;
    for (long j = 1; j <= k; ++j) {
      const long idx = to_long(toks[j], path, lineno);
      if (idx < 0) parse_fail(path, lineno, "negative vertex index");
      poly.push_back(static_cast<int>(idx));
    }
    raw.add_polygon(poly, path, lineno);
  }
  return raw;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suffix;
}

/// key=value tokens on one line, e.g. the FieldFile declaration row.
std::map<std::string, std::string> parse_kv_tokens(
    const std::vector<std::string>& toks, const std::string& path, int line) {
  std::map<std::string, std::string> kv;
  for (const auto& tok : toks) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      parse_fail(path, line, "expected key=value, got '" + tok + "'");
    if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
      parse_fail(path, line, "duplicate key '" + tok.substr(0, eq) + "'");
  }
  return kv;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

LoadedMesh load_mesh(const std::string& path) {
  RawSurface raw;
  if (has_suffix(path, ".obj")) {
    raw = parse_obj(path);
  } else if (has_suffix(path, ".ply")) {
    raw = parse_ply(path);
  } else {
    std::ifstream sniff = open_in(path);
    std::string first;
    std::getline(sniff, first);
    raw = (split_ws(first) == std::vector<std::string>{"ply"})
              ? parse_ply(path)
              : parse_obj(path);
  }
  LoadedMesh out;
  out.mesh = make_mesh(std::move(raw.vertices), std::move(raw.faces));
  out.fan_split_faces = raw.fan_splits;
  return out;
}

FieldFile load_field(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  if (line != "bhflow-field-v1")
    parse_fail(path, lineno, "missing bhflow-field-v1 header");

  if (!std::getline(in, line)) parse_fail(path, lineno, "missing declaration");
  ++lineno;
  auto kv = parse_kv_tokens(split_ws(line), path, lineno);
  for (const char* key : {"name", "arity", "count"})
    if (!kv.count(key))
      parse_fail(path, lineno, std::string("declaration needs ") + key);

  FieldFile field;
  field.name = kv.at("name");
  field.arity = static_cast<int>(to_long(kv.at("arity"), path, lineno));
  if (field.arity != 1 && field.arity != 2)
    parse_fail(path, lineno, "arity must be 1 or 2");
  const long count = to_long(kv.at("count"), path, lineno);
  if (count < 0) parse_fail(path, lineno, "negative count");
  if (kv.count("domain")) {
    if (kv.at("domain") == "disk") field.domain = DomainKind::Disk;
    else if (kv.at("domain") == "sphere") field.domain = DomainKind::Sphere;
    else parse_fail(path, lineno, "domain must be disk or sphere");
  }
  if (kv.count("pole"))
    field.pole = static_cast<int>(to_long(kv.at("pole"), path, lineno));

  long expect = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    const auto toks = split_ws(line);
    if (static_cast<int>(toks.size()) != 1 + field.arity)
      parse_fail(path, lineno,
                 "expected " + std::to_string(1 + field.arity) + " columns");
    const long idx = to_long(toks[0], path, lineno);
    if (idx != expect)
      parse_fail(path, lineno, "expected index " + std::to_string(expect) +
                                   ", got " + std::to_string(idx));
    if (field.arity == 1) {
      field.scalars.push_back(to_double(toks[1], path, lineno));
    } else {
      field.values.emplace_back(to_double(toks[1], path, lineno),
                                to_double(toks[2], path, lineno));
    }
    ++expect;
  }
  if (expect != count)
    parse_fail(path, lineno, "declared count " + std::to_string(count) +
                                 " but found " + std::to_string(expect) +
                                 " rows");
  return field;
}

void save_field(const std::string& path, const FieldFile& field) {
  if (field.arity != 1 && field.arity != 2)
    fail(ErrorCode::Validation, "field arity must be 1 or 2");
  std::ofstream out = open_out(path);
  out << "bhflow-field-v1\n";
  out << "name=" << field.name << " arity=" << field.arity
      << " count=" << field.count();
  if (field.domain) out << " domain=" << domain_kind_name(*field.domain);
  if (field.pole >= 0) out << " pole=" << field.pole;
  out << "\n";
  if (field.arity == 1) {
    for (size_t i = 0; i < field.scalars.size(); ++i)
      out << i << ' ' << format_double(field.scalars[i]) << '\n';
  } else {
    for (size_t i = 0; i < field.values.size(); ++i)
      out << i << ' ' << format_double(field.values[i].real()) << ' '
          << format_double(field.values[i].imag()) << '\n';
  }
  finish_out(out, path);
}

FieldFile make_scalar_field(std::string name, std::span<const double> values) {
  FieldFile f;
  f.name = std::move(name);
  f.arity = 1;
  f.scalars.assign(values.begin(), values.end());
  return f;
}

FieldFile make_complex_field(std::string name, std::span<const cplx> values) {
  FieldFile f;
  f.name = std::move(name);
  f.arity = 2;
  f.values.assign(values.begin(), values.end());
  return f;
}

PlanarEmbedding load_param(const std::string& path, MeshPtr mesh) {
  FieldFile field = load_field(path);
  if (field.arity != 2)
    fail(ErrorCode::Validation, path + ": parameterization needs arity 2");
  if (!field.domain)
    fail(ErrorCode::Validation, path + ": parameterization needs a domain");
  if (field.count() != static_cast<size_t>(mesh->vertex_count()))
    fail(ErrorCode::Validation,
         path + ": " + std::to_string(field.count()) + " rows for " +
             std::to_string(mesh->vertex_count()) + " vertices");
  if (*field.domain == DomainKind::Disk)
    return PlanarEmbedding::disk(std::move(mesh), std::move(field.values));
  if (field.pole < 0)
    fail(ErrorCode::Validation, path + ": sphere parameterization needs pole=");
  return PlanarEmbedding::sphere(std::move(mesh), std::move(field.values),
                                 field.pole);
}

void save_param(const std::string& path, const PlanarEmbedding& embed,
                const std::string& name) {
  FieldFile f = make_complex_field(name, embed.coords);
  f.domain = embed.domain;
  if (embed.domain == DomainKind::Sphere) f.pole = embed.pole_vertex;
  save_field(path, f);
}

LandmarkSet load_landmarks(const std::string& path, int vertex_count) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  LandmarkSet set;
  LandmarkCurve current;

  auto flush = [&]() {
    if (!current.vertices.empty()) {
      set.curves.push_back(std::move(current));
      current = {};
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) {
      flush();
      continue;
    }
    if (!saw_header) {
      if (line != "bhflow-landmarks-v1")
        parse_fail(path, lineno, "missing bhflow-landmarks-v1 header");
      saw_header = true;
      continue;
    }
    const auto toks = split_ws(line);
    if (toks.size() != 3)
      parse_fail(path, lineno, "expected `vertex re im`");
    const long v = to_long(toks[0], path, lineno);
    if (v < 0 || v >= vertex_count)
      fail(ErrorCode::Validation,
           path + ":" + std::to_string(lineno) + ": vertex " +
               std::to_string(v) + " out of range [0, " +
               std::to_string(vertex_count) + ")");
    current.vertices.push_back(static_cast<int>(v));
    current.targets.emplace_back(to_double(toks[1], path, lineno),
                                 to_double(toks[2], path, lineno));
  }
  flush();
  return set;
}

void save_landmarks(const std::string& path, const LandmarkSet& landmarks) {
  std::ofstream out = open_out(path);
  out << "bhflow-landmarks-v1\n";
  for (const auto& curve : landmarks.curves) {
    out << '\n';
    for (size_t i = 0; i < curve.vertices.size(); ++i)
      out << curve.vertices[i] << ' '
          << format_double(curve.targets[i].real()) << ' '
          << format_double(curve.targets[i].imag()) << '\n';
  }
  finish_out(out, path);
}

void export_field(std::span<const double> field, const TriMesh& mesh,
                  const std::string& path, ExportMode mode,
                  const std::string& name) {
  if (field.size() != static_cast<size_t>(mesh.vertex_count()))
    fail(ErrorCode::Validation, "field length does not match the mesh");

  if (mode == ExportMode::Csv) {
    save_field(path, make_scalar_field(name, field));
    return;
  }

  double lo = field.empty() ? 0.0 : field[0];
  double hi = lo;
  for (double v : field) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;

  std::ofstream out = open_out(path);
  out << "ply\nformat ascii 1.0\n";
  out << "comment bhflow-color-v1 field=" << name << " colormap=grayscale\n";
  out << "element vertex " << mesh.vertex_count() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "element face " << mesh.face_count() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double t = span > 0.0 ? (field[v] - lo) / span : 0.0;
    const int g = static_cast<int>(std::lround(255.0 * t));
    const auto& p = mesh.vertices[v];
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << ' ' << g << ' ' << g << ' ' << g << '\n';
  }
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  finish_out(out, path);

  save_key_values(path + ".meta", "bhflow-colormeta-v1",
                  {{"field", name},
                   {"colormap", "grayscale"},
                   {"min", format_double(lo)},
                   {"max", format_double(hi)}});
}

void save_trace(const std::string& path, std::span<const TraceRow> trace) {
  std::ofstream out = open_out(path);
  out << "# bhflow-trace-v1\n";
  out << "iteration,total,component_0,component_1,component_2,dt,sup_mu\n";
  for (const TraceRow& row : trace)
    out << row.iteration << ',' << format_double(row.total) << ','
        << format_double(row.components[0]) << ','
        << format_double(row.components[1]) << ','
        << format_double(row.components[2]) << ','
        << format_double(row.dt) << ',' << format_double(row.sup_mu) << '\n';
  finish_out(out, path);
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    if (!saw_header) {
      if (line != "bhflow-config-v1")
        parse_fail(path, lineno, "missing bhflow-config-v1 header");
      saw_header = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      parse_fail(path, lineno, "expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
      parse_fail(path, lineno, "duplicate key '" + key + "'");
  }
  return kv;
}

void save_key_values(const std::string& path, const std::string& header,
                     const std::vector<std::pair<std::string, std::string>>&
                         entries) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  finish_out(out, path);
}

}  // namespace bhflow
