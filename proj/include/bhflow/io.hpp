#pragma once

#include <map>
#include <optional>
#include <string>

#include "bhflow/registration.hpp"

namespace bhflow {

/// Loaded surface plus the number of non-triangle faces that were fan-split.
struct LoadedMesh {
  MeshPtr mesh;
  int fan_split_faces = 0;
};

/// OBJ (v/f records) or ASCII PLY, decided by file extension with a content
/// sniff fallback. Polygons are fan-triangulated. Parse errors carry
/// path:line; topology violations surface from the mesh builder.
LoadedMesh load_mesh(const std::string& path);

/// Plain-text per-vertex columnar data. Layout:
///   bhflow-field-v1
///   name=<id> arity=<1|2> count=<n> [domain=<disk|sphere>] [pole=<v>]
///   <index> <value> [<value>]
/// with indices strictly increasing from 0 and values at 17 significant
/// digits, so a save/load pair is bit-exact.
struct FieldFile {
  std::string name;
  int arity = 1;
  std::vector<double> scalars;  // arity 1
  std::vector<cplx> values;     // arity 2
  std::optional<DomainKind> domain;
  int pole = -1;

  size_t count() const { return arity == 1 ? scalars.size() : values.size(); }
};

FieldFile load_field(const std::string& path);
void save_field(const std::string& path, const FieldFile& field);

FieldFile make_scalar_field(std::string name, std::span<const double> values);
FieldFile make_complex_field(std::string name, std::span<const cplx> values);

/// Arity-2 FieldFile with a domain declaration, validated against the mesh.
PlanarEmbedding load_param(const std::string& path, MeshPtr mesh);
void save_param(const std::string& path, const PlanarEmbedding& embed,
                const std::string& name);

/// One curve per blank-line-separated block; rows `vertex re im`. A file with
/// no data rows is an empty set.
LandmarkSet load_landmarks(const std::string& path, int vertex_count);
void save_landmarks(const std::string& path, const LandmarkSet& landmarks);

enum class ExportMode { Csv, PlyColor };

/// csv: FieldFile of the values. ply-color: ASCII PLY with vertex colors from
/// a grayscale ramp (luminance linear in the value over [min, max]) plus a
/// `<path>.meta` sidecar recording the range.
void export_field(std::span<const double> field, const TriMesh& mesh,
                  const std::string& path, ExportMode mode,
                  const std::string& name);

/// Versioned CSV: iteration, total, the three energy components, dt, sup|mu|.
void save_trace(const std::string& path, std::span<const TraceRow> trace);

/// Flat `key=value` file with `#` comments under a version header.
std::map<std::string, std::string> load_config(const std::string& path);
void save_key_values(const std::string& path, const std::string& header,
                     const std::vector<std::pair<std::string, std::string>>&
                         entries);

/// 17-significant-digit decimal, the round-trip precision used everywhere.
std::string format_double(double v);

}  // namespace bhflow
