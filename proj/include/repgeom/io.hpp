#pragma once

#include "repgeom/path.hpp"
#include "repgeom/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace repgeom::io {

enum class MatrixFormat { Auto, Npy, Csv };

MatrixFormat parse_format(const std::string& name);

struct LoadedArray {
  Matrix values;
  bool integral = false;  // came from an integer dtype
  int ndim = 2;
};

/// npy v1/v2/v3 (little-endian <f4 <f8 <i4 <i8, C order) or headerless CSV.
/// 1-D arrays load as a single column.
LoadedArray load_array(const std::filesystem::path& path, MatrixFormat format = MatrixFormat::Auto);
LoadedArray parse_npy(const std::string& bytes);
LoadedArray parse_csv(const std::string& text);

/// Floating-point representation matrix; integer dtypes are rejected.
Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format = MatrixFormat::Auto);

/// Single column of integral values.
std::vector<std::int64_t> load_labels(const std::filesystem::path& path,
                                      MatrixFormat format = MatrixFormat::Auto);

void write_npy(const std::filesystem::path& path, const Matrix& values);
void write_npy(const std::filesystem::path& path, const std::vector<std::int64_t>& labels);

enum class LayerRole { Input, Hidden, TargetLabels };

struct ManifestEntry {
  std::string name;
  std::filesystem::path path;  // resolved against the manifest directory
  LayerRole role = LayerRole::Hidden;
};

/// JSON dataset description:
///   {"schema_version": 1, "stimulus_count": m, "num_classes": C,
///    "layers": [{"name", "path", "role": "input"|"hidden"|"target_labels"}, ...]}
struct DatasetManifest {
  int schema_version = 1;
  std::string name;
  Index stimulus_count = 0;
  int num_classes = 0;
  std::vector<ManifestEntry> entries;
};

DatasetManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

PathInputs load_dataset(const DatasetManifest& manifest, MatrixFormat format = MatrixFormat::Auto);

/// 17 significant digits; "null" for non-finite values in JSON contexts.
std::string format_double(double value);

/// Serializes JSON with 17-significant-digit floats and two-space indent.
std::string dump_json(const nlohmann::json& doc);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace repgeom::io
