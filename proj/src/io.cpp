#include "repgeom/io.hpp"

#include "repgeom/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace repgeom::io {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "npy support assumes a little-endian host");

MatrixFormat parse_format(const std::string& name) {
  if (name == "auto") return MatrixFormat::Auto;
  if (name == "npy") return MatrixFormat::Npy;
  if (name == "csv") return MatrixFormat::Csv;
  fail(ErrorCode::InvalidArgument, "unknown format '" + name + "' (expected auto, npy or csv)");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::IoError, "error reading " + path.string());
  return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) fail(ErrorCode::IoError, "error writing " + path.string());
}

namespace {

const char kMagic[] = "\x93NUMPY";

// Value of `key` in a numpy header dict, up to the next top-level comma or brace.
std::string header_field(const std::string& header, const std::string& key) {
  std::size_t pos = header.find("'" + key + "'");
  if (pos == std::string::npos) pos = header.find("\"" + key + "\"");
  if (pos == std::string::npos) fail(ErrorCode::ParseError, "npy header lacks '" + key + "'");
  pos = header.find(':', pos);
  if (pos == std::string::npos) fail(ErrorCode::ParseError, "malformed npy header");
  ++pos;
  int depth = 0;
  std::size_t end = pos;
  for (; end < header.size(); ++end) {
    const char c = header[end];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && (c == ',' || c == '}')) break;
    if (depth < 0) break;
  }
  std::string value = header.substr(pos, end - pos);
  const auto first = value.find_first_not_of(" \t");
  const auto last = value.find_last_not_of(" \t");
  return first == std::string::npos ? std::string() : value.substr(first, last - first + 1);
}

std::vector<Index> parse_shape(const std::string& text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    fail(ErrorCode::ParseError, "npy shape is not a tuple: " + text);
  }
  std::vector<Index> dims;
  std::string inner = text.substr(1, text.size() - 2);
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \tL");
    item = item.substr(first, last - first + 1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v < 0) {
      fail(ErrorCode::ParseError, "bad npy shape entry '" + item + "'");
    }
    dims.push_back(static_cast<Index>(v));
  }
  return dims;
}

template <class T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

LoadedArray parse_npy(const std::string& bytes) {
  if (bytes.size() < 10 || bytes.compare(0, 6, kMagic, 6) != 0) {
    fail(ErrorCode::ParseError, "missing npy magic at byte 0");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = read_le<std::uint16_t>(bytes.data() + 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) fail(ErrorCode::ParseError, "truncated npy preamble at byte 8");
    header_len = read_le<std::uint32_t>(bytes.data() + 8);
    offset = 12;
  } else {
    fail(ErrorCode::ParseError, "unsupported npy version " + std::to_string(major) + " at byte 6");
  }
  if (bytes.size() < offset + header_len) {
    fail(ErrorCode::ParseError, "npy header runs past end of file at byte " + std::to_string(offset));
  }
  const std::string header = bytes.substr(offset, header_len);
  offset += header_len;

  std::string descr = header_field(header, "descr");
  if (descr.size() >= 2 && (descr.front() == '\'' || descr.front() == '"')) {
    descr = descr.substr(1, descr.size() - 2);
  }
  int width = 0;
  bool integral = false;
  if (descr == "<f8") {
    width = 8;
  } else if (descr == "<f4") {
    width = 4;
  } else if (descr == "<i8") {
    width = 8;
    integral = true;
  } else if (descr == "<i4") {
    width = 4;
    integral = true;
  } else {
    fail(ErrorCode::UnsupportedDtype, "unsupported npy dtype '" + descr + "'");
  }
  if (header_field(header, "fortran_order") != "False") {
    fail(ErrorCode::UnsupportedDtype, "Fortran-ordered npy arrays are not supported");
  }
  const std::vector<Index> dims = parse_shape(header_field(header, "shape"));
  if (dims.empty() || dims.size() > 2) {
    fail(ErrorCode::ShapeError, "expected a 1-D or 2-D array, got " + std::to_string(dims.size()) + "-D");
  }
  const Index rows = dims[0];
  const Index cols = dims.size() == 2 ? dims[1] : 1;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() - offset < count * static_cast<std::size_t>(width)) {
    fail(ErrorCode::ParseError, "npy data truncated: expected " + std::to_string(count * width) +
                                    " bytes at byte " + std::to_string(offset) + ", found " +
                                    std::to_string(bytes.size() - offset));
  }
  LoadedArray out;
  out.integral = integral;
  out.ndim = static_cast<int>(dims.size());
  out.values.resize(rows, cols);
  const char* p = bytes.data() + offset;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j, p += width) {
      double v = 0.0;
      if (!integral && width == 8) v = read_le<double>(p);
      if (!integral && width == 4) v = static_cast<double>(read_le<float>(p));
      if (integral && width == 8) v = static_cast<double>(read_le<std::int64_t>(p));
      if (integral && width == 4) v = static_cast<double>(read_le<std::int32_t>(p));
      out.values(i, j) = v;
    }
  }
  return out;
}

LoadedArray parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::size_t field_start = 0;
    while (true) {
      std::size_t comma = line.find(',', field_start);
      if (comma == std::string::npos) comma = line.size();
      std::size_t a = field_start, b = comma;
      while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
      while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t')) --b;
      const char* first = line.data() + a;
      const char* last = line.data() + b;
      if (a < b && *first == '+') ++first;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (a == b || ec != std::errc() || ptr != last) {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", byte " +
                                        std::to_string(line_start + field_start) +
                                        ": cannot parse '" + line.substr(field_start, comma - field_start) +
                                        "' as a number");
      }
      row.push_back(v);
      if (comma == line.size()) break;
      field_start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(rows.front().size()) + " fields, found " +
                                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::ParseError, "CSV file has no rows");
  LoadedArray out;
  out.ndim = rows.front().size() == 1 ? 1 : 2;
  out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return out;
}

LoadedArray load_array(const fs::path& path, MatrixFormat format) {
  const std::string bytes = read_file(path);
  if (format == MatrixFormat::Auto) {
    format = bytes.compare(0, 6, kMagic, 6) == 0 ? MatrixFormat::Npy : MatrixFormat::Csv;
  }
  try {
    return format == MatrixFormat::Npy ? parse_npy(bytes) : parse_csv(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

Matrix load_matrix(const fs::path& path, MatrixFormat format) {
  LoadedArray a = load_array(path, format);
  if (a.integral) {
    fail(ErrorCode::UnsupportedDtype,
         path.string() + ": integer arrays are accepted only for target labels");
  }
  return std::move(a.values);
}

std::vector<std::int64_t> load_labels(const fs::path& path, MatrixFormat format) {
  const LoadedArray a = load_array(path, format);
  if (a.values.cols() != 1) {
    fail(ErrorCode::ShapeError, path.string() + ": labels must be a single column");
  }
  std::vector<std::int64_t> labels;
  labels.reserve(static_cast<std::size_t>(a.values.rows()));
  for (Index i = 0; i < a.values.rows(); ++i) {
    const double v = a.values(i, 0);
    if (!std::isfinite(v) || std::floor(v) != v) {
      fail(ErrorCode::UnsupportedDtype,
           path.string() + ": label at row " + std::to_string(i) + " is not an integer");
    }
    labels.push_back(static_cast<std::int64_t>(v));
  }
  return labels;
}

namespace {

std::string npy_bytes(const std::string& descr, const std::string& shape, const char* data,
                      std::size_t size) {
  std::string header = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': " + shape + ", }";
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');
  std::string out(kMagic, 6);
  out.push_back('\x01');
  out.push_back('\x00');
  const auto len = static_cast<std::uint16_t>(header.size());
  out.push_back(static_cast<char>(len & 0xff));
  out.push_back(static_cast<char>(len >> 8));
  out += header;
  out.append(data, size);
  return out;
}

}  // namespace

void write_npy(const fs::path& path, const Matrix& values) {
  std::vector<double> row_major(static_cast<std::size_t>(values.size()));
  std::size_t k = 0;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) row_major[k++] = values(i, j);
  }
  const std::string shape = "(" + std::to_string(values.rows()) + ", " + std::to_string(values.cols()) + ")";
  write_file(path, npy_bytes("<f8", shape, reinterpret_cast<const char*>(row_major.data()),
                             row_major.size() * sizeof(double)));
}

void write_npy(const fs::path& path, const std::vector<std::int64_t>& labels) {
  const std::string shape = "(" + std::to_string(labels.size()) + ",)";
  write_file(path, npy_bytes("<i8", shape, reinterpret_cast<const char*>(labels.data()),
                             labels.size() * sizeof(std::int64_t)));
}

DatasetManifest parse_manifest(const nlohmann::json& doc, const fs::path& base_dir) {
  auto bad = [](const std::string& msg) { fail(ErrorCode::ManifestError, msg); };
  if (!doc.is_object()) bad("manifest must be a JSON object");
  DatasetManifest m;
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    bad("manifest needs an integer schema_version");
  }
  m.schema_version = doc["schema_version"].get<int>();
  if (m.schema_version != 1) bad("unsupported schema_version " + std::to_string(m.schema_version));
  if (doc.contains("name") && doc["name"].is_string()) m.name = doc["name"].get<std::string>();
  if (!doc.contains("stimulus_count") || !doc["stimulus_count"].is_number_integer() ||
      doc["stimulus_count"].get<long long>() < 1) {
    bad("manifest needs a positive integer stimulus_count");
  }
  m.stimulus_count = doc["stimulus_count"].get<Index>();
  if (!doc.contains("num_classes") || !doc["num_classes"].is_number_integer() ||
      doc["num_classes"].get<long long>() < 1) {
    bad("manifest needs a positive integer num_classes");
  }
  m.num_classes = doc["num_classes"].get<int>();
  if (!doc.contains("layers") || !doc["layers"].is_array()) bad("manifest needs a layers array");

  int inputs = 0, targets = 0, hidden = 0;
  std::set<std::string> names;
  for (const auto& layer : doc["layers"]) {
    if (!layer.is_object() || !layer.contains("name") || !layer["name"].is_string() ||
        !layer.contains("path") || !layer["path"].is_string() || !layer.contains("role") ||
        !layer["role"].is_string()) {
      bad("each layer needs string fields name, path and role");
    }
    ManifestEntry e;
    e.name = layer["name"].get<std::string>();
    if (e.name.empty()) bad("layer names must be non-empty");
    if (!names.insert(e.name).second) bad("duplicate layer name '" + e.name + "'");
    fs::path p = layer["path"].get<std::string>();
    e.path = p.is_absolute() ? p : base_dir / p;
    const std::string role = layer["role"].get<std::string>();
    if (role == "input") {
      e.role = LayerRole::Input;
      ++inputs;
    } else if (role == "hidden") {
      e.role = LayerRole::Hidden;
      ++hidden;
    } else if (role == "target_labels") {
      e.role = LayerRole::TargetLabels;
      ++targets;
    } else {
      bad("layer '" + e.name + "' has unknown role '" + role + "'");
    }
    m.entries.push_back(std::move(e));
  }
  if (inputs != 1) bad("manifest needs exactly one input layer, found " + std::to_string(inputs));
  if (targets != 1) bad("manifest needs exactly one target_labels layer, found " + std::to_string(targets));
  if (hidden < 1) bad("manifest needs at least one hidden layer");
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

PathInputs load_dataset(const DatasetManifest& manifest, MatrixFormat format) {
  PathInputs inputs;
  inputs.num_classes = manifest.num_classes;
  auto check_rows = [&](const ManifestEntry& e, Index rows) {
    if (rows != manifest.stimulus_count) {
      fail(ErrorCode::ManifestError, "layer '" + e.name + "' has " + std::to_string(rows) +
                                         " rows, manifest declares " +
                                         std::to_string(manifest.stimulus_count));
    }
  };
  for (const ManifestEntry& e : manifest.entries) {
    if (!fs::exists(e.path)) {
      fail(ErrorCode::ManifestError, "layer '" + e.name + "' file not found: " + e.path.string());
    }
    switch (e.role) {
      case LayerRole::Input:
        inputs.input_name = e.name;
        inputs.input = load_matrix(e.path, format);
        check_rows(e, inputs.input.rows());
        break;
      case LayerRole::Hidden:
        inputs.hidden_names.push_back(e.name);
        inputs.hidden.push_back(load_matrix(e.path, format));
        check_rows(e, inputs.hidden.back().rows());
        break;
      case LayerRole::TargetLabels:
        inputs.target_name = e.name;
        inputs.labels = load_labels(e.path, format);
        check_rows(e, static_cast<Index>(inputs.labels.size()));
        break;
    }
  }
  inputs.validate();
  return inputs;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void dump_into(const nlohmann::json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      const bool scalars = std::all_of(j.begin(), j.end(), [](const nlohmann::json& v) {
        return v.is_number() || v.is_null() || v.is_boolean();
      });
      if (scalars) {
        out += "[";
        for (auto it = j.begin(); it != j.end(); ++it) {
          if (it != j.begin()) out += ", ";
          dump_into(*it, indent, out);
        }
        out += "]";
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_into(v, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        dump_into(it.value(), indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc) {
  std::string out;
  dump_into(doc, 0, out);
  out += "\n";
  return out;
}

}  // namespace repgeom::io
