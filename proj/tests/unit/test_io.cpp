#include "repgeom/io.hpp"

#include "../support.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <unistd.h>

namespace fs = std::filesystem;
using repgeom::ErrorCode;
using repgeom::Matrix;
namespace io = repgeom::io;

namespace {

std::string from_hex(const std::string& hex) {
  std::string out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<char>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

// npy bytes assembled by hand: magic, version, little-endian header length,
// dict header padded with spaces to a 64-byte boundary, then the raw data.
std::string npy(const std::string& dict, const std::string& data, int major = 1) {
  const std::size_t prefix = major == 1 ? 10 : 12;
  std::string header = dict;
  while ((prefix + header.size() + 1) % 64 != 0) header.push_back(' ');
  header.push_back('\n');
  std::string out = "\x93NUMPY";
  out.push_back(static_cast<char>(major));
  out.push_back('\0');
  const std::size_t len = header.size();
  out.push_back(static_cast<char>(len & 0xff));
  out.push_back(static_cast<char>((len >> 8) & 0xff));
  if (major != 1) {
    out.push_back('\0');
    out.push_back('\0');
  }
  return out + header + data;
}

template <class T>
std::string raw(std::initializer_list<T> values) {
  std::string out;
  for (T v : values) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
  }
  return out;
}

// Output of numpy.save for [[1.5, -2.0], [3.25, 1e-300]] (float64) and
// [3, 1, 4] (int32).
std::string numpy_f8() {
  return npy("{'descr': '<f8', 'fortran_order': False, 'shape': (2, 2), }",
             from_hex("000000000000f83f00000000000000c00000000000000a4059f3f8c21f6ea501"));
}
std::string numpy_i4() {
  return npy("{'descr': '<i4', 'fortran_order': False, 'shape': (3,), }",
             from_hex("030000000100000004000000"));
}

class TempDir {
 public:
  TempDir() {
    std::string templ = (fs::temp_directory_path() / "repgeom-io-XXXXXX").string();
    path_ = mkdtemp(templ.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("csv parsing") {
  const auto a = io::parse_csv("1,2\n3,4");
  Matrix expected(2, 2);
  expected << 1, 2, 3, 4;
  CHECK(a.values == expected);
  CHECK(a.ndim == 2);
  CHECK(io::parse_csv(" 1.5 , -2e3\r\n+3,4\n\n").values(0, 1) == -2000.0);
  CHECK(io::parse_csv("7\n8\n9\n").values.cols() == 1);
}

TEST_CASE("csv errors name the line and byte") {
  try {
    io::parse_csv("1,2\n3,x\n");
    FAIL("expected a parse error");
  } catch (const repgeom::Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2, byte 6") != std::string::npos);
  }
  CHECK(testing::error_code([] { io::parse_csv("1,2\n3\n"); }) == ErrorCode::ParseError);
  CHECK(testing::error_code([] { io::parse_csv("1,,2\n"); }) == ErrorCode::ParseError);
  CHECK(testing::error_code([] { io::parse_csv(""); }) == ErrorCode::ParseError);
}

TEST_CASE("npy bytes from numpy parse exactly") {
  const auto f = io::parse_npy(numpy_f8());
  Matrix expected(2, 2);
  expected << 1.5, -2.0, 3.25, 1e-300;
  CHECK(f.values == expected);
  CHECK(!f.integral);
  const auto i = io::parse_npy(numpy_i4());
  CHECK(i.integral);
  CHECK(i.ndim == 1);
  CHECK(i.values == Eigen::Vector3d(3, 1, 4));
}

TEST_CASE("npy dtypes and versions") {
  const auto f4 = io::parse_npy(
      npy("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 3), }", raw<float>({0.5f, -1.0f, 2.0f})));
  CHECK(f4.values == Eigen::RowVector3d(0.5, -1.0, 2.0));
  const auto i8 = io::parse_npy(npy("{'descr': '<i8', 'fortran_order': False, 'shape': (2,), }",
                                    raw<std::int64_t>({-5, 9})));
  CHECK(i8.values == Eigen::Vector2d(-5, 9));
  for (int major : {2, 3}) {
    const auto v = io::parse_npy(npy("{'descr': '<f8', 'fortran_order': False, 'shape': (2, 1), }",
                                     raw<double>({1.0, 2.0}), major));
    CHECK(v.values == Eigen::Vector2d(1.0, 2.0));
  }
}

TEST_CASE("npy rejections") {
  const std::string d = raw<double>({1.0, 2.0});
  CHECK(testing::error_code([&] {
          io::parse_npy(npy("{'descr': '>f8', 'fortran_order': False, 'shape': (2,), }", d));
        }) == ErrorCode::UnsupportedDtype);
  CHECK(testing::error_code([&] {
          io::parse_npy(npy("{'descr': '<c16', 'fortran_order': False, 'shape': (1,), }", d));
        }) == ErrorCode::UnsupportedDtype);
  CHECK(testing::error_code([&] {
          io::parse_npy(npy("{'descr': '<f8', 'fortran_order': True, 'shape': (2,), }", d));
        }) == ErrorCode::UnsupportedDtype);
  CHECK(testing::error_code([&] {
          io::parse_npy(npy("{'descr': '<f8', 'fortran_order': False, 'shape': (1, 1, 2), }", d));
        }) == ErrorCode::ShapeError);
  CHECK(testing::error_code([&] {
          io::parse_npy(npy("{'descr': '<f8', 'fortran_order': False, 'shape': (3,), }", d));
        }) == ErrorCode::ParseError);
  CHECK(testing::error_code([] { io::parse_npy("NUMPY"); }) == ErrorCode::ParseError);
  CHECK(testing::error_code([&] { io::parse_npy(numpy_f8().substr(0, 40)); }) == ErrorCode::ParseError);
}

TEST_CASE("npy writer matches numpy byte for byte") {
  TempDir dir;
  Matrix m(2, 2);
  m << 1.5, -2.0, 3.25, 1e-300;
  io::write_npy(dir.path() / "m.npy", m);
  CHECK(io::read_file(dir.path() / "m.npy") == numpy_f8());
}

TEST_CASE("npy round trip is bit identical") {
  TempDir dir;
  testing::Gen gen(141);
  const Matrix m = gen.gaussian(7, 5) * 1e5;
  io::write_npy(dir.path() / "r.npy", m);
  CHECK(io::load_matrix(dir.path() / "r.npy") == m);
  const std::vector<std::int64_t> labels{4, 0, 2, 9, 1};
  io::write_npy(dir.path() / "l.npy", labels);
  CHECK(io::load_labels(dir.path() / "l.npy") == labels);
  const auto header_len = io::read_file(dir.path() / "l.npy").find('\n') + 1;
  CHECK(header_len % 64 == 0);
}

TEST_CASE("matrices and labels from files") {
  TempDir dir;
  io::write_file(dir.path() / "a.csv", "1,2\n3,4\n");
  io::write_file(dir.path() / "labels.csv", "0\n2\n1\n");
  io::write_file(dir.path() / "frac.csv", "0\n2.5\n");
  io::write_file(dir.path() / "i.npy", numpy_i4());
  CHECK(io::load_matrix(dir.path() / "a.csv").rows() == 2);
  CHECK(io::load_labels(dir.path() / "labels.csv") == std::vector<std::int64_t>{0, 2, 1});
  CHECK(io::load_labels(dir.path() / "i.npy") == std::vector<std::int64_t>{3, 1, 4});
  CHECK(testing::error_code([&] { io::load_labels(dir.path() / "frac.csv"); }) ==
        ErrorCode::UnsupportedDtype);
  CHECK(testing::error_code([&] { io::load_labels(dir.path() / "a.csv"); }) == ErrorCode::ShapeError);
  CHECK(testing::error_code([&] { io::load_matrix(dir.path() / "i.npy"); }) ==
        ErrorCode::UnsupportedDtype);
  CHECK(testing::error_code([&] { io::load_matrix(dir.path() / "missing.npy"); }) == ErrorCode::IoError);
  CHECK(testing::error_code([&] { io::load_matrix(dir.path() / "i.npy", io::MatrixFormat::Csv); }) ==
        ErrorCode::ParseError);
  CHECK(io::parse_format("npy") == io::MatrixFormat::Npy);
  CHECK(testing::error_code([] { io::parse_format("hdf5"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("manifest parsing") {
  const nlohmann::json good = {
      {"schema_version", 1},
      {"stimulus_count", 3},
      {"num_classes", 2},
      {"name", "toy"},
      {"layers",
       {{{"name", "in"}, {"path", "in.csv"}, {"role", "input"}},
        {{"name", "h"}, {"path", "/abs/h.csv"}, {"role", "hidden"}},
        {{"name", "y"}, {"path", "y.csv"}, {"role", "target_labels"}}}}};
  const auto m = io::parse_manifest(good, "/base");
  CHECK(m.name == "toy");
  CHECK(m.stimulus_count == 3);
  CHECK(m.entries.size() == 3);
  CHECK(m.entries[0].path == fs::path("/base/in.csv"));
  CHECK(m.entries[1].path == fs::path("/abs/h.csv"));
  CHECK(m.entries[2].role == io::LayerRole::TargetLabels);

  auto broken = [&](auto&& edit) {
    nlohmann::json doc = good;
    edit(doc);
    return testing::error_code([&] { io::parse_manifest(doc, "/base"); });
  };
  CHECK(broken([](auto& d) { d["schema_version"] = 2; }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d.erase("num_classes"); }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d["layers"][1]["role"] = "input"; }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d["layers"][1]["name"] = "in"; }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d["layers"].erase(2); }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d["layers"].erase(1); }) == ErrorCode::ManifestError);
  CHECK(broken([](auto& d) { d["layers"][0]["role"] = "output"; }) == ErrorCode::ManifestError);
}

TEST_CASE("datasets load in path order and check row counts") {
  TempDir dir;
  io::write_file(dir.path() / "in.csv", "1,0\n0,1\n1,1\n");
  io::write_file(dir.path() / "h1.csv", "1\n2\n4\n");
  io::write_file(dir.path() / "h2.csv", "1,2,3\n3,2,1\n0,0,1\n");
  io::write_file(dir.path() / "y.csv", "0\n1\n1\n");
  nlohmann::json doc = {{"schema_version", 1},
                        {"stimulus_count", 3},
                        {"num_classes", 2},
                        {"layers",
                         {{{"name", "pixels"}, {"path", "in.csv"}, {"role", "input"}},
                          {{"name", "first"}, {"path", "h1.csv"}, {"role", "hidden"}},
                          {{"name", "second"}, {"path", "h2.csv"}, {"role", "hidden"}},
                          {{"name", "y"}, {"path", "y.csv"}, {"role", "target_labels"}}}}};
  io::write_file(dir.path() / "manifest.json", doc.dump());
  const auto inputs = io::load_dataset(io::load_manifest(dir.path() / "manifest.json"));
  CHECK(inputs.input_name == "pixels");
  CHECK(inputs.hidden_names == std::vector<std::string>{"first", "second"});
  CHECK(inputs.hidden[1].cols() == 3);
  CHECK(inputs.labels == std::vector<std::int64_t>{0, 1, 1});

  io::write_file(dir.path() / "h1.csv", "1\n2\n");
  try {
    io::load_dataset(io::load_manifest(dir.path() / "manifest.json"));
    FAIL("expected a manifest error");
  } catch (const repgeom::Error& e) {
    CHECK(e.code() == ErrorCode::ManifestError);
    CHECK(std::string(e.what()).find("first") != std::string::npos);
  }
  io::write_file(dir.path() / "bad.json", "{not json");
  CHECK(testing::error_code([&] { io::load_manifest(dir.path() / "bad.json"); }) == ErrorCode::ParseError);
}

TEST_CASE("bundled synthetic dataset") {
  const auto inputs = io::load_dataset(io::load_manifest(fs::path(REPGEOM_DATA_DIR) / "synthetic/manifest.json"));
  CHECK(inputs.rows() == 200);
  CHECK(inputs.hidden.size() == 5);
  CHECK(inputs.num_classes == 10);
}

TEST_CASE("number formatting round trips") {
  testing::Gen gen(142);
  for (int i = 0; i < 1000; ++i) {
    const double v = gen.normal() * std::pow(10.0, gen.uniform(-300, 300));
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "null");
}

TEST_CASE("json output uses full precision and inline scalar arrays") {
  const nlohmann::json doc = {{"a", 0.1}, {"b", {1, 2, 3}}, {"c", nullptr}};
  const std::string text = io::dump_json(doc);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("[1, 2, 3]") != std::string::npos);
  CHECK(text.find("\"c\": null") != std::string::npos);
  CHECK(nlohmann::json::parse(text) == nlohmann::json::parse(doc.dump()));
}
