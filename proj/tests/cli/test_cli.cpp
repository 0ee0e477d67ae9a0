#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string err;
};

class TempDir {
 public:
  TempDir() {
    std::string templ = (fs::temp_directory_path() / "repgeom-cli-XXXXXX").string();
    path_ = mkdtemp(templ.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Result run(const std::string& args, const fs::path& scratch) {
  const fs::path err = scratch / "stderr.txt";
  const std::string cmd = std::string("'") + REPGEOM_CLI + "' " + args + " >/dev/null 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

// Small CSV dataset: 24 stimuli, a 4-column input, `layers` hidden layers.
fs::path write_dataset(const fs::path& dir, int layers) {
  fs::create_directories(dir);
  const int m = 24;
  auto value = [](int i, int j, int l) { return std::sin(0.37 * (i + 1) * (j + 2) + 1.3 * l) + 0.1 * l * j; };
  auto write = [&](const std::string& file, int cols, int l) {
    std::ofstream out(dir / file);
    out.precision(17);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < cols; ++j) out << value(i, j, l) << (j + 1 < cols ? "," : "\n");
    }
  };
  std::string entries = R"({"name": "input", "path": "input.csv", "role": "input"})";
  write("input.csv", 4, 0);
  for (int l = 1; l <= layers; ++l) {
    const std::string file = "h" + std::to_string(l) + ".csv";
    write(file, 3 + l, l);
    entries += R"(, {"name": "h)" + std::to_string(l) + R"(", "path": ")" + file + R"(", "role": "hidden"})";
  }
  {
    std::ofstream y(dir / "y.csv");
    for (int i = 0; i < m; ++i) y << (i % 4) << "\n";
  }
  entries += R"(, {"name": "y", "path": "y.csv", "role": "target_labels"})";
  std::ofstream(dir / "manifest.json") << R"({"schema_version": 1, "stimulus_count": 24, "num_classes": 4, "layers": [)"
                                       << entries << "]}";
  return dir / "manifest.json";
}

// Extracts the number following "key": in a flat JSON fragment.
std::vector<double> json_numbers(const std::string& text, const std::string& key) {
  std::vector<double> out;
  const auto start = text.find("\"" + key + "\"");
  if (start == std::string::npos) return out;
  const auto open = text.find('[', start);
  int depth = 0;
  std::string token;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      ++depth;
    } else if (c == ']' || c == ',') {
      if (!token.empty()) out.push_back(std::stod(token));
      token.clear();
      if (c == ']' && --depth == 0) break;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("help and usage errors") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 2);
  const std::string m = "'" + manifest.string() + "'";
  const std::string out = " --out '" + (tmp.path() / "o").string() + "'";
  CHECK(run("--help", tmp.path()).code == 0);
  CHECK(run("", tmp.path()).code == 2);
  CHECK(run("path " + m, tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --bogus", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --metric cosine", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --tau 2", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --metric angular-cka --alpha 0.5", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --metric air-gram --p 5", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --folds 3", tmp.path()).code == 2);
  CHECK(run("crossval " + m + out + " --folds 1", tmp.path()).code == 2);
  CHECK(run("distances " + m + out + " --svg", tmp.path()).code == 2);
  CHECK(run("path " + m + out + " --metric angular-shape --alpha 1.5", tmp.path()).code == 2);
  CHECK(run("path '" + (tmp.path() / "missing.json").string() + "'" + out, tmp.path()).code == 2);
}

TEST_CASE("computation errors exit with one and a structured message") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 2);
  const Result r = run("path '" + manifest.string() + "' --out '" + (tmp.path() / "o").string() +
                           "' --subsample 25",
                       tmp.path());
  CHECK(r.code == 1);
  CHECK(r.err.rfind("repgeom: TooFewRows: ", 0) == 0);

  std::ofstream(tmp.path() / "d/h2.csv") << "1,2\n3,4\n";
  const Result short_layer =
      run("distances '" + manifest.string() + "' --out '" + (tmp.path() / "o2").string() + "'", tmp.path());
  CHECK(short_layer.code == 1);
  CHECK(short_layer.err.find("ManifestError") != std::string::npos);
  CHECK(short_layer.err.find("h2") != std::string::npos);
}

TEST_CASE("distances with and without the target") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 2);
  const std::string base = "distances '" + manifest.string() + "' --out ";
  REQUIRE(run(base + "'" + (tmp.path() / "a").string() + "'", tmp.path()).code == 0);
  const auto full = read_csv(tmp.path() / "a/pairwise.csv");
  CHECK(full.size() == 5);
  CHECK(full[0].size() == 5);
  REQUIRE(run(base + "'" + (tmp.path() / "b").string() + "' --no-target", tmp.path()).code == 0);
  const auto without = read_csv(tmp.path() / "b/pairwise.csv");
  CHECK(without.size() == 4);
  CHECK(without[0] == std::vector<std::string>{"label", "input", "h1", "h2"});
}

TEST_CASE("every metric and subcommand runs") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 3);
  const std::string m = "'" + manifest.string() + "'";
  int k = 0;
  for (const char* metric : {"angular-cka --kernel se", "angular-shape --p 8 --alpha 0.5",
                             "euclidean-shape --p 8", "air-gram --epsilon 0.1", "air-cov --p 6"}) {
    CAPTURE(metric);
    const std::string out = " --out '" + (tmp.path() / ("m" + std::to_string(k++))).string() + "'";
    CHECK(run("path " + m + out + " --svg --metric " + metric, tmp.path()).code == 0);
  }
  const std::string out = " --out '" + (tmp.path() / "sub").string() + "'";
  CHECK(run("mds " + m + out + " --mds-dim 4 --geodesic-samples 5", tmp.path()).code == 0);
  CHECK(run("progress-deviation " + m + out, tmp.path()).code == 0);
  CHECK(run("compare " + m + " " + m + out + " --no-depth-normalize", tmp.path()).code == 0);
  CHECK(run("crossval " + m + out + " --folds 3 --subsample 20", tmp.path()).code == 0);
  for (const char* f : {"path_2d.csv", "mds.json", "path.svg", "progress_deviation.csv", "compare.csv",
                        "crossval.csv"}) {
    CHECK(fs::exists(tmp.path() / "sub" / f));
  }
  const auto compare = read_csv(tmp.path() / "sub/compare.csv");
  CHECK(compare[1][1] == "1");
}

TEST_CASE("fixed seed gives identical artifacts") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 3);
  for (const char* dir : {"a", "b"}) {
    REQUIRE(run("path '" + manifest.string() + "' --subsample 18 --seed 9 --svg --out '" +
                    (tmp.path() / dir).string() + "'",
                tmp.path())
                .code == 0);
  }
  for (const char* f : {"report.json", "pairwise.csv", "path_2d.csv", "path.svg"}) {
    CHECK(slurp(tmp.path() / "a" / f) == slurp(tmp.path() / "b" / f));
  }
}

TEST_CASE("two-fold crossval matches two path runs with the fold seeds") {
  TempDir tmp;
  const fs::path manifest = write_dataset(tmp.path() / "d", 2);
  const std::string m = "'" + manifest.string() + "'";
  REQUIRE(run("crossval " + m + " --folds 2 --subsample 16 --seed 40 --out '" + (tmp.path() / "cv").string() + "'",
              tmp.path())
              .code == 0);
  std::vector<std::vector<double>> pairwise;
  for (int f = 0; f < 2; ++f) {
    const fs::path out = tmp.path() / ("p" + std::to_string(f));
    REQUIRE(run("path " + m + " --subsample 16 --seed " + std::to_string(40 + f) + " --out '" + out.string() + "'",
                tmp.path())
                .code == 0);
    pairwise.push_back(json_numbers(slurp(out / "report.json"), "pairwise"));
  }
  std::map<std::string, std::vector<std::string>> stats;
  for (const auto& row : read_csv(tmp.path() / "cv/crossval.csv")) stats[row[0]] = row;
  const std::size_t n = 4;
  REQUIRE(pairwise[0].size() == n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& row = stats["pairwise[" + std::to_string(i) + "][" + std::to_string(j) + "]"];
      REQUIRE(row.size() == 6);
      const double a = pairwise[0][i * n + j];
      const double b = pairwise[1][i * n + j];
      CHECK(row[1] == "2");
      CHECK(std::abs(std::stod(row[2]) - (a + b) / 2) < 1e-15);
      CHECK(std::abs(std::stod(row[3]) - std::abs(a - b) / std::sqrt(2.0)) < 1e-15);
    }
  }
}

TEST_CASE("bundled synthetic dataset runs end to end") {
  TempDir tmp;
  const std::string manifest = std::string(REPGEOM_DATA_DIR) + "/synthetic/manifest.json";
  REQUIRE(run("path '" + manifest + "' --out '" + (tmp.path() / "s").string() + "'", tmp.path()).code == 0);
  const std::string report = slurp(tmp.path() / "s/report.json");
  CHECK(json_numbers(report, "pairwise").size() == 49);
  CHECK(json_numbers(report, "subsample").size() == 200);
}
