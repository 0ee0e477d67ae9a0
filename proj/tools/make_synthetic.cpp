// Writes the bundled synthetic dataset: a Gaussian-mixture input followed by
// five random ReLU layers that drift toward the class labels.
#include "repgeom/io.hpp"
#include "repgeom/rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

using repgeom::Index;
using repgeom::Matrix;

namespace {

Matrix gaussian(repgeom::SplitMix64& rng, Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.normal();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data/synthetic";
  constexpr Index m = 200, input_dim = 48, width = 32, layers = 5;
  constexpr int classes = 10;
  repgeom::SplitMix64 rng(20231);
  std::filesystem::create_directories(dir);

  std::vector<std::int64_t> labels(m);
  Matrix onehot = Matrix::Zero(m, classes);
  for (Index i = 0; i < m; ++i) {
    labels[static_cast<std::size_t>(i)] = i % classes;
    onehot(i, i % classes) = 1.0;
  }
  const Matrix prototypes = gaussian(rng, classes, input_dim);
  Matrix x = 0.8 * onehot * prototypes + gaussian(rng, m, input_dim);
  repgeom::io::write_npy(dir / "input.npy", x);

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["name"] = "synthetic";
  manifest["stimulus_count"] = m;
  manifest["num_classes"] = classes;
  nlohmann::json entries = nlohmann::json::array();
  entries.push_back({{"name", "input"}, {"path", "input.npy"}, {"role", "input"}});
  for (Index l = 1; l <= layers; ++l) {
    const Matrix w = gaussian(rng, x.cols(), width) * std::sqrt(2.0 / static_cast<double>(x.cols()));
    const Matrix readout = gaussian(rng, classes, width);
    x = (x * w).cwiseMax(0.0) + 0.6 * static_cast<double>(l) * onehot * readout;
    const std::string name = "layer" + std::to_string(l);
    repgeom::io::write_npy(dir / (name + ".npy"), x);
    entries.push_back({{"name", name}, {"path", name + ".npy"}, {"role", "hidden"}});
  }
  repgeom::io::write_npy(dir / "labels.npy", labels);
  entries.push_back({{"name", "labels"}, {"path", "labels.npy"}, {"role", "target_labels"}});
  manifest["layers"] = entries;
  repgeom::io::write_file(dir / "manifest.json", repgeom::io::dump_json(manifest));
  std::printf("wrote %s\n", (dir / "manifest.json").string().c_str());
  return 0;
}
