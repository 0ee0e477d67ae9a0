#pragma once

#include "repgeom/io.hpp"
#include "repgeom/path.hpp"
#include "repgeom/viz.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace repgeom {

struct RunConfig {
  MetricSpec metric = MetricSpec::angular_cka();
  Index subsample = 0;  // 0 selects min(1000, m)
  std::uint64_t seed = 0;
  int folds = 10;
  bool include_target = true;
  bool depth_normalize = true;
  bool write_svg = false;
  int geodesic_samples = 20;
  io::MatrixFormat format = io::MatrixFormat::Auto;
  EmbeddingConfig embedding;
};

Index resolve_subsample(Index rows, Index requested);

nlohmann::json report_to_json(const GeometryReport& report);
nlohmann::json metric_to_json(const MetricSpec& metric);

std::string pairwise_csv(const Matrix& pairwise, const std::vector<std::string>& labels);
std::string embedding_csv(const PathEmbedding& embedding);
std::string progress_deviation_csv(const GeometryReport& report);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string crossval_csv(const std::vector<QuantityStatistics>& stats);

/// Loads the manifest, subsamples and embeds every layer.
PathRecord load_path(const std::filesystem::path& manifest, const RunConfig& config);

/// Holds <dir>/.repgeom.lock for the lifetime of the object.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

// Each subcommand writes its artifacts into `out_dir` (created if needed).
void run_distances(const std::filesystem::path& manifest, const RunConfig& config,
                   const std::filesystem::path& out_dir);
void run_path(const std::filesystem::path& manifest, const RunConfig& config,
              const std::filesystem::path& out_dir);
void run_mds(const std::filesystem::path& manifest, const RunConfig& config,
             const std::filesystem::path& out_dir);
void run_progress_deviation(const std::filesystem::path& manifest, const RunConfig& config,
                            const std::filesystem::path& out_dir);
void run_compare(const std::vector<std::filesystem::path>& manifests, const RunConfig& config,
                 const std::filesystem::path& out_dir);
void run_crossval(const std::filesystem::path& manifest, const RunConfig& config,
                  const std::filesystem::path& out_dir);

}  // namespace repgeom
