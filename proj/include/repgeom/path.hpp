#pragma once

#include "repgeom/manifold.hpp"
#include "repgeom/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace repgeom {

/// Raw activations of one model, in path order, plus integer class labels.
struct PathInputs {
  std::string input_name = "input";
  Matrix input;
  std::vector<std::string> hidden_names;
  std::vector<Matrix> hidden;
  std::string target_name = "target";
  std::vector<std::int64_t> labels;
  int num_classes = 0;

  Index rows() const { return input.rows(); }
  void validate() const;
};

Matrix one_hot(std::span<const std::int64_t> labels, int num_classes);

struct Subsample {
  std::vector<Matrix> matrices;
  std::vector<Index> indices;
};

/// Applies one shared row selection to every matrix.
Subsample subsample_rows(const std::vector<Matrix>& matrices, Index count, std::uint64_t seed);

PathInputs select_rows(const PathInputs& inputs, std::span<const Index> rows);

struct PathRecord {
  MetricSpec metric;
  ManifoldPoint input;
  std::vector<ManifoldPoint> layers;
  ManifoldPoint target;
  std::vector<std::string> labels;  // input, layers..., target
  std::vector<Index> subsample;

  std::size_t depth() const { return layers.size(); }
  /// input, layers..., and target when `with_target`.
  std::vector<ManifoldPoint> points(bool with_target = true) const;
};

/// Embeds every matrix of `inputs` (already subsampled) under `metric`.
PathRecord build_path(const PathInputs& inputs, const MetricSpec& metric,
                      std::vector<Index> subsample = {});

Matrix pairwise_distances(std::span<const ManifoldPoint> points);

struct ProgressCurves {
  std::vector<double> dist_from_input;
  std::vector<double> dist_to_target;
  std::vector<double> projected_progress;
};

ProgressCurves progress_curves(const PathRecord& path);

/// Angle at each layer between the segments entering and leaving it, along
/// input, layer 1, ..., layer L. Degenerate vertices are nullopt.
std::vector<std::optional<double>> internal_angles(const PathRecord& path);

/// For each segment k -> k+1 of input, layer 1, ..., layer L, the angle at k
/// between the segment and the geodesic from k to the target.
std::vector<std::optional<double>> target_angles(const PathRecord& path);

struct SegmentStep {
  std::size_t from = 0;  // layer positions, 1-based (0 is the input)
  std::size_t to = 0;
  std::optional<StepDecomposition> step;
};

struct MeanAndError {
  std::optional<double> mean;
  std::optional<double> standard_error;
};

struct ProgressDeviation {
  std::vector<SegmentStep> segments;
  MeanAndError progress;
  MeanAndError deviation;
};

/// One decomposition per step between consecutive hidden layers; a model with
/// L layers gives L - 1 segments.
ProgressDeviation progress_deviation(const PathRecord& path);

struct GeometryReport {
  MetricSpec metric;
  std::vector<std::string> labels;
  std::vector<Index> subsample;
  Matrix pairwise;
  ProgressCurves curves;
  std::vector<std::optional<double>> internal_angles;
  std::vector<std::optional<double>> target_angles;
  ProgressDeviation steps;

  std::size_t depth() const { return curves.dist_from_input.size(); }
};

GeometryReport analyze_path(const PathRecord& path);

struct NamedValue {
  std::string quantity;
  std::optional<double> value;
};

/// Every scalar quantity of a report under a stable name, e.g.
/// "pairwise[0][3]" or "target_angle[2]".
std::vector<NamedValue> flatten(const GeometryReport& report);

struct QuantityStatistics {
  std::string quantity;
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> stddev;  // sample (n - 1)
  std::optional<double> min;
  std::optional<double> max;
};

/// Seed for fold f of a cross-validation run: base + f.
std::uint64_t fold_seed(std::uint64_t base, int fold);

std::vector<QuantityStatistics> summarize(const std::vector<std::vector<NamedValue>>& runs);

std::vector<QuantityStatistics> cross_validate(const PathInputs& inputs, const MetricSpec& metric,
                                               int folds, Index subsample, std::uint64_t seed);

struct ComparisonRow {
  std::string model;
  double depth_key = 0.0;
  std::string quantity;
  std::optional<double> value;
};

struct NamedReport {
  std::string model;
  GeometryReport report;
};

/// Long-format table keyed by layer position l, or l / L with
/// `depth_normalize`.
std::vector<ComparisonRow> compare_paths(std::span<const NamedReport> reports, bool depth_normalize);

}  // namespace repgeom
