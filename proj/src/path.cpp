#include "repgeom/path.hpp"

#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/rng.hpp"

#include <cmath>
#include <string>

namespace repgeom {

void PathInputs::validate() const {
  const Index m = input.rows();
  if (m < 2) fail(ErrorCode::TooFewRows, "need at least two stimuli");
  if (hidden.empty()) fail(ErrorCode::InvalidArgument, "a path needs at least one hidden layer");
  if (hidden_names.size() != hidden.size()) {
    fail(ErrorCode::InvalidArgument, "every hidden layer needs a name");
  }
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    if (hidden[i].rows() != m) {
      fail(ErrorCode::ShapeMismatch, "layer '" + hidden_names[i] + "' has " +
                                         std::to_string(hidden[i].rows()) + " rows, expected " +
                                         std::to_string(m));
    }
  }
  if (static_cast<Index>(labels.size()) != m) {
    fail(ErrorCode::ShapeMismatch, "label count does not match the stimulus count");
  }
  if (num_classes < 1) fail(ErrorCode::InvalidArgument, "num_classes must be positive");
}

Matrix one_hot(std::span<const std::int64_t> labels, int num_classes) {
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      fail(ErrorCode::InvalidArgument, "label " + std::to_string(labels[i]) + " outside [0, " +
                                           std::to_string(num_classes) + ")");
    }
    out(static_cast<Index>(i), static_cast<Index>(labels[i])) = 1.0;
  }
  return out;
}

Subsample subsample_rows(const std::vector<Matrix>& matrices, Index count, std::uint64_t seed) {
  if (matrices.empty()) fail(ErrorCode::InvalidArgument, "nothing to subsample");
  const Index rows = matrices.front().rows();
  for (const Matrix& m : matrices) {
    if (m.rows() != rows) fail(ErrorCode::ShapeMismatch, "matrices disagree on row count");
  }
  Subsample out;
  out.indices = subsample_indices(rows, count, seed);
  for (const Matrix& m : matrices) out.matrices.push_back(m(out.indices, Eigen::all));
  return out;
}

PathInputs select_rows(const PathInputs& inputs, std::span<const Index> rows) {
  std::vector<Index> idx(rows.begin(), rows.end());
  PathInputs out;
  out.input_name = inputs.input_name;
  out.input = inputs.input(idx, Eigen::all);
  out.hidden_names = inputs.hidden_names;
  for (const Matrix& h : inputs.hidden) out.hidden.push_back(h(idx, Eigen::all));
  out.target_name = inputs.target_name;
  out.num_classes = inputs.num_classes;
  for (Index r : idx) out.labels.push_back(inputs.labels[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<ManifoldPoint> PathRecord::points(bool with_target) const {
  std::vector<ManifoldPoint> out;
  out.reserve(layers.size() + 2);
  out.push_back(input);
  out.insert(out.end(), layers.begin(), layers.end());
  if (with_target) out.push_back(target);
  return out;
}

PathRecord build_path(const PathInputs& inputs, const MetricSpec& metric, std::vector<Index> subsample) {
  inputs.validate();
  PathRecord path;
  path.metric = metric;
  path.input = embed(inputs.input, metric);
  for (const Matrix& h : inputs.hidden) path.layers.push_back(embed(h, metric));
  path.target = embed(one_hot(inputs.labels, inputs.num_classes), metric);
  path.labels.push_back(inputs.input_name);
  path.labels.insert(path.labels.end(), inputs.hidden_names.begin(), inputs.hidden_names.end());
  path.labels.push_back(inputs.target_name);
  path.subsample = std::move(subsample);
  return path;
}

Matrix pairwise_distances(std::span<const ManifoldPoint> points) {
  const auto n = static_cast<Index>(points.size());
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = metric_distance(points[static_cast<std::size_t>(i)],
                                       points[static_cast<std::size_t>(j)]);
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

ProgressCurves progress_curves(const PathRecord& path) {
  const double span = metric_distance(path.input, path.target);
  if (span < kDegenerateTolerance) {
    fail(ErrorCode::DegenerateGeodesic, "input and target coincide; projected progress is undefined");
  }
  ProgressCurves out;
  for (const ManifoldPoint& layer : path.layers) {
    out.dist_from_input.push_back(metric_distance(path.input, layer));
    out.dist_to_target.push_back(metric_distance(layer, path.target));
    out.projected_progress.push_back(project_to_geodesic(layer, path.input, path.target).t_star * span);
  }
  return out;
}

namespace {

template <class F>
std::optional<double> unless_degenerate(F&& compute, ErrorCode degenerate) {
  try {
    return compute();
  } catch (const Error& e) {
    if (e.code() == degenerate) return std::nullopt;
    throw;
  }
}

MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  out.mean = mean;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  out.standard_error = sd / std::sqrt(static_cast<double>(values.size()));
  return out;
}

}  // namespace

std::vector<std::optional<double>> internal_angles(const PathRecord& path) {
  const auto chain = path.points(false);
  std::vector<std::optional<double>> out;
  for (std::size_t k = 1; k + 1 < chain.size(); ++k) {
    out.push_back(unless_degenerate([&] { return angle_at(chain[k - 1], chain[k], chain[k + 1]); },
                                    ErrorCode::DegenerateAngle));
  }
  return out;
}

std::vector<std::optional<double>> target_angles(const PathRecord& path) {
  const auto chain = path.points(false);
  std::vector<std::optional<double>> out;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    out.push_back(unless_degenerate([&] { return angle_at(chain[k + 1], chain[k], path.target); },
                                    ErrorCode::DegenerateAngle));
  }
  return out;
}

ProgressDeviation progress_deviation(const PathRecord& path) {
  ProgressDeviation out;
  std::vector<double> progress;
  std::vector<double> deviation;
  for (std::size_t l = 0; l + 1 < path.layers.size(); ++l) {
    SegmentStep seg;
    seg.from = l + 1;
    seg.to = l + 2;
    try {
      seg.step = decompose_step(path.layers[l], path.layers[l + 1], path.target);
      progress.push_back(seg.step->progress);
      deviation.push_back(seg.step->deviation);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateGeodesic) throw;
    }
    out.segments.push_back(seg);
  }
  out.progress = mean_and_error(progress);
  out.deviation = mean_and_error(deviation);
  return out;
}

GeometryReport analyze_path(const PathRecord& path) {
  GeometryReport report;
  report.metric = path.metric;
  report.labels = path.labels;
  report.subsample = path.subsample;
  const auto points = path.points(true);
  report.pairwise = pairwise_distances(points);
  report.curves = progress_curves(path);
  report.internal_angles = internal_angles(path);
  report.target_angles = target_angles(path);
  report.steps = progress_deviation(path);
  return report;
}

std::vector<NamedValue> flatten(const GeometryReport& report) {
  std::vector<NamedValue> out;
  auto idx = [](std::size_t i) { return "[" + std::to_string(i) + "]"; };
  for (Index i = 0; i < report.pairwise.rows(); ++i) {
    for (Index j = i + 1; j < report.pairwise.cols(); ++j) {
      out.push_back({"pairwise" + idx(static_cast<std::size_t>(i)) + idx(static_cast<std::size_t>(j)),
                     report.pairwise(i, j)});
    }
  }
  for (std::size_t l = 0; l < report.depth(); ++l) {
    out.push_back({"dist_from_input" + idx(l + 1), report.curves.dist_from_input[l]});
    out.push_back({"dist_to_target" + idx(l + 1), report.curves.dist_to_target[l]});
    out.push_back({"projected_progress" + idx(l + 1), report.curves.projected_progress[l]});
  }
  for (std::size_t k = 0; k < report.internal_angles.size(); ++k) {
    out.push_back({"internal_angle" + idx(k + 1), report.internal_angles[k]});
  }
  for (std::size_t k = 0; k < report.target_angles.size(); ++k) {
    out.push_back({"target_angle" + idx(k), report.target_angles[k]});
  }
  for (const SegmentStep& seg : report.steps.segments) {
    std::optional<double> p, d;
    if (seg.step) {
      p = seg.step->progress;
      d = seg.step->deviation;
    }
    out.push_back({"progress" + idx(seg.from), p});
    out.push_back({"deviation" + idx(seg.from), d});
  }
  out.push_back({"progress_mean", report.steps.progress.mean});
  out.push_back({"progress_se", report.steps.progress.standard_error});
  out.push_back({"deviation_mean", report.steps.deviation.mean});
  out.push_back({"deviation_se", report.steps.deviation.standard_error});
  return out;
}

std::uint64_t fold_seed(std::uint64_t base, int fold) {
  return base + static_cast<std::uint64_t>(fold);
}

std::vector<QuantityStatistics> summarize(const std::vector<std::vector<NamedValue>>& runs) {
  std::vector<QuantityStatistics> out;
  if (runs.empty()) return out;
  for (std::size_t q = 0; q < runs.front().size(); ++q) {
    QuantityStatistics stats;
    stats.quantity = runs.front()[q].quantity;
    std::vector<double> values;
    for (const auto& run : runs) {
      if (run.size() != runs.front().size() || run[q].quantity != stats.quantity) {
        fail(ErrorCode::MetricMismatch, "runs produced different quantity layouts");
      }
      if (run[q].value) values.push_back(*run[q].value);
    }
    stats.count = values.size();
    if (!values.empty()) {
      double sum = 0.0, lo = values.front(), hi = values.front();
      for (double v : values) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double mean = sum / static_cast<double>(values.size());
      stats.mean = mean;
      stats.min = lo;
      stats.max = hi;
      if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        stats.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
      }
    }
    out.push_back(std::move(stats));
  }
  return out;
}

std::vector<QuantityStatistics> cross_validate(const PathInputs& inputs, const MetricSpec& metric,
                                               int folds, Index subsample, std::uint64_t seed) {
  inputs.validate();
  if (folds < 2) fail(ErrorCode::InvalidArgument, "cross-validation needs at least two folds");
  if (inputs.rows() < subsample) {
    fail(ErrorCode::TooFewRows, "subsample of " + std::to_string(subsample) + " exceeds " +
                                    std::to_string(inputs.rows()) + " stimuli");
  }
  std::vector<std::vector<NamedValue>> runs;
  for (int f = 0; f < folds; ++f) {
    auto rows = subsample_indices(inputs.rows(), subsample, fold_seed(seed, f));
    PathRecord path = build_path(select_rows(inputs, rows), metric, rows);
    runs.push_back(flatten(analyze_path(path)));
  }
  return summarize(runs);
}

std::vector<ComparisonRow> compare_paths(std::span<const NamedReport> reports, bool depth_normalize) {
  std::vector<ComparisonRow> rows;
  if (reports.empty()) return rows;
  const GeometryReport& first = reports.front().report;
  for (const NamedReport& named : reports) {
    if (!(named.report.metric == first.metric)) {
      fail(ErrorCode::MetricMismatch, "model '" + named.model + "' was analyzed with " +
                                          named.report.metric.describe() + ", expected " +
                                          first.metric.describe());
    }
    if (named.report.subsample != first.subsample) {
      fail(ErrorCode::MetricMismatch,
           "model '" + named.model + "' was analyzed on a different stimulus subsample");
    }
  }
  for (const NamedReport& named : reports) {
    const GeometryReport& r = named.report;
    const double depth = static_cast<double>(r.depth());
    auto key = [&](std::size_t position) {
      return depth_normalize ? static_cast<double>(position) / depth : static_cast<double>(position);
    };
    auto emit = [&](std::size_t position, const char* quantity, std::optional<double> value) {
      rows.push_back({named.model, key(position), quantity, value});
    };
    for (std::size_t l = 0; l < r.depth(); ++l) {
      emit(l + 1, "dist_from_input", r.curves.dist_from_input[l]);
      emit(l + 1, "dist_to_target", r.curves.dist_to_target[l]);
      emit(l + 1, "projected_progress", r.curves.projected_progress[l]);
    }
    for (std::size_t k = 0; k < r.internal_angles.size(); ++k) {
      emit(k + 1, "internal_angle", r.internal_angles[k]);
    }
    for (std::size_t k = 0; k < r.target_angles.size(); ++k) {
      emit(k + 1, "target_angle", r.target_angles[k]);
    }
    for (const SegmentStep& seg : r.steps.segments) {
      emit(seg.to, "progress", seg.step ? std::optional(seg.step->progress) : std::nullopt);
      emit(seg.to, "deviation", seg.step ? std::optional(seg.step->deviation) : std::nullopt);
    }
  }
  return rows;
}

}  // namespace repgeom
