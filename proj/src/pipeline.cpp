#include "repgeom/pipeline.hpp"

#include "repgeom/error.hpp"
#include "repgeom/rng.hpp"

#include <cstdio>
#include <sstream>

namespace repgeom {

namespace fs = std::filesystem;
using nlohmann::json;

Index resolve_subsample(Index rows, Index requested) {
  if (requested < 0) fail(ErrorCode::InvalidArgument, "subsample size must be non-negative");
  if (requested == 0) return std::min<Index>(1000, rows);
  if (requested > rows) {
    fail(ErrorCode::TooFewRows, "subsample of " + std::to_string(requested) + " exceeds " +
                                    std::to_string(rows) + " stimuli");
  }
  return requested;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json optional_list(const std::vector<std::optional<double>>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(optional_json(v));
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

std::string kernel_name(KernelKind kind) {
  return kind == KernelKind::Linear ? "linear" : "squared_exponential";
}

}  // namespace

json metric_to_json(const MetricSpec& metric) {
  json out;
  out["name"] = metric_name(metric.kind);
  switch (metric.kind) {
    case MetricKind::AngularCka:
    case MetricKind::AirGram:
      out["kernel"] = kernel_name(metric.kernel.kind);
      if (metric.kernel.kind == KernelKind::SquaredExponential) {
        out["length_scale"] = optional_json(metric.kernel.length_scale);
      }
      break;
    case MetricKind::AngularShape:
    case MetricKind::EuclideanShape:
      out["p"] = metric.p;
      out["alpha"] = metric.alpha;
      break;
    case MetricKind::AirCovariance:
      out["p"] = metric.p;
      break;
  }
  if (metric.kind == MetricKind::AirGram || metric.kind == MetricKind::AirCovariance) {
    out["epsilon"] = metric.epsilon;
  }
  return out;
}

json report_to_json(const GeometryReport& report) {
  json out;
  out["schema_version"] = 1;
  out["metric"] = metric_to_json(report.metric);
  out["labels"] = report.labels;
  json subsample = json::array();
  for (Index i : report.subsample) subsample.push_back(static_cast<long long>(i));
  out["subsample"] = subsample;
  json pairwise = json::array();
  for (Index i = 0; i < report.pairwise.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < report.pairwise.cols(); ++j) row.push_back(report.pairwise(i, j));
    pairwise.push_back(row);
  }
  out["pairwise"] = pairwise;
  out["dist_from_input"] = report.curves.dist_from_input;
  out["dist_to_target"] = report.curves.dist_to_target;
  out["projected_progress"] = report.curves.projected_progress;
  out["internal_angles"] = optional_list(report.internal_angles);
  out["target_angles"] = optional_list(report.target_angles);
  json segments = json::array();
  for (const SegmentStep& seg : report.steps.segments) {
    json s;
    s["from"] = seg.from;
    s["to"] = seg.to;
    s["progress"] = seg.step ? json(seg.step->progress) : json(nullptr);
    s["deviation"] = seg.step ? json(seg.step->deviation) : json(nullptr);
    s["step_norm"] = seg.step ? json(seg.step->step_norm) : json(nullptr);
    segments.push_back(s);
  }
  json pd;
  pd["segments"] = segments;
  pd["progress_mean"] = optional_json(report.steps.progress.mean);
  pd["progress_se"] = optional_json(report.steps.progress.standard_error);
  pd["deviation_mean"] = optional_json(report.steps.deviation.mean);
  pd["deviation_se"] = optional_json(report.steps.deviation.standard_error);
  out["progress_deviation"] = pd;
  return out;
}

std::string pairwise_csv(const Matrix& pairwise, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "label";
  for (Index j = 0; j < pairwise.cols(); ++j) out << ',' << csv_field(labels[static_cast<std::size_t>(j)]);
  out << '\n';
  for (Index i = 0; i < pairwise.rows(); ++i) {
    out << csv_field(labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < pairwise.cols(); ++j) out << ',' << io::format_double(pairwise(i, j));
    out << '\n';
  }
  return out.str();
}

std::string embedding_csv(const PathEmbedding& embedding) {
  std::ostringstream out;
  out << "point_label,x,y,kind\n";
  for (Index i = 0; i < embedding.coords.rows(); ++i) {
    const double x = embedding.coords(i, 0);
    const double y = embedding.coords.cols() > 1 ? embedding.coords(i, 1) : 0.0;
    out << csv_field(embedding.labels[static_cast<std::size_t>(i)]) << ',' << io::format_double(x)
        << ',' << io::format_double(y) << ',' << embedding.kinds[static_cast<std::size_t>(i)] << '\n';
  }
  return out.str();
}

std::string progress_deviation_csv(const GeometryReport& report) {
  std::ostringstream out;
  out << "row,from_layer,to_layer,progress,deviation,step_norm\n";
  for (const SegmentStep& seg : report.steps.segments) {
    out << "segment," << csv_field(report.labels[seg.from]) << ',' << csv_field(report.labels[seg.to])
        << ',';
    if (seg.step) {
      out << io::format_double(seg.step->progress) << ',' << io::format_double(seg.step->deviation)
          << ',' << io::format_double(seg.step->step_norm);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  out << "mean,,," << csv_number(report.steps.progress.mean) << ','
      << csv_number(report.steps.deviation.mean) << ",\n";
  out << "standard_error,,," << csv_number(report.steps.progress.standard_error) << ','
      << csv_number(report.steps.deviation.standard_error) << ",\n";
  return out.str();
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "model,depth_key,quantity,value\n";
  for (const ComparisonRow& r : rows) {
    out << csv_field(r.model) << ',' << io::format_double(r.depth_key) << ',' << r.quantity << ','
        << csv_number(r.value) << '\n';
  }
  return out.str();
}

std::string crossval_csv(const std::vector<QuantityStatistics>& stats) {
  std::ostringstream out;
  out << "quantity,count,mean,stddev,min,max\n";
  for (const QuantityStatistics& s : stats) {
    out << s.quantity << ',' << s.count << ',' << csv_number(s.mean) << ',' << csv_number(s.stddev)
        << ',' << csv_number(s.min) << ',' << csv_number(s.max) << '\n';
  }
  return out.str();
}

namespace {

PathRecord subsampled_path(const PathInputs& inputs, const RunConfig& config) {
  const Index m_sub = resolve_subsample(inputs.rows(), config.subsample);
  auto rows = subsample_indices(inputs.rows(), m_sub, config.seed);
  return build_path(select_rows(inputs, rows), config.metric, rows);
}

PathEmbedding embed_for(const PathRecord& path, const RunConfig& config) {
  EmbeddingConfig ec = config.embedding;
  ec.seed = config.seed;
  return embed_path(path, ec, config.geodesic_samples);
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorCode::IoError, "cannot create output directory " + dir.string());
  }
}

}  // namespace

PathRecord load_path(const fs::path& manifest, const RunConfig& config) {
  config.metric.validate();
  const PathInputs inputs = io::load_dataset(io::load_manifest(manifest), config.format);
  return subsampled_path(inputs, config);
}

OutputLock::OutputLock(const fs::path& dir) : lock_path_(dir / ".repgeom.lock") {
  prepare_dir(dir);
  std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
  if (f == nullptr) {
    if (fs::exists(lock_path_)) {
      fail(ErrorCode::OutputLocked, "output directory is in use (remove " + lock_path_.string() +
                                        " if no other run is active)");
    }
    fail(ErrorCode::IoError, "cannot create lock file " + lock_path_.string());
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(lock_path_, ec);
}

void run_distances(const fs::path& manifest, const RunConfig& config, const fs::path& out_dir) {
  OutputLock lock(out_dir);
  const PathRecord path = load_path(manifest, config);
  const auto points = path.points(config.include_target);
  std::vector<std::string> labels = path.labels;
  if (!config.include_target) labels.pop_back();
  io::write_file(out_dir / "pairwise.csv", pairwise_csv(pairwise_distances(points), labels));
}

void run_path(const fs::path& manifest, const RunConfig& config, const fs::path& out_dir) {
  OutputLock lock(out_dir);
  const PathRecord path = load_path(manifest, config);
  const GeometryReport report = analyze_path(path);
  const PathEmbedding embedding = embed_for(path, config);
  io::write_file(out_dir / "report.json", io::dump_json(report_to_json(report)));
  io::write_file(out_dir / "pairwise.csv", pairwise_csv(report.pairwise, report.labels));
  io::write_file(out_dir / "path_2d.csv", embedding_csv(embedding));
  if (config.write_svg) io::write_file(out_dir / "path.svg", render_svg(embedding));
}

void run_mds(const fs::path& manifest, const RunConfig& config, const fs::path& out_dir) {
  OutputLock lock(out_dir);
  const PathRecord path = load_path(manifest, config);
  const PathEmbedding embedding = embed_for(path, config);
  json meta;
  meta["metric"] = metric_to_json(path.metric);
  meta["labels"] = embedding.labels;
  meta["kinds"] = embedding.kinds;
  meta["stress_trace"] = embedding.mds.stress_trace;
  meta["iterations"] = embedding.mds.iterations;
  std::vector<double> ratio(embedding.explained_variance_ratio.data(),
                            embedding.explained_variance_ratio.data() +
                                embedding.explained_variance_ratio.size());
  meta["explained_variance_ratio"] = ratio;
  io::write_file(out_dir / "path_2d.csv", embedding_csv(embedding));
  io::write_file(out_dir / "mds.json", io::dump_json(meta));
  io::write_file(out_dir / "path.svg", render_svg(embedding));
}

void run_progress_deviation(const fs::path& manifest, const RunConfig& config,
                            const fs::path& out_dir) {
  OutputLock lock(out_dir);
  const PathRecord path = load_path(manifest, config);
  GeometryReport report;
  report.metric = path.metric;
  report.labels = path.labels;
  report.subsample = path.subsample;
  report.steps = progress_deviation(path);
  io::write_file(out_dir / "progress_deviation.csv", progress_deviation_csv(report));
}

void run_compare(const std::vector<fs::path>& manifests, const RunConfig& config,
                 const fs::path& out_dir) {
  if (manifests.empty()) fail(ErrorCode::InvalidArgument, "compare needs at least one manifest");
  OutputLock lock(out_dir);
  std::vector<NamedReport> reports;
  for (const fs::path& manifest : manifests) {
    config.metric.validate();
    const io::DatasetManifest parsed = io::load_manifest(manifest);
    std::string model = parsed.name.empty() ? manifest.parent_path().filename().string() : parsed.name;
    if (model.empty()) model = manifest.stem().string();
    const PathRecord path = subsampled_path(io::load_dataset(parsed, config.format), config);
    reports.push_back({model, analyze_path(path)});
  }
  io::write_file(out_dir / "compare.csv", comparison_csv(compare_paths(reports, config.depth_normalize)));
}

void run_crossval(const fs::path& manifest, const RunConfig& config, const fs::path& out_dir) {
  OutputLock lock(out_dir);
  config.metric.validate();
  const PathInputs inputs = io::load_dataset(io::load_manifest(manifest), config.format);
  const Index m_sub = resolve_subsample(inputs.rows(), config.subsample);
  const auto stats = cross_validate(inputs, config.metric, config.folds, m_sub, config.seed);
  io::write_file(out_dir / "crossval.csv", crossval_csv(stats));
}

}  // namespace repgeom
