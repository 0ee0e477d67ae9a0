#include "repgeom/viz.hpp"

#include "repgeom/error.hpp"
#include "repgeom/io.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace repgeom {

namespace {

void check_dissimilarities(const Matrix& d) {
  if (d.rows() != d.cols() || d.rows() < 2) {
    fail(ErrorCode::InvalidDistanceMatrix, "distance matrix must be square with at least two points");
  }
  if (!all_finite(d)) fail(ErrorCode::InvalidDistanceMatrix, "distance matrix has non-finite entries");
  const double scale = std::max(d.cwiseAbs().maxCoeff(), 1.0);
  for (Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d(i, i)) > 1e-12 * scale) {
      fail(ErrorCode::InvalidDistanceMatrix, "nonzero diagonal at " + std::to_string(i));
    }
    for (Index j = i + 1; j < d.cols(); ++j) {
      if (d(i, j) < 0.0) fail(ErrorCode::InvalidDistanceMatrix, "negative distance");
      if (std::abs(d(i, j) - d(j, i)) > 1e-9 * scale) {
        fail(ErrorCode::InvalidDistanceMatrix, "distance matrix is not symmetric");
      }
    }
  }
}

Matrix row_distances(const Matrix& x) {
  const Index n = x.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = out(j, i) = (x.row(i) - x.row(j)).norm();
    }
  }
  return out;
}

}  // namespace

double raw_stress(const Matrix& dissimilarities, const Matrix& points) {
  const Matrix fitted = row_distances(points);
  double s = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = i + 1; j < points.rows(); ++j) {
      const double r = dissimilarities(i, j) - fitted(i, j);
      s += r * r;
    }
  }
  return s;
}

MdsResult mds_embed(const Matrix& dissimilarities, const EmbeddingConfig& config) {
  check_dissimilarities(dissimilarities);
  const Index n = dissimilarities.rows();
  if (config.mds_dim < 1 || config.mds_dim > n - 1) {
    fail(ErrorCode::InvalidArgument, "mds_dim must lie in [1, " + std::to_string(n - 1) + "]");
  }
  if (config.max_iterations < 0) fail(ErrorCode::InvalidArgument, "max_iterations must be >= 0");
  const Matrix delta = 0.5 * (dissimilarities + dissimilarities.transpose());

  SplitMix64 rng(config.seed);
  Matrix x(n, config.mds_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < x.cols(); ++k) x(i, k) = rng.normal();
  }
  x = center_columns(x);
  // Start at the scale of the data so the first Guttman step is small.
  const Matrix d0 = row_distances(x);
  const double fitted_sum = d0.sum();
  if (fitted_sum > 0.0) x *= delta.sum() / fitted_sum;

  MdsResult out;
  double stress = raw_stress(delta, x);
  out.stress_trace.push_back(stress);
  Matrix b(n, n);
  for (int it = 0; it < config.max_iterations && stress > 0.0; ++it) {
    const Matrix fitted = row_distances(x);
    b.setZero();
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i != j && fitted(i, j) > 0.0) b(i, j) = -delta(i, j) / fitted(i, j);
      }
      b(i, i) = -b.row(i).sum();
    }
    Matrix next = (b * x) / static_cast<double>(n);
    const double next_stress = raw_stress(delta, next);
    ++out.iterations;
    // Majorization never increases stress; guard against rounding noise.
    if (next_stress > stress) break;
    const double previous = stress;
    x = std::move(next);
    stress = next_stress;
    out.stress_trace.push_back(stress);
    if (previous - stress <= config.convergence_tol * previous) break;
  }
  out.points = std::move(x);
  return out;
}

PcaResult pca_project(const Matrix& points, int final_dim) {
  if (final_dim < 1) fail(ErrorCode::InvalidArgument, "final_dim must be positive");
  const Matrix centered = center_columns(points);
  PcaResult out;
  out.coords = Matrix::Zero(points.rows(), final_dim);
  out.explained_variance_ratio = Vector::Zero(final_dim);
  if (points.rows() == 0 || points.cols() == 0) return out;
  const PrincipalAxes pa = principal_axes(centered);
  const double total = pa.variances.sum();
  const double floor = 1e-20 * std::max(total, 0.0);
  const Index k = std::min<Index>(final_dim, pa.axes.cols());
  for (Index j = 0; j < k; ++j) {
    if (total <= 0.0 || pa.variances(j) <= floor) continue;
    out.coords.col(j) = centered * pa.axes.col(j);
    out.explained_variance_ratio(j) = pa.variances(j) / total;
  }
  return out;
}

std::vector<ManifoldPoint> geodesic_polyline(const ManifoldPoint& start, const ManifoldPoint& end,
                                             int samples) {
  if (samples < 2) fail(ErrorCode::InvalidArgument, "a polyline needs at least two samples");
  if (metric_distance(start, end) < kDegenerateTolerance) {
    fail(ErrorCode::DegenerateGeodesic, "polyline endpoints coincide");
  }
  std::vector<ManifoldPoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    if (i == 0) {
      out.push_back(start);
    } else if (i == samples - 1) {
      out.push_back(end);
    } else {
      out.push_back(geodesic_point(start, end, t));
    }
  }
  return out;
}

PathEmbedding embed_path(const PathRecord& path, EmbeddingConfig config, int geodesic_samples) {
  std::vector<ManifoldPoint> points = path.points(true);
  PathEmbedding out;
  out.labels = path.labels;
  out.kinds.push_back("input");
  for (std::size_t l = 0; l < path.depth(); ++l) out.kinds.push_back("layer");
  out.kinds.push_back("target");
  if (geodesic_samples > 0) {
    auto line = geodesic_polyline(path.input, path.target, geodesic_samples);
    for (std::size_t i = 0; i < line.size(); ++i) {
      points.push_back(std::move(line[i]));
      out.labels.push_back("geodesic[" + std::to_string(i) + "]");
      out.kinds.push_back("geodesic");
    }
  }
  const Matrix d = pairwise_distances(points);
  const int n = static_cast<int>(points.size());
  config.mds_dim = std::max(1, std::min(config.mds_dim, n - 1));
  config.final_dim = std::min(config.final_dim, config.mds_dim);
  out.mds = mds_embed(d, config);
  PcaResult pca = pca_project(out.mds.points, config.final_dim);
  out.coords = std::move(pca.coords);
  out.explained_variance_ratio = std::move(pca.explained_variance_ratio);
  return out;
}

std::string render_svg(const PathEmbedding& embedding) {
  constexpr double width = 800.0, height = 600.0, margin = 50.0;
  const Index n = embedding.coords.rows();
  auto coord = [&](Index i, Index k) {
    return k < embedding.coords.cols() ? embedding.coords(i, k) : 0.0;
  };
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (Index i = 0; i < n; ++i) {
    if (i == 0) {
      xmin = xmax = coord(0, 0);
      ymin = ymax = coord(0, 1);
    }
    xmin = std::min(xmin, coord(i, 0));
    xmax = std::max(xmax, coord(i, 0));
    ymin = std::min(ymin, coord(i, 1));
    ymax = std::max(ymax, coord(i, 1));
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double s = std::min((width - 2 * margin), (height - 2 * margin)) / span;
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  auto px = [&](Index i) { return io::format_double(width / 2 + s * (coord(i, 0) - cx)); };
  auto py = [&](Index i) { return io::format_double(height / 2 - s * (coord(i, 1) - cy)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  auto polyline = [&](const std::string& kind_a, const std::string& kind_b, const char* style) {
    std::string pts;
    for (Index i = 0; i < n; ++i) {
      const std::string& k = embedding.kinds[static_cast<std::size_t>(i)];
      if (k != kind_a && k != kind_b) continue;
      if (!pts.empty()) pts += ' ';
      pts += px(i) + "," + py(i);
    }
    if (!pts.empty()) svg << "<polyline points=\"" << pts << "\" fill=\"none\" " << style << "/>\n";
  };
  polyline("geodesic", "", "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  polyline("input", "layer", "stroke=\"#1f77b4\" stroke-width=\"2\"");

  for (Index i = 0; i < n; ++i) {
    const std::string& kind = embedding.kinds[static_cast<std::size_t>(i)];
    if (kind == "geodesic") continue;
    const char* fill = kind == "input" ? "#2ca02c" : kind == "target" ? "#d62728" : "#1f77b4";
    svg << "<circle cx=\"" << px(i) << "\" cy=\"" << py(i) << "\" r=\"6\" fill=\"" << fill
        << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    std::string label = embedding.labels[static_cast<std::size_t>(i)];
    std::string escaped;
    for (char c : label) {
      if (c == '&') escaped += "&amp;";
      else if (c == '<') escaped += "&lt;";
      else if (c == '>') escaped += "&gt;";
      else if (c == '"') escaped += "&quot;";
      else escaped += c;
    }
    svg << "<text x=\"" << px(i) << "\" y=\"" << py(i) << "\" dx=\"8\" dy=\"-8\" "
        << "font-family=\"sans-serif\" font-size=\"12\">" << escaped << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace repgeom
