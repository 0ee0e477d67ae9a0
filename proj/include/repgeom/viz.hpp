#pragma once

#include "repgeom/path.hpp"
#include "repgeom/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repgeom {

struct EmbeddingConfig {
  int mds_dim = 15;
  int final_dim = 2;
  int max_iterations = 300;
  double convergence_tol = 1e-9;
  std::uint64_t seed = 0;
};

/// Σ_{i<j} (δ_ij − |x_i − x_j|)².
double raw_stress(const Matrix& dissimilarities, const Matrix& points);

struct MdsResult {
  Matrix points;
  std::vector<double> stress_trace;  // initial configuration first
  int iterations = 0;
};

/// SMACOF majorization of raw stress from a SplitMix64 random start.
MdsResult mds_embed(const Matrix& dissimilarities, const EmbeddingConfig& config);

struct PcaResult {
  Matrix coords;
  Vector explained_variance_ratio;
};

PcaResult pca_project(const Matrix& points, int final_dim);

/// Points at t = i / (samples − 1) along the geodesic from start to end.
std::vector<ManifoldPoint> geodesic_polyline(const ManifoldPoint& start, const ManifoldPoint& end,
                                             int samples);

struct PathEmbedding {
  std::vector<std::string> labels;
  std::vector<std::string> kinds;  // input, layer, target, geodesic
  Matrix coords;
  MdsResult mds;
  Vector explained_variance_ratio;
};

/// Path points plus the input-to-target geodesic polyline, embedded together
/// by MDS and then PCA.
PathEmbedding embed_path(const PathRecord& path, EmbeddingConfig config, int geodesic_samples = 20);

std::string render_svg(const PathEmbedding& embedding);

}  // namespace repgeom
