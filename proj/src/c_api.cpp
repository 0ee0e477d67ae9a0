#include "repgeom/repgeom.h"

#include "repgeom/error.hpp"
#include "repgeom/io.hpp"
#include "repgeom/manifold.hpp"
#include "repgeom/pipeline.hpp"
#include "repgeom/viz.hpp"

#include <new>
#include <string>

struct rg_matrix {
  repgeom::Matrix value;
};

struct rg_point {
  repgeom::ManifoldPoint value;
};

struct rg_tangent {
  repgeom::TangentVector value;
};

namespace {

using repgeom::ErrorCode;

thread_local std::string last_error;

rg_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return RG_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonFinite: return RG_ERR_NON_FINITE;
    case ErrorCode::IncomparablePoints: return RG_ERR_INCOMPARABLE_POINTS;
    case ErrorCode::DegenerateGeodesic: return RG_ERR_DEGENERATE_GEODESIC;
    case ErrorCode::AntipodalPoints: return RG_ERR_ANTIPODAL_POINTS;
    case ErrorCode::TangentBaseMismatch: return RG_ERR_TANGENT_BASE_MISMATCH;
    case ErrorCode::InvalidTangent: return RG_ERR_INVALID_TANGENT;
    case ErrorCode::DegenerateAngle: return RG_ERR_DEGENERATE_ANGLE;
    case ErrorCode::ZeroAfterCentering: return RG_ERR_ZERO_AFTER_CENTERING;
    case ErrorCode::RankDeficientWhitening: return RG_ERR_RANK_DEFICIENT_WHITENING;
    case ErrorCode::ShapeMismatch: return RG_ERR_SHAPE_MISMATCH;
    case ErrorCode::ZeroNormShape: return RG_ERR_ZERO_NORM_SHAPE;
    case ErrorCode::SingularSylvester: return RG_ERR_SINGULAR_SYLVESTER;
    case ErrorCode::NotPositiveDefinite: return RG_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::IllConditioned: return RG_ERR_ILL_CONDITIONED;
    case ErrorCode::TooFewRows: return RG_ERR_TOO_FEW_ROWS;
    case ErrorCode::MetricMismatch: return RG_ERR_METRIC_MISMATCH;
    case ErrorCode::InvalidDistanceMatrix: return RG_ERR_INVALID_DISTANCE_MATRIX;
    case ErrorCode::UnsupportedDtype: return RG_ERR_UNSUPPORTED_DTYPE;
    case ErrorCode::ShapeError: return RG_ERR_SHAPE_ERROR;
    case ErrorCode::ParseError: return RG_ERR_PARSE_ERROR;
    case ErrorCode::ManifestError: return RG_ERR_MANIFEST_ERROR;
    case ErrorCode::IoError: return RG_ERR_IO_ERROR;
    case ErrorCode::OutputLocked: return RG_ERR_OUTPUT_LOCKED;
  }
  return RG_ERR_INTERNAL;
}

template <class F>
rg_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RG_OK;
  } catch (const repgeom::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RG_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RG_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) repgeom::fail(ErrorCode::InvalidArgument, std::string(name) + " is null");
}

repgeom::MetricSpec to_spec(const rg_metric_options& o) {
  repgeom::KernelSpec kernel;
  if (o.kernel == RG_KERNEL_SQUARED_EXPONENTIAL) {
    kernel = repgeom::KernelSpec::squared_exponential();
    if (o.length_scale > 0.0) kernel.length_scale = o.length_scale;
  } else if (o.kernel != RG_KERNEL_LINEAR) {
    repgeom::fail(ErrorCode::InvalidArgument, "unknown kernel kind");
  }
  repgeom::MetricSpec spec;
  switch (o.metric) {
    case RG_METRIC_ANGULAR_CKA:
      spec = repgeom::MetricSpec::angular_cka(kernel);
      break;
    case RG_METRIC_ANGULAR_SHAPE:
    case RG_METRIC_EUCLIDEAN_SHAPE: {
      repgeom::ShapeParams sp;
      sp.p = o.p;
      sp.alpha = o.alpha;
      sp.variant = o.metric == RG_METRIC_ANGULAR_SHAPE ? repgeom::ShapeVariant::Angular
                                                       : repgeom::ShapeVariant::Euclidean;
      spec = repgeom::MetricSpec::shape(sp);
      break;
    }
    case RG_METRIC_AIR_GRAM:
    case RG_METRIC_AIR_COVARIANCE: {
      repgeom::AirParams ap;
      ap.embedding = o.metric == RG_METRIC_AIR_GRAM ? repgeom::AirEmbedding::GramKernelRidge
                                                    : repgeom::AirEmbedding::CovarianceRidge;
      ap.kernel = kernel;
      ap.p = o.p;
      ap.epsilon = o.epsilon;
      spec = repgeom::MetricSpec::air(ap);
      break;
    }
    default:
      repgeom::fail(ErrorCode::InvalidArgument, "unknown metric kind");
  }
  spec.validate();
  return spec;
}

repgeom::RunConfig to_config(const rg_run_options* o) {
  rg_run_options defaults;
  if (o == nullptr) {
    rg_run_options_default(&defaults);
    o = &defaults;
  }
  repgeom::RunConfig c;
  c.metric = to_spec(o->metric);
  c.subsample = static_cast<repgeom::Index>(o->subsample);
  c.seed = o->seed;
  c.folds = o->folds;
  c.include_target = o->include_target != 0;
  c.depth_normalize = o->depth_normalize != 0;
  c.write_svg = o->write_svg != 0;
  c.geodesic_samples = o->geodesic_samples;
  if (o->mds_dim > 0) c.embedding.mds_dim = o->mds_dim;
  switch (o->format) {
    case RG_FORMAT_AUTO: c.format = repgeom::io::MatrixFormat::Auto; break;
    case RG_FORMAT_NPY: c.format = repgeom::io::MatrixFormat::Npy; break;
    case RG_FORMAT_CSV: c.format = repgeom::io::MatrixFormat::Csv; break;
    default: repgeom::fail(ErrorCode::InvalidArgument, "unknown format");
  }
  return c;
}

void copy_out(const repgeom::Matrix& m, double* out, size_t capacity) {
  require(out, "out");
  const auto needed = static_cast<size_t>(m.size());
  if (capacity < needed) {
    repgeom::fail(ErrorCode::InvalidArgument,
                  "buffer holds " + std::to_string(capacity) + " values, need " + std::to_string(needed));
  }
  size_t k = 0;
  for (repgeom::Index i = 0; i < m.rows(); ++i) {
    for (repgeom::Index j = 0; j < m.cols(); ++j) out[k++] = m(i, j);
  }
}

repgeom::Matrix from_row_major(const double* data, size_t rows, size_t cols) {
  repgeom::Matrix m(static_cast<repgeom::Index>(rows), static_cast<repgeom::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      m(static_cast<repgeom::Index>(i), static_cast<repgeom::Index>(j)) = data[i * cols + j];
    }
  }
  return m;
}

}  // namespace

extern "C" {

const char* rg_version(void) { return "0.1.0"; }

const char* rg_last_error(void) { return last_error.c_str(); }

const char* rg_status_name(rg_status status) {
  switch (status) {
    case RG_OK: return "Ok";
    case RG_ERR_INTERNAL: return "Internal";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(ErrorCode::OutputLocked); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    if (to_status(code) == status) return repgeom::error_code_name(code).data();
  }
  return "Unknown";
}

void rg_metric_options_default(rg_metric_options* options) {
  if (options == nullptr) return;
  options->metric = RG_METRIC_ANGULAR_CKA;
  options->kernel = RG_KERNEL_LINEAR;
  options->length_scale = 0.0;
  options->p = 100;
  options->alpha = 0.0;
  options->epsilon = 0.05;
}

void rg_run_options_default(rg_run_options* options) {
  if (options == nullptr) return;
  rg_metric_options_default(&options->metric);
  options->subsample = 0;
  options->seed = 0;
  options->folds = 10;
  options->include_target = 1;
  options->depth_normalize = 1;
  options->write_svg = 0;
  options->geodesic_samples = 20;
  options->mds_dim = 15;
  options->format = RG_FORMAT_AUTO;
}

rg_status rg_matrix_create(const double* data, size_t rows, size_t cols, rg_matrix** out) {
  return guarded([&] {
    require(out, "out");
    if (rows * cols > 0) require(data, "data");
    *out = new rg_matrix{from_row_major(data, rows, cols)};
  });
}

rg_status rg_matrix_load(const char* path, rg_format format, rg_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    repgeom::io::MatrixFormat f = repgeom::io::MatrixFormat::Auto;
    if (format == RG_FORMAT_NPY) f = repgeom::io::MatrixFormat::Npy;
    if (format == RG_FORMAT_CSV) f = repgeom::io::MatrixFormat::Csv;
    *out = new rg_matrix{repgeom::io::load_matrix(path, f)};
  });
}

rg_status rg_matrix_shape(const rg_matrix* matrix, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(matrix, "matrix");
    if (rows) *rows = static_cast<size_t>(matrix->value.rows());
    if (cols) *cols = static_cast<size_t>(matrix->value.cols());
  });
}

rg_status rg_matrix_copy(const rg_matrix* matrix, double* out, size_t capacity) {
  return guarded([&] {
    require(matrix, "matrix");
    copy_out(matrix->value, out, capacity);
  });
}

void rg_matrix_free(rg_matrix* matrix) { delete matrix; }

rg_status rg_embed(const rg_matrix* representation, const rg_metric_options* options, rg_point** out) {
  return guarded([&] {
    require(representation, "representation");
    require(out, "out");
    rg_metric_options defaults;
    rg_metric_options_default(&defaults);
    const repgeom::MetricSpec spec = to_spec(options ? *options : defaults);
    *out = new rg_point{repgeom::embed(representation->value, spec)};
  });
}

rg_status rg_point_shape(const rg_point* point, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(point, "point");
    if (rows) *rows = static_cast<size_t>(point->value.payload().rows());
    if (cols) *cols = static_cast<size_t>(point->value.payload().cols());
  });
}

rg_status rg_point_copy(const rg_point* point, double* out, size_t capacity) {
  return guarded([&] {
    require(point, "point");
    copy_out(point->value.payload(), out, capacity);
  });
}

void rg_point_free(rg_point* point) { delete point; }

rg_status rg_distance(const rg_point* p, const rg_point* q, double* out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    *out = repgeom::metric_distance(p->value, q->value);
  });
}

rg_status rg_geodesic(const rg_point* p, const rg_point* q, double t, rg_point** out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    *out = new rg_point{repgeom::geodesic_point(p->value, q->value, t)};
  });
}

rg_status rg_log_map(const rg_point* p, const rg_point* q, rg_tangent** out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    *out = new rg_tangent{repgeom::log_map(p->value, q->value)};
  });
}

rg_status rg_exp_map(const rg_point* p, const rg_tangent* w, rg_point** out) {
  return guarded([&] {
    require(p, "p");
    require(w, "w");
    require(out, "out");
    *out = new rg_point{repgeom::exp_map(p->value, w->value)};
  });
}

rg_status rg_tangent_scale(const rg_tangent* w, double factor, rg_tangent** out) {
  return guarded([&] {
    require(w, "w");
    require(out, "out");
    *out = new rg_tangent{repgeom::scaled(w->value, factor)};
  });
}

rg_status rg_tangent_inner(const rg_tangent* u, const rg_tangent* v, double* out) {
  return guarded([&] {
    require(u, "u");
    require(v, "v");
    require(out, "out");
    *out = repgeom::tangent_inner(u->value, v->value);
  });
}

rg_status rg_tangent_norm(const rg_tangent* w, double* out) {
  return guarded([&] {
    require(w, "w");
    require(out, "out");
    *out = repgeom::tangent_norm(w->value);
  });
}

void rg_tangent_free(rg_tangent* w) { delete w; }

rg_status rg_angle(const rg_point* a, const rg_point* b, const rg_point* c, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(c, "c");
    require(out, "out");
    *out = repgeom::angle_at(a->value, b->value, c->value);
  });
}

rg_status rg_project(const rg_point* query, const rg_point* start, const rg_point* end,
                     double* t_star, double* residual, rg_point** projected) {
  return guarded([&] {
    require(query, "query");
    require(start, "start");
    require(end, "end");
    auto r = repgeom::project_to_geodesic(query->value, start->value, end->value);
    if (t_star) *t_star = r.t_star;
    if (residual) *residual = r.residual_distance;
    if (projected) *projected = new rg_point{std::move(r.projected_point)};
  });
}

rg_status rg_decompose_step(const rg_point* from, const rg_point* to, const rg_point* target,
                            double* progress, double* deviation) {
  return guarded([&] {
    require(from, "from");
    require(to, "to");
    require(target, "target");
    const auto s = repgeom::decompose_step(from->value, to->value, target->value);
    if (progress) *progress = s.progress;
    if (deviation) *deviation = s.deviation;
  });
}

rg_status rg_mds(const double* dissimilarities, size_t n, int mds_dim, int final_dim, uint64_t seed,
                 double* coords, double* final_stress) {
  return guarded([&] {
    require(dissimilarities, "dissimilarities");
    require(coords, "coords");
    repgeom::EmbeddingConfig config;
    config.mds_dim = mds_dim;
    config.final_dim = final_dim;
    config.seed = seed;
    if (final_dim < 1 || final_dim > mds_dim) {
      repgeom::fail(ErrorCode::InvalidArgument, "final_dim must lie in [1, mds_dim]");
    }
    const auto mds = repgeom::mds_embed(from_row_major(dissimilarities, n, n), config);
    const auto pca = repgeom::pca_project(mds.points, final_dim);
    copy_out(pca.coords, coords, n * static_cast<size_t>(final_dim));
    if (final_stress) *final_stress = mds.stress_trace.back();
  });
}

rg_status rg_run_distances(const char* manifest, const rg_run_options* options, const char* out_dir) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    repgeom::run_distances(manifest, to_config(options), out_dir);
  });
}

rg_status rg_run_path(const char* manifest, const rg_run_options* options, const char* out_dir) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    repgeom::run_path(manifest, to_config(options), out_dir);
  });
}

rg_status rg_run_mds(const char* manifest, const rg_run_options* options, const char* out_dir) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    repgeom::run_mds(manifest, to_config(options), out_dir);
  });
}

rg_status rg_run_progress_deviation(const char* manifest, const rg_run_options* options,
                                    const char* out_dir) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    repgeom::run_progress_deviation(manifest, to_config(options), out_dir);
  });
}

rg_status rg_run_compare(const char* const* manifests, size_t count, const rg_run_options* options,
                         const char* out_dir) {
  return guarded([&] {
    require(manifests, "manifests");
    require(out_dir, "out_dir");
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < count; ++i) {
      require(manifests[i], "manifest entry");
      paths.emplace_back(manifests[i]);
    }
    repgeom::run_compare(paths, to_config(options), out_dir);
  });
}

rg_status rg_run_crossval(const char* manifest, const rg_run_options* options, const char* out_dir) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    repgeom::run_crossval(manifest, to_config(options), out_dir);
  });
}

}  // extern "C"
