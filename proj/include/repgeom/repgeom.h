/* C interface to the repgeom library. All handles are opaque and owned by
 * the caller; release them with the matching *_free function. Functions
 * return RG_OK or an error status, with a message available from
 * rg_last_error() on the calling thread. */
#ifndef REPGEOM_H
#define REPGEOM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REPGEOM_BUILDING)
#    define RG_API __declspec(dllexport)
#  else
#    define RG_API __declspec(dllimport)
#  endif
#else
#  define RG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_INVALID_ARGUMENT = 1,
  RG_ERR_NON_FINITE = 2,
  RG_ERR_INCOMPARABLE_POINTS = 3,
  RG_ERR_DEGENERATE_GEODESIC = 4,
  RG_ERR_ANTIPODAL_POINTS = 5,
  RG_ERR_TANGENT_BASE_MISMATCH = 6,
  RG_ERR_INVALID_TANGENT = 7,
  RG_ERR_DEGENERATE_ANGLE = 8,
  RG_ERR_ZERO_AFTER_CENTERING = 9,
  RG_ERR_RANK_DEFICIENT_WHITENING = 10,
  RG_ERR_SHAPE_MISMATCH = 11,
  RG_ERR_ZERO_NORM_SHAPE = 12,
  RG_ERR_SINGULAR_SYLVESTER = 13,
  RG_ERR_NOT_POSITIVE_DEFINITE = 14,
  RG_ERR_ILL_CONDITIONED = 15,
  RG_ERR_TOO_FEW_ROWS = 16,
  RG_ERR_METRIC_MISMATCH = 17,
  RG_ERR_INVALID_DISTANCE_MATRIX = 18,
  RG_ERR_UNSUPPORTED_DTYPE = 19,
  RG_ERR_SHAPE_ERROR = 20,
  RG_ERR_PARSE_ERROR = 21,
  RG_ERR_MANIFEST_ERROR = 22,
  RG_ERR_IO_ERROR = 23,
  RG_ERR_OUTPUT_LOCKED = 24,
  RG_ERR_INTERNAL = 99
} rg_status;

typedef enum rg_metric_kind {
  RG_METRIC_ANGULAR_CKA = 0,
  RG_METRIC_ANGULAR_SHAPE = 1,
  RG_METRIC_EUCLIDEAN_SHAPE = 2,
  RG_METRIC_AIR_GRAM = 3,
  RG_METRIC_AIR_COVARIANCE = 4
} rg_metric_kind;

typedef enum rg_kernel_kind {
  RG_KERNEL_LINEAR = 0,
  RG_KERNEL_SQUARED_EXPONENTIAL = 1
} rg_kernel_kind;

typedef enum rg_format {
  RG_FORMAT_AUTO = 0,
  RG_FORMAT_NPY = 1,
  RG_FORMAT_CSV = 2
} rg_format;

typedef struct rg_metric_options {
  rg_metric_kind metric;
  rg_kernel_kind kernel;
  double length_scale; /* squared-exponential only; <= 0 selects the median heuristic */
  int p;
  double alpha;
  double epsilon;
} rg_metric_options;

typedef struct rg_run_options {
  rg_metric_options metric;
  size_t subsample; /* 0 selects min(1000, m) */
  uint64_t seed;
  int folds;
  int include_target;
  int depth_normalize;
  int write_svg;
  int geodesic_samples;
  int mds_dim;
  rg_format format;
} rg_run_options;

typedef struct rg_matrix rg_matrix;
typedef struct rg_point rg_point;
typedef struct rg_tangent rg_tangent;

RG_API const char* rg_version(void);
RG_API const char* rg_last_error(void);
RG_API const char* rg_status_name(rg_status status);

/* Defaults: Angular CKA, linear kernel, p = 100, alpha = 0, epsilon = 0.05. */
RG_API void rg_metric_options_default(rg_metric_options* options);
RG_API void rg_run_options_default(rg_run_options* options);

/* Matrices are exchanged row-major. */
RG_API rg_status rg_matrix_create(const double* data, size_t rows, size_t cols, rg_matrix** out);
RG_API rg_status rg_matrix_load(const char* path, rg_format format, rg_matrix** out);
RG_API rg_status rg_matrix_shape(const rg_matrix* matrix, size_t* rows, size_t* cols);
RG_API rg_status rg_matrix_copy(const rg_matrix* matrix, double* out, size_t capacity);
RG_API void rg_matrix_free(rg_matrix* matrix);

RG_API rg_status rg_embed(const rg_matrix* representation, const rg_metric_options* options,
                          rg_point** out);
RG_API rg_status rg_point_shape(const rg_point* point, size_t* rows, size_t* cols);
RG_API rg_status rg_point_copy(const rg_point* point, double* out, size_t capacity);
RG_API void rg_point_free(rg_point* point);

RG_API rg_status rg_distance(const rg_point* p, const rg_point* q, double* out);
RG_API rg_status rg_geodesic(const rg_point* p, const rg_point* q, double t, rg_point** out);
RG_API rg_status rg_log_map(const rg_point* p, const rg_point* q, rg_tangent** out);
RG_API rg_status rg_exp_map(const rg_point* p, const rg_tangent* w, rg_point** out);
RG_API rg_status rg_tangent_scale(const rg_tangent* w, double factor, rg_tangent** out);
RG_API rg_status rg_tangent_inner(const rg_tangent* u, const rg_tangent* v, double* out);
RG_API rg_status rg_tangent_norm(const rg_tangent* w, double* out);
RG_API void rg_tangent_free(rg_tangent* w);

RG_API rg_status rg_angle(const rg_point* a, const rg_point* b, const rg_point* c, double* out);
/* projected may be NULL. */
RG_API rg_status rg_project(const rg_point* query, const rg_point* start, const rg_point* end,
                            double* t_star, double* residual, rg_point** projected);
RG_API rg_status rg_decompose_step(const rg_point* from, const rg_point* to,
                                   const rg_point* target, double* progress, double* deviation);

/* dissimilarities is n x n row-major; coords receives n x final_dim row-major. */
RG_API rg_status rg_mds(const double* dissimilarities, size_t n, int mds_dim, int final_dim,
                        uint64_t seed, double* coords, double* final_stress);

/* Subcommand drivers: read a dataset manifest, write artifacts to out_dir. */
RG_API rg_status rg_run_distances(const char* manifest, const rg_run_options* options,
                                  const char* out_dir);
RG_API rg_status rg_run_path(const char* manifest, const rg_run_options* options,
                             const char* out_dir);
RG_API rg_status rg_run_mds(const char* manifest, const rg_run_options* options,
                            const char* out_dir);
RG_API rg_status rg_run_progress_deviation(const char* manifest, const rg_run_options* options,
                                           const char* out_dir);
RG_API rg_status rg_run_compare(const char* const* manifests, size_t count,
                                const rg_run_options* options, const char* out_dir);
RG_API rg_status rg_run_crossval(const char* manifest, const rg_run_options* options,
                                 const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* REPGEOM_H */
