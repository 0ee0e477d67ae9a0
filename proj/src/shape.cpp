#include "repgeom/shape.hpp"

#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace repgeom::shape {

namespace {

Matrix whiten(const Matrix& z, double alpha) {
  if (alpha == 1.0) return z;
  const double m = static_cast<double>(z.rows());
  SpdEigen eig = symmetric_eigen(z.transpose() * z / m);
  const double largest = eig.values.size() > 0 ? eig.values(0) : 0.0;
  if (!(largest > 0.0)) {
    fail(ErrorCode::RankDeficientWhitening,
         "cannot whiten a representation with zero variance in every direction");
  }
  Vector factors(eig.values.size());
  for (Index i = 0; i < factors.size(); ++i) {
    const double variance = eig.values(i);
    factors(i) = variance > 1e-12 * largest ? alpha + (1.0 - alpha) / std::sqrt(variance) : alpha;
  }
  Matrix transform = eig.vectors * factors.asDiagonal() * eig.vectors.transpose();
  return center_columns(z * transform);
}

void require_same_shape(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    fail(ErrorCode::ShapeMismatch, "pre-shape matrices must have the same m x p shape");
  }
}

struct Normalized {
  Matrix x_unit;
  Matrix y_aligned_unit;
  double x_norm;
};

Normalized normalize_pair(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y);
  const double nx = x.norm();
  const double ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0)) fail(ErrorCode::ZeroNormShape, "pre-shape has zero norm");
  ProcrustesAlignment align = procrustes_align(x, y);
  return {x / nx, y * align.rotation / ny, nx};
}

}  // namespace

Matrix reduce_to_dim(const Matrix& centered, int p) {
  const Index m = centered.rows();
  const Index n = centered.cols();
  Matrix out = Matrix::Zero(m, p);
  if (n <= p) {
    out.leftCols(n) = centered;
    return out;
  }
  PrincipalAxes pca = principal_axes(centered);
  const Index keep = std::min<Index>(p, pca.axes.cols());
  out.leftCols(keep) = centered * pca.axes.leftCols(keep);
  return out;
}

Matrix embed_matrix(const Matrix& x, const ShapeParams& params) {
  require_finite(x, "representation");
  if (x.rows() < 2) fail(ErrorCode::TooFewRows, "need at least two stimuli");
  if (params.p < 1 || !(params.alpha >= 0.0 && params.alpha <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "shape parameters need p >= 1 and alpha in [0, 1]");
  }
  return whiten(reduce_to_dim(center_columns(x), params.p), params.alpha);
}

ManifoldPoint embed(const Matrix& x, const ShapeParams& params) {
  return ManifoldPoint(MetricSpec::shape(params), embed_matrix(x, params), x.rows());
}

ProcrustesAlignment procrustes_align(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y);
  Eigen::JacobiSVD<Matrix> svd(x.transpose() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesAlignment out;
  out.rotation = svd.matrixV() * svd.matrixU().transpose();
  out.aligned_inner_product = svd.singularValues().sum();
  return out;
}

double angular_distance(const Matrix& x, const Matrix& y) {
  Normalized n = normalize_pair(x, y);
  return sphere::distance(n.x_unit, n.y_aligned_unit);
}

double euclidean_distance(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y);
  ProcrustesAlignment align = procrustes_align(x, y);
  return (x - y * align.rotation).rowwise().norm().mean();
}

Matrix geodesic(const Matrix& x, const Matrix& y, double t, ShapeVariant variant) {
  if (variant == ShapeVariant::Euclidean) {
    require_same_shape(x, y);
    ProcrustesAlignment align = procrustes_align(x, y);
    return (1.0 - t) * x + t * (y * align.rotation);
  }
  Normalized n = normalize_pair(x, y);
  if (sphere::distance(n.x_unit, n.y_aligned_unit) < kDegenerateTolerance) return x;
  return sphere::slerp(n.x_unit, n.y_aligned_unit, t) * n.x_norm;
}

Matrix log_map(const Matrix& x, const Matrix& y, ShapeVariant variant) {
  if (variant == ShapeVariant::Euclidean) {
    require_same_shape(x, y);
    ProcrustesAlignment align = procrustes_align(x, y);
    return y * align.rotation - x;
  }
  Normalized n = normalize_pair(x, y);
  return sphere::log_map(n.x_unit, n.y_aligned_unit);
}

Matrix exp_map(const Matrix& x, const Matrix& w, ShapeVariant variant) {
  require_same_shape(x, w);
  if (variant == ShapeVariant::Euclidean) return x + w;
  const double nx = x.norm();
  if (!(nx > 0.0)) fail(ErrorCode::ZeroNormShape, "pre-shape has zero norm");
  return sphere::exp_map(x / nx, w) * nx;
}

TangentSplit tangent_split(const Matrix& x, const Matrix& w) {
  require_same_shape(x, w);
  Matrix gram = x.transpose() * x;
  Matrix cross = w.transpose() * x;
  TangentSplit out;
  out.skew = solve_symmetric_sylvester(gram, cross - cross.transpose());
  out.vertical = -x * out.skew;
  out.horizontal = w - out.vertical;
  return out;
}

double ShapeGeometry::distance(const Matrix& p, const Matrix& q) const {
  return variant_ == ShapeVariant::Angular ? angular_distance(p, q) : euclidean_distance(p, q);
}
Matrix ShapeGeometry::geodesic(const Matrix& p, const Matrix& q, double t) const {
  return shape::geodesic(p, q, t, variant_);
}
Matrix ShapeGeometry::log_map(const Matrix& p, const Matrix& q) const {
  return shape::log_map(p, q, variant_);
}
Matrix ShapeGeometry::exp_map(const Matrix& p, const Matrix& w) const {
  return shape::exp_map(p, w, variant_);
}
Matrix ShapeGeometry::horizontal(const Matrix& p, const Matrix& w) const {
  return tangent_split(p, w).horizontal;
}

void ShapeGeometry::check_tangent(const Matrix& p, const Matrix& w) const {
  require_same_shape(p, w);
  const double scale = std::max(1.0, w.norm());
  if (w.colwise().mean().cwiseAbs().maxCoeff() > 1e-8 * scale) {
    fail(ErrorCode::InvalidTangent, "shape tangent must have zero column means");
  }
  if (variant_ == ShapeVariant::Angular &&
      std::abs(frobenius_inner(p, w)) > 1e-8 * scale * std::max(1.0, p.norm())) {
    fail(ErrorCode::InvalidTangent, "angular shape tangent must be orthogonal to its base point");
  }
}

}  // namespace repgeom::shape
