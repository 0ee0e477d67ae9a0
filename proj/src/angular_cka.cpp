#include "repgeom/angular_cka.hpp"

#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace repgeom::cka {

namespace {

Matrix squared_distances(const Matrix& x) {
  Matrix inner = x * x.transpose();
  Vector norms = inner.diagonal();
  Matrix d2 = (-2.0 * inner).colwise() + norms;
  d2.rowwise() += norms.transpose();
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();
  return symmetrize(d2);
}

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double length_scale_from(const Matrix& d2) {
  const Index m = d2.rows();
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  double total = 0.0;
  for (Index j = 1; j < m; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double d = std::sqrt(d2(i, j));
      distances.push_back(d);
      total += d;
    }
  }
  if (distances.empty()) return 0.0;
  const double median = median_of(std::move(distances));
  if (median > 0.0) return median;
  return total / static_cast<double>(m * (m - 1) / 2);
}

}  // namespace

double median_length_scale(const Matrix& x) {
  require_finite(x, "representation");
  return length_scale_from(squared_distances(x));
}

Matrix gram(const Matrix& x, const KernelSpec& kernel) {
  require_finite(x, "representation");
  if (kernel.kind == KernelKind::Linear) return symmetrize(x * x.transpose());

  Matrix d2 = squared_distances(x);
  double tau = kernel.length_scale ? *kernel.length_scale : length_scale_from(d2);
  if (tau <= 0.0) {
    // Every row is identical: all distances vanish and the kernel is all ones
    // for any length scale.
    tau = 1.0;
  }
  return (-d2.array() / (tau * tau)).exp().matrix();
}

Matrix center(const Matrix& g) {
  Vector row_means = g.rowwise().mean();
  Eigen::RowVectorXd col_means = g.colwise().mean();
  const double grand = g.mean();
  Matrix out = g;
  out.colwise() -= row_means;
  out.rowwise() -= col_means;
  out.array() += grand;
  return out;
}

ManifoldPoint center_normalize(const Matrix& g, const KernelSpec& kernel) {
  if (g.rows() != g.cols()) fail(ErrorCode::ShapeMismatch, "Gram matrix must be square");
  require_finite(g, "Gram matrix");
  Matrix centered = symmetrize(center(g));
  const double norm = centered.norm();
  const double scale = g.norm();
  if (!(norm > 1e-12 * scale) || norm == 0.0) {
    fail(ErrorCode::ZeroAfterCentering,
         "Gram matrix vanishes after centering (every stimulus has the same representation)");
  }
  centered /= norm;
  return ManifoldPoint(MetricSpec::angular_cka(kernel), std::move(centered), g.rows());
}

ManifoldPoint embed(const Matrix& x, const KernelSpec& kernel) {
  if (x.rows() < 2) fail(ErrorCode::TooFewRows, "need at least two stimuli");
  return center_normalize(gram(x, kernel), kernel);
}

double distance(const Matrix& p, const Matrix& q) { return sphere::distance(p, q); }

Matrix geodesic(const Matrix& p, const Matrix& q, double t) {
  return symmetrize(sphere::slerp(p, q, t));
}

Matrix log_map(const Matrix& p, const Matrix& q) { return symmetrize(sphere::log_map(p, q)); }

Matrix exp_map(const Matrix& p, const Matrix& w) { return symmetrize(sphere::exp_map(p, w)); }

double AngularCkaGeometry::distance(const Matrix& p, const Matrix& q) const {
  return cka::distance(p, q);
}
Matrix AngularCkaGeometry::geodesic(const Matrix& p, const Matrix& q, double t) const {
  return cka::geodesic(p, q, t);
}
Matrix AngularCkaGeometry::log_map(const Matrix& p, const Matrix& q) const {
  return cka::log_map(p, q);
}
Matrix AngularCkaGeometry::exp_map(const Matrix& p, const Matrix& w) const {
  return cka::exp_map(p, w);
}

void AngularCkaGeometry::check_tangent(const Matrix& p, const Matrix& w) const {
  const double scale = std::max(1.0, w.norm());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    fail(ErrorCode::InvalidTangent, "Angular CKA tangent must be symmetric");
  }
  if (std::abs(frobenius_inner(p, w)) > 1e-8 * scale) {
    fail(ErrorCode::InvalidTangent, "Angular CKA tangent must be orthogonal to its base point");
  }
}

}  // namespace repgeom::cka
