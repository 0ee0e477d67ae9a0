#include "repgeom/air.hpp"

#include "repgeom/angular_cka.hpp"
#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/shape.hpp"

#include <cmath>

namespace repgeom::air {

namespace {

struct Whitener {
  Matrix sqrt;      // P^{1/2}
  Matrix inv_sqrt;  // P^{-1/2}
};

Whitener whitener(const Matrix& p) {
  SpdEigen eig = spd_eigen(p);
  return {eig.apply([](double v) { return std::sqrt(v); }),
          eig.apply([](double v) { return 1.0 / std::sqrt(v); })};
}

void require_same_size(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols()) {
    fail(ErrorCode::ShapeMismatch, "SPD operands must be square and the same size");
  }
}

SpdEigen relative_spectrum(const Whitener& w, const Matrix& q) {
  SpdEigen eig = symmetric_eigen(w.inv_sqrt * q * w.inv_sqrt);
  if (!(eig.values.minCoeff() > 0.0)) {
    fail(ErrorCode::NotPositiveDefinite, "second operand is not positive definite");
  }
  return eig;
}

}  // namespace

Matrix embed_matrix(const Matrix& x, const AirParams& params) {
  require_finite(x, "representation");
  if (x.rows() < 2) fail(ErrorCode::TooFewRows, "need at least two stimuli");
  if (!(params.epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "ridge epsilon must be positive");
  if (params.embedding == AirEmbedding::GramKernelRidge) {
    Matrix g = cka::gram(x, params.kernel);
    g.diagonal().array() += params.epsilon;
    return g;
  }
  if (params.p < 1) fail(ErrorCode::InvalidArgument, "covariance dimensionality p must be >= 1");
  Matrix z = shape::reduce_to_dim(center_columns(x), params.p);
  Matrix cov = symmetrize(z.transpose() * z / static_cast<double>(x.rows() - 1));
  cov.diagonal().array() += params.epsilon;
  return cov;
}

ManifoldPoint embed(const Matrix& x, const AirParams& params) {
  return ManifoldPoint(MetricSpec::air(params), embed_matrix(x, params), x.rows());
}

double distance(const Matrix& p, const Matrix& q) {
  require_same_size(p, q);
  SpdEigen eig = relative_spectrum(whitener(p), q);
  return std::sqrt(eig.values.array().log().square().sum());
}

Matrix geodesic(const Matrix& p, const Matrix& q, double t) {
  require_same_size(p, q);
  Whitener w = whitener(p);
  SpdEigen eig = relative_spectrum(w, q);
  Matrix inner = eig.apply([t](double v) { return std::pow(v, t); });
  return symmetrize(w.sqrt * inner * w.sqrt);
}

Matrix log_map(const Matrix& p, const Matrix& q) {
  require_same_size(p, q);
  Whitener w = whitener(p);
  SpdEigen eig = relative_spectrum(w, q);
  Matrix inner = eig.apply([](double v) { return std::log(v); });
  return symmetrize(w.sqrt * inner * w.sqrt);
}

Matrix exp_map(const Matrix& p, const Matrix& v) {
  require_same_size(p, v);
  Whitener w = whitener(p);
  Matrix inner = spd_exp(symmetrize(w.inv_sqrt * v * w.inv_sqrt));
  return symmetrize(w.sqrt * inner * w.sqrt);
}

double inner_product(const Matrix& p, const Matrix& w, const Matrix& v) {
  require_same_size(p, w);
  require_same_size(p, v);
  Whitener wh = whitener(p);
  return frobenius_inner(wh.inv_sqrt * w * wh.inv_sqrt, wh.inv_sqrt * v * wh.inv_sqrt);
}

double AirGeometry::distance(const Matrix& p, const Matrix& q) const { return air::distance(p, q); }
Matrix AirGeometry::geodesic(const Matrix& p, const Matrix& q, double t) const {
  return air::geodesic(p, q, t);
}
Matrix AirGeometry::log_map(const Matrix& p, const Matrix& q) const { return air::log_map(p, q); }
Matrix AirGeometry::exp_map(const Matrix& p, const Matrix& w) const { return air::exp_map(p, w); }

Matrix AirGeometry::isometric_coordinates(const Matrix& p, const Matrix& w) const {
  Whitener wh = whitener(p);
  return wh.inv_sqrt * w * wh.inv_sqrt;
}

void AirGeometry::check_tangent(const Matrix& p, const Matrix& w) const {
  require_same_size(p, w);
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::InvalidTangent, "AIR tangent must be symmetric");
  }
}

}  // namespace repgeom::air
