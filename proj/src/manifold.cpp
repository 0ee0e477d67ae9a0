#include "repgeom/manifold.hpp"

#include "repgeom/air.hpp"
#include "repgeom/angular_cka.hpp"
#include "repgeom/error.hpp"
#include "repgeom/geometry.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/shape.hpp"

#include <limits>
#include <cmath>

namespace repgeom {

Matrix Geometry::isometric_coordinates(const Matrix&, const Matrix& w) const { return w; }
Matrix Geometry::horizontal(const Matrix&, const Matrix& w) const { return w; }

const Geometry& geometry_for(MetricKind kind) {
  static const cka::AngularCkaGeometry angular_cka;
  static const shape::ShapeGeometry angular_shape(ShapeVariant::Angular);
  static const shape::ShapeGeometry euclidean_shape(ShapeVariant::Euclidean);
  static const air::AirGeometry air_metric;
  switch (kind) {
    case MetricKind::AngularCka: return angular_cka;
    case MetricKind::AngularShape: return angular_shape;
    case MetricKind::EuclideanShape: return euclidean_shape;
    case MetricKind::AirGram:
    case MetricKind::AirCovariance: return air_metric;
  }
  fail(ErrorCode::InvalidArgument, "unknown metric kind");
}

ManifoldPoint embed(const Matrix& representation, const MetricSpec& metric) {
  metric.validate();
  if (representation.rows() < 2) fail(ErrorCode::TooFewRows, "need at least two stimuli");
  switch (metric.kind) {
    case MetricKind::AngularCka:
      return cka::embed(representation, metric.kernel);
    case MetricKind::AngularShape:
    case MetricKind::EuclideanShape:
      return shape::embed(representation, metric.shape_params());
    case MetricKind::AirGram:
    case MetricKind::AirCovariance:
      return air::embed(representation, metric.air_params());
  }
  fail(ErrorCode::InvalidArgument, "unknown metric kind");
}

void require_comparable(const ManifoldPoint& a, const ManifoldPoint& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "empty manifold point");
  if (!a.comparable_with(b)) {
    fail(ErrorCode::IncomparablePoints,
         "points differ in metric, parameters or shape (" + a.metric().describe() + " vs " +
             b.metric().describe() + ")");
  }
  require_finite(a.payload(), "manifold point");
  require_finite(b.payload(), "manifold point");
}

double metric_distance(const ManifoldPoint& p, const ManifoldPoint& q) {
  require_comparable(p, q);
  return geometry_for(p.kind()).distance(p.payload(), q.payload());
}

ManifoldPoint geodesic_point(const ManifoldPoint& p, const ManifoldPoint& q, double t) {
  require_comparable(p, q);
  if (!std::isfinite(t)) fail(ErrorCode::InvalidArgument, "geodesic parameter must be finite");
  const Geometry& geo = geometry_for(p.kind());
  if (geo.distance(p.payload(), q.payload()) < kDegenerateTolerance) return p;
  if (t == 0.0) return p;
  return ManifoldPoint(p.metric(), geo.geodesic(p.payload(), q.payload(), t), p.stimuli());
}

TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q) {
  require_comparable(p, q);
  const Geometry& geo = geometry_for(p.kind());
  if (geo.distance(p.payload(), q.payload()) < kDegenerateTolerance) {
    return {p, Matrix::Zero(p.payload().rows(), p.payload().cols())};
  }
  return {p, geo.log_map(p.payload(), q.payload())};
}

ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& w) {
  if (!w.base.same_as(p)) fail(ErrorCode::TangentBaseMismatch, "tangent is not based at this point");
  require_finite(w.direction, "tangent");
  const Geometry& geo = geometry_for(p.kind());
  geo.check_tangent(p.payload(), w.direction);
  return ManifoldPoint(p.metric(), geo.exp_map(p.payload(), w.direction), p.stimuli());
}

double tangent_inner(const TangentVector& u, const TangentVector& v) {
  if (!u.base.same_as(v.base)) fail(ErrorCode::TangentBaseMismatch, "tangents have different bases");
  const Geometry& geo = geometry_for(u.base.kind());
  const Matrix& base = u.base.payload();
  return frobenius_inner(geo.isometric_coordinates(base, u.direction),
                         geo.isometric_coordinates(base, v.direction));
}

double tangent_norm(const TangentVector& w) {
  const Geometry& geo = geometry_for(w.base.kind());
  return geo.isometric_coordinates(w.base.payload(), w.direction).norm();
}

TangentVector scaled(const TangentVector& w, double factor) { return {w.base, w.direction * factor}; }

namespace {

// Horizontal tangent from b towards a, in Frobenius-isometric coordinates.
Matrix direction_towards(const Geometry& geo, const ManifoldPoint& b, const ManifoldPoint& a) {
  Matrix w = geo.log_map(b.payload(), a.payload());
  return geo.isometric_coordinates(b.payload(), geo.horizontal(b.payload(), w));
}

}  // namespace

double angle_at(const ManifoldPoint& a, const ManifoldPoint& b, const ManifoldPoint& c) {
  require_comparable(a, b);
  require_comparable(b, c);
  const Geometry& geo = geometry_for(b.kind());
  if (geo.distance(b.payload(), a.payload()) < kDegenerateTolerance ||
      geo.distance(b.payload(), c.payload()) < kDegenerateTolerance) {
    fail(ErrorCode::DegenerateAngle, "angle vertex coincides with an endpoint");
  }
  Matrix u = direction_towards(geo, b, a);
  Matrix v = direction_towards(geo, b, c);
  if (u.norm() == 0.0 || v.norm() == 0.0) {
    fail(ErrorCode::DegenerateAngle, "tangent has no horizontal component");
  }
  return angle_between(u, v);
}

GeodesicProjectionResult project_to_geodesic(const ManifoldPoint& query, const ManifoldPoint& start,
                                             const ManifoldPoint& end) {
  require_comparable(query, start);
  require_comparable(start, end);
  const Geometry& geo = geometry_for(start.kind());
  if (geo.distance(start.payload(), end.payload()) < kDegenerateTolerance) {
    fail(ErrorCode::DegenerateGeodesic, "geodesic endpoints coincide");
  }

  constexpr int kMaxEvaluations = 200;
  constexpr int kScan = 20;
  constexpr double kTolerance = 1e-6;
  int evaluations = 0;
  double best_t = 0.0;
  double best_g = std::numeric_limits<double>::infinity();
  auto g = [&](double t) {
    ++evaluations;
    const double value = geo.distance(query.payload(), geo.geodesic(start.payload(), end.payload(), t));
    if (value < best_g || (value == best_g && t < best_t)) {
      best_g = value;
      best_t = t;
    }
    return value;
  };

  int best_index = 0;
  double scan_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double value = g(static_cast<double>(i) / kScan);
    if (value < scan_best) {
      scan_best = value;
      best_index = i;
    }
  }

  double lo = static_cast<double>(std::max(best_index - 1, 0)) / kScan;
  double hi = static_cast<double>(std::min(best_index + 1, kScan)) / kScan;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  while (hi - lo > kTolerance && evaluations < kMaxEvaluations - 2) {
    if (g1 <= g2) {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - ratio * (hi - lo);
      g1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + ratio * (hi - lo);
      g2 = g(x2);
    }
  }

  // One parabolic step through the final bracket and its best interior point.
  {
    const double a = x1 < x2 ? x1 : x2;
    const double b = x1 < x2 ? x2 : x1;
    const double ga = x1 < x2 ? g1 : g2;
    const double gb = x1 < x2 ? g2 : g1;
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    const double num = (mid - a) * (mid - a) * (gm - gb) - (mid - b) * (mid - b) * (gm - ga);
    const double den = (mid - a) * (gm - gb) - (mid - b) * (gm - ga);
    if (den != 0.0 && evaluations < kMaxEvaluations) {
      const double vertex = mid - 0.5 * num / den;
      if (vertex > std::min(a, lo) && vertex < std::max(b, hi)) g(vertex);
    }
  }

  GeodesicProjectionResult out;
  out.t_star = best_t;
  out.projected_point = geodesic_point(start, end, best_t);
  out.residual_distance = best_g;
  out.evaluations = evaluations;
  return out;
}

StepDecomposition decompose_step(const ManifoldPoint& from, const ManifoldPoint& to,
                                 const ManifoldPoint& target) {
  require_comparable(from, to);
  require_comparable(from, target);
  const Geometry& geo = geometry_for(from.kind());
  if (geo.distance(from.payload(), target.payload()) < kDegenerateTolerance) {
    fail(ErrorCode::DegenerateGeodesic, "step origin coincides with the target");
  }
  StepDecomposition out;
  if (geo.distance(from.payload(), to.payload()) < kDegenerateTolerance) return out;

  Matrix step = direction_towards(geo, from, to);
  Matrix towards = direction_towards(geo, from, target);
  towards /= towards.norm();
  out.progress = frobenius_inner(step, towards);
  out.deviation = (step - out.progress * towards).norm();
  out.step_norm = step.norm();
  return out;
}

}  // namespace repgeom
