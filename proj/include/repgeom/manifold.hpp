#pragma once

#include "repgeom/types.hpp"

#include <utility>

namespace repgeom {

/// Embeds a raw m x n representation under the given metric.
ManifoldPoint embed(const Matrix& representation, const MetricSpec& metric);

/// Throws IncomparablePoints unless every point shares metric and payload shape.
void require_comparable(const ManifoldPoint& a, const ManifoldPoint& b);

double metric_distance(const ManifoldPoint& p, const ManifoldPoint& q);

/// γ(t) from p to q; returns p when d(p, q) < 1e-8.
ManifoldPoint geodesic_point(const ManifoldPoint& p, const ManifoldPoint& q, double t);

/// Zero tangent when d(p, q) < 1e-8. Spherical metrics throw AntipodalPoints
/// within 1e-6 of pi.
TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q);

ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& w);

/// Inner product of two tangents at the same base under the metric.
double tangent_inner(const TangentVector& u, const TangentVector& v);
double tangent_norm(const TangentVector& w);

TangentVector scaled(const TangentVector& w, double factor);

/// Angle of the triangle abc at b, in [0, pi].
double angle_at(const ManifoldPoint& a, const ManifoldPoint& b, const ManifoldPoint& c);

struct GeodesicProjectionResult {
  double t_star = 0.0;
  ManifoldPoint projected_point;
  double residual_distance = 0.0;
  int evaluations = 0;
};

/// Minimizes d(query, γ(t)) over t in [0, 1]: a 21-point scan brackets the
/// minimum, golden-section search narrows it to 1e-6, then one parabolic step.
GeodesicProjectionResult project_to_geodesic(const ManifoldPoint& query,
                                             const ManifoldPoint& start,
                                             const ManifoldPoint& end);

struct StepDecomposition {
  double progress = 0.0;
  double deviation = 0.0;
  double step_norm = 0.0;
};

/// Splits log_from(to) into a signed component along log_from(target) and an
/// orthogonal remainder.
StepDecomposition decompose_step(const ManifoldPoint& from, const ManifoldPoint& to,
                                 const ManifoldPoint& target);

}  // namespace repgeom
