#pragma once

#include "repgeom/types.hpp"

namespace repgeom {

/// Per-metric geometry on raw payloads. Callers go through the manifold
/// functions, which check comparability before dispatching here.
class Geometry {
 public:
  virtual ~Geometry() = default;

  virtual double distance(const Matrix& p, const Matrix& q) const = 0;
  virtual Matrix geodesic(const Matrix& p, const Matrix& q, double t) const = 0;
  virtual Matrix log_map(const Matrix& p, const Matrix& q) const = 0;
  virtual Matrix exp_map(const Matrix& p, const Matrix& w) const = 0;

  /// Linear isometry taking the tangent space at p, with this metric's inner
  /// product, into Frobenius space.
  virtual Matrix isometric_coordinates(const Matrix& p, const Matrix& w) const;

  /// The component of w that changes distances (identity except for shape
  /// metrics, which drop the vertical part).
  virtual Matrix horizontal(const Matrix& p, const Matrix& w) const;

  /// Throws InvalidTangent when w is not a tangent vector at p.
  virtual void check_tangent(const Matrix& p, const Matrix& w) const = 0;
};

const Geometry& geometry_for(MetricKind kind);

}  // namespace repgeom
