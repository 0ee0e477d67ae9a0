#pragma once

#include "repgeom/geometry.hpp"
#include "repgeom/types.hpp"

namespace repgeom::air {

Matrix embed_matrix(const Matrix& x, const AirParams& params);
ManifoldPoint embed(const Matrix& x, const AirParams& params);

/// sqrt(Σ log(d_i)²) over the eigenvalues d_i of P^{-1/2} Q P^{-1/2}.
double distance(const Matrix& p, const Matrix& q);
Matrix geodesic(const Matrix& p, const Matrix& q, double t);
Matrix log_map(const Matrix& p, const Matrix& q);
Matrix exp_map(const Matrix& p, const Matrix& w);

/// tr(P^{-1} W P^{-1} V).
double inner_product(const Matrix& p, const Matrix& w, const Matrix& v);

class AirGeometry final : public Geometry {
 public:
  double distance(const Matrix& p, const Matrix& q) const override;
  Matrix geodesic(const Matrix& p, const Matrix& q, double t) const override;
  Matrix log_map(const Matrix& p, const Matrix& q) const override;
  Matrix exp_map(const Matrix& p, const Matrix& w) const override;
  Matrix isometric_coordinates(const Matrix& p, const Matrix& w) const override;
  void check_tangent(const Matrix& p, const Matrix& w) const override;
};

}  // namespace repgeom::air
