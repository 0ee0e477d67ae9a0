#pragma once

#include "repgeom/geometry.hpp"
#include "repgeom/types.hpp"

namespace repgeom::shape {

/// Pad or project the centered data to p columns, then partially whiten:
///   whiten(Z, α) = Z V (α I + (1 − α) Σ^{-1/2}) Vᵀ,  (1/m) ZᵀZ = V Σ Vᵀ.
/// Directions with variance below 1e-12 of the largest are left scaled by α.
Matrix embed_matrix(const Matrix& x, const ShapeParams& params);
ManifoldPoint embed(const Matrix& x, const ShapeParams& params);

/// Pad to p columns (n <= p) or project onto the top p principal axes, with no
/// whitening. Shared with the covariance embedding of the AIR metric.
Matrix reduce_to_dim(const Matrix& centered, int p);

struct ProcrustesAlignment {
  Matrix rotation;              // p x p orthonormal R minimizing |X − Y R|_F
  double aligned_inner_product; // <X, Y R>_F
};

ProcrustesAlignment procrustes_align(const Matrix& x, const Matrix& y);

double angular_distance(const Matrix& x, const Matrix& y);
double euclidean_distance(const Matrix& x, const Matrix& y);

Matrix geodesic(const Matrix& x, const Matrix& y, double t, ShapeVariant variant);
Matrix log_map(const Matrix& x, const Matrix& y, ShapeVariant variant);
Matrix exp_map(const Matrix& x, const Matrix& w, ShapeVariant variant);

struct TangentSplit {
  Matrix vertical;
  Matrix horizontal;
  Matrix skew;  // A solving XᵀX A + A XᵀX = WᵀX − XᵀW
};

/// Vertical part is −X A, the orthogonal projection of w onto {X B : B = −Bᵀ};
/// horizontal is the remainder.
TangentSplit tangent_split(const Matrix& x, const Matrix& w);

class ShapeGeometry final : public Geometry {
 public:
  explicit ShapeGeometry(ShapeVariant variant) : variant_(variant) {}

  double distance(const Matrix& p, const Matrix& q) const override;
  Matrix geodesic(const Matrix& p, const Matrix& q, double t) const override;
  Matrix log_map(const Matrix& p, const Matrix& q) const override;
  Matrix exp_map(const Matrix& p, const Matrix& w) const override;
  Matrix horizontal(const Matrix& p, const Matrix& w) const override;
  void check_tangent(const Matrix& p, const Matrix& w) const override;

 private:
  ShapeVariant variant_;
};

}  // namespace repgeom::shape
