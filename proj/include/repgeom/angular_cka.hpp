#pragma once

#include "repgeom/geometry.hpp"
#include "repgeom/types.hpp"

namespace repgeom::cka {

/// m x m kernel Gram matrix over the rows of x.
Matrix gram(const Matrix& x, const KernelSpec& kernel);

/// Median of the m(m-1)/2 pairwise Euclidean row distances, falling back to
/// the mean when the median is zero. Returns 0 only if every row is equal.
double median_length_scale(const Matrix& x);

/// H G H, computed by subtracting row and column means.
Matrix center(const Matrix& g);

/// H G H / |H G H|_F as a NormalizedGram point.
ManifoldPoint center_normalize(const Matrix& g, const KernelSpec& kernel = {});

ManifoldPoint embed(const Matrix& x, const KernelSpec& kernel);

double distance(const Matrix& p, const Matrix& q);
Matrix geodesic(const Matrix& p, const Matrix& q, double t);
Matrix log_map(const Matrix& p, const Matrix& q);
Matrix exp_map(const Matrix& p, const Matrix& w);

class AngularCkaGeometry final : public Geometry {
 public:
  double distance(const Matrix& p, const Matrix& q) const override;
  Matrix geodesic(const Matrix& p, const Matrix& q, double t) const override;
  Matrix log_map(const Matrix& p, const Matrix& q) const override;
  Matrix exp_map(const Matrix& p, const Matrix& w) const override;
  void check_tangent(const Matrix& p, const Matrix& w) const override;
};

}  // namespace repgeom::cka
