#pragma once

// Random generators and independent reference implementations shared by the
// unit tests and the acceptance suite.

#include "repgeom/error.hpp"
#include "repgeom/linalg.hpp"
#include "repgeom/manifold.hpp"
#include "repgeom/rng.hpp"
#include "repgeom/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace testing {

using repgeom::Index;
using repgeom::Matrix;
using repgeom::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  std::uint64_t below(std::uint64_t n) { return rng_.bounded(n); }
  double normal() { return rng_.normal(); }

  Matrix gaussian(Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) out(i, j) = rng_.normal();
    }
    return out;
  }

  Matrix orthonormal(Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    return q;
  }

  // Condition number at most e^(2 * spread).
  Matrix invertible(Index n, double spread = 1.0) {
    Vector s(n);
    for (Index i = 0; i < n; ++i) s(i) = std::exp(uniform(-spread, spread));
    return orthonormal(n) * s.asDiagonal() * orthonormal(n);
  }

  Matrix spd(Index n, double spread = 1.0) {
    Vector s(n);
    for (Index i = 0; i < n; ++i) s(i) = std::exp(uniform(-spread, spread));
    const Matrix q = orthonormal(n);
    return q * s.asDiagonal() * q.transpose();
  }

  Matrix symmetric(Index n) {
    const Matrix a = gaussian(n, n);
    return 0.5 * (a + a.transpose());
  }

 private:
  repgeom::SplitMix64 rng_;
};

// Centering matrix built explicitly, I − 11ᵀ/m.
inline Matrix centering_matrix(Index m) {
  return Matrix::Identity(m, m) - Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
}

// Biased HSIC estimator tr(K H L H) / (m − 1)², written out independently of
// the library's centering code.
inline double hsic(const Matrix& k, const Matrix& l) {
  const Index m = k.rows();
  const Matrix h = centering_matrix(m);
  const double denom = static_cast<double>(m - 1) * static_cast<double>(m - 1);
  return (k * h * l * h).trace() / denom;
}

inline double linear_cka(const Matrix& x, const Matrix& y) {
  const Matrix k = x * x.transpose();
  const Matrix l = y * y.transpose();
  return hsic(k, l) / std::sqrt(hsic(k, k) * hsic(l, l));
}

// Nuclear norm via singular values: max over orthonormal R of <X, Y R>.
inline double nuclear_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

// Generalized eigenvalues of Q relative to P, from a Cholesky reduction.
inline Vector generalized_eigenvalues(const Matrix& p, const Matrix& q) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(q, p);
  return es.eigenvalues();
}

inline double air_distance_oracle(const Matrix& p, const Matrix& q) {
  return std::sqrt(generalized_eigenvalues(p, q).array().log().square().sum());
}

// Brute-force minimizer of d(query, γ(t)) on a uniform grid over [0, 1].
inline double grid_argmin(const repgeom::ManifoldPoint& query, const repgeom::ManifoldPoint& start,
                          const repgeom::ManifoldPoint& end, int steps) {
  double best_t = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const double d = repgeom::metric_distance(query, repgeom::geodesic_point(start, end, t));
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  return best_t;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(ranks(a), ranks(b));
}

inline Matrix euclidean_distance_matrix(const Matrix& x) {
  const Index n = x.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  }
  return d;
}

inline std::vector<double> upper_triangle(const Matrix& d) {
  std::vector<double> out;
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = i + 1; j < d.cols(); ++j) out.push_back(d(i, j));
  }
  return out;
}

// Chained random ReLU features from a Gaussian input, He-scaled so activations
// keep their magnitude with depth.
inline std::vector<Matrix> random_relu_path(Gen& gen, Index m, Index n, int layers) {
  std::vector<Matrix> out;
  out.push_back(gen.gaussian(m, n));
  for (int l = 0; l < layers; ++l) {
    const Matrix w = gen.gaussian(n, n) * std::sqrt(2.0 / static_cast<double>(n));
    out.push_back((out.back() * w).cwiseMax(0.0));
  }
  return out;
}

// Error code thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<repgeom::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const repgeom::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// The five metric configurations exercised throughout the tests.
inline std::vector<repgeom::MetricSpec> all_metrics(int shape_p = 100, int cov_p = 10) {
  using repgeom::MetricSpec;
  repgeom::ShapeParams angular;
  angular.p = shape_p;
  repgeom::ShapeParams euclid;
  euclid.p = shape_p;
  euclid.variant = repgeom::ShapeVariant::Euclidean;
  repgeom::AirParams gram;
  repgeom::AirParams cov;
  cov.embedding = repgeom::AirEmbedding::CovarianceRidge;
  cov.p = cov_p;
  return {MetricSpec::angular_cka(), MetricSpec::shape(angular), MetricSpec::shape(euclid),
          MetricSpec::air(gram), MetricSpec::air(cov)};
}

}  // namespace testing
