#include "repgeom/linalg.hpp"

#include "repgeom/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <string>

namespace repgeom {

double frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) fail(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

Matrix SpdEigen::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

Matrix SpdEigen::apply(const std::function<double(double)>& f) const {
  Vector mapped = values.unaryExpr(f);
  Matrix out = vectors * mapped.asDiagonal() * vectors.transpose();
  return symmetrize(out);
}

SpdEigen symmetric_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::ShapeMismatch, "eigendecomposition needs a square matrix");
  require_finite(a, "symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a));
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite, "symmetric eigendecomposition did not converge");
  }
  // Eigen sorts ascending; flip to descending.
  SpdEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SpdEigen spd_eigen(const Matrix& a) {
  SpdEigen eig = symmetric_eigen(a);
  if (eig.values.size() == 0) fail(ErrorCode::ShapeMismatch, "empty SPD matrix");
  const double smallest = eig.values(eig.values.size() - 1);
  if (!(smallest > 1e-12)) {
    fail(ErrorCode::NotPositiveDefinite,
         "matrix is not positive definite (smallest eigenvalue " + std::to_string(smallest) + ")");
  }
  if (eig.values(0) / smallest > 1e12) {
    fail(ErrorCode::IllConditioned, "SPD matrix condition number exceeds 1e12");
  }
  return eig;
}

Matrix spd_pow(const Matrix& p, double k) {
  if (!std::isfinite(k)) fail(ErrorCode::InvalidArgument, "matrix power must be finite");
  if (k < 0.0) {
    return spd_eigen(p).apply([k](double v) { return std::pow(v, k); });
  }
  SpdEigen eig = symmetric_eigen(p);
  const bool integral = std::floor(k) == k;
  if (!integral) {
    const double floor = -1e-12 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    if (eig.values.minCoeff() < floor) {
      fail(ErrorCode::NotPositiveDefinite, "fractional power of an indefinite matrix");
    }
  }
  return eig.apply([k, integral](double v) {
    if (!integral && v < 0.0) v = 0.0;
    return std::pow(v, k);
  });
}

Matrix spd_exp(const Matrix& s) {
  return symmetric_eigen(s).apply([](double v) { return std::exp(v); });
}

Matrix spd_log(const Matrix& p) {
  SpdEigen eig = symmetric_eigen(p);
  if (eig.values.size() == 0 || !(eig.values.minCoeff() > 1e-12)) {
    fail(ErrorCode::NotPositiveDefinite, "matrix logarithm needs a positive definite matrix");
  }
  return eig.apply([](double v) { return std::log(v); });
}

Matrix center_columns(const Matrix& x) { return x.rowwise() - x.colwise().mean(); }

PrincipalAxes principal_axes(const Matrix& centered) {
  // Eigendecomposition of the smaller Gram matrix. Eigen 3.4's divide-and-
  // conquer SVD can return wrong vectors when singular values are clustered,
  // which whitened data produces routinely.
  const Index m = centered.rows();
  const Index n = centered.cols();
  PrincipalAxes out;
  if (n <= m) {
    SpdEigen eig = symmetric_eigen(centered.transpose() * centered);
    out.axes = eig.vectors;
    out.variances = eig.values.cwiseMax(0.0) / static_cast<double>(m);
  } else {
    SpdEigen eig = symmetric_eigen(centered * centered.transpose());
    out.axes = Matrix::Zero(n, m);
    out.variances = eig.values.cwiseMax(0.0) / static_cast<double>(m);
    const double floor = 1e-12 * std::max(eig.values(0), 0.0);
    for (Index k = 0; k < m; ++k) {
      if (!(eig.values(k) > floor)) {
        out.variances(k) = 0.0;
        continue;
      }
      out.axes.col(k) = centered.transpose() * eig.vectors.col(k);
      out.axes.col(k).normalize();
    }
  }
  for (Index j = 0; j < out.axes.cols(); ++j) {
    Index arg = 0;
    out.axes.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.axes(arg, j) < 0.0) out.axes.col(j) *= -1.0;
  }
  return out;
}

Matrix solve_symmetric_sylvester(const Matrix& s, const Matrix& c) {
  if (s.rows() != s.cols() || c.rows() != s.rows() || c.cols() != s.cols()) {
    fail(ErrorCode::ShapeMismatch, "Sylvester operands must be square and the same size");
  }
  SpdEigen eig = symmetric_eigen(s);
  const Index k = s.rows();
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  const double rhs_scale = c.cwiseAbs().maxCoeff();
  Matrix rotated = eig.vectors.transpose() * c * eig.vectors;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double denom = eig.values(i) + eig.values(j);
      if (denom > 1e-12 * scale) {
        rotated(i, j) /= denom;
      } else if (std::abs(rotated(i, j)) <= 1e-6 * rhs_scale) {
        rotated(i, j) = 0.0;
      } else {
        fail(ErrorCode::SingularSylvester,
             "Sylvester right-hand side has a component in the null space of the base point");
      }
    }
  }
  return eig.vectors * rotated * eig.vectors.transpose();
}

namespace sphere {

double distance(const Matrix& p, const Matrix& q) {
  const double c = frobenius_inner(p, q);
  const double s = (q - c * p).norm();
  return std::atan2(s, c);
}

Matrix slerp(const Matrix& p, const Matrix& q, double t) {
  const double omega = distance(p, q);
  if (omega < kDegenerateTolerance) return p;
  if (std::numbers::pi - omega < 1e-6) {
    fail(ErrorCode::AntipodalPoints, "geodesic between antipodal points is not unique");
  }
  const double a = std::sin((1.0 - t) * omega) / std::sin(omega);
  const double b = std::sin(t * omega) / std::sin(omega);
  Matrix out = a * p + b * q;
  return out / out.norm();
}

Matrix log_map(const Matrix& p, const Matrix& q) {
  const double c = frobenius_inner(p, q);
  Matrix u = q - c * p;
  const double s = u.norm();
  const double theta = std::atan2(s, c);
  if (theta < kDegenerateTolerance) return Matrix::Zero(p.rows(), p.cols());
  if (std::numbers::pi - theta < 1e-6) {
    fail(ErrorCode::AntipodalPoints, "log map between antipodal points is not unique");
  }
  return u * (theta / s);
}

Matrix exp_map(const Matrix& p, const Matrix& w) {
  const double n = w.norm();
  if (n == 0.0) return p;
  Matrix out = std::cos(n) * p + (std::sin(n) / n) * w;
  return out / out.norm();
}

}  // namespace sphere

double angle_between(const Matrix& u, const Matrix& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) fail(ErrorCode::DegenerateAngle, "angle with a zero vector");
  Matrix uh = u / nu;
  Matrix vh = v / nv;
  return 2.0 * std::atan2((uh - vh).norm(), (uh + vh).norm());
}

}  // namespace repgeom
