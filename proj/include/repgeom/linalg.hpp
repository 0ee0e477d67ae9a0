#pragma once

#include "repgeom/types.hpp"

#include <functional>

namespace repgeom {

double frobenius_inner(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& a);
void require_finite(const Matrix& a, const char* what);
Matrix symmetrize(const Matrix& a);

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
struct SpdEigen {
  Matrix vectors;
  Vector values;

  Matrix reconstruct() const;
  /// V f(Σ) Vᵀ with f applied to each eigenvalue.
  Matrix apply(const std::function<double(double)>& f) const;
};

/// Symmetrizes `a` first, then decomposes.
SpdEigen symmetric_eigen(const Matrix& a);

/// As symmetric_eigen, but rejects eigenvalues <= 1e-12 and condition
/// numbers above 1e12.
SpdEigen spd_eigen(const Matrix& a);

Matrix spd_pow(const Matrix& p, double k);
Matrix spd_exp(const Matrix& s);
Matrix spd_log(const Matrix& p);

/// Principal axes of the centered rows of `x` (n x r, r = min(m, n)),
/// zero columns where the variance vanishes and n > m,
/// variance-descending, each column signed so its largest-magnitude entry is
/// positive.
struct PrincipalAxes {
  Matrix axes;
  Vector variances;  // (1/m) scaled
};
PrincipalAxes principal_axes(const Matrix& centered);

Matrix center_columns(const Matrix& x);

/// Solves S A + A S = C for symmetric positive semidefinite S. Eigen-pairs of
/// S whose sum vanishes contribute A = 0 in that block; a nonzero right-hand
/// side there raises SingularSylvester.
Matrix solve_symmetric_sylvester(const Matrix& s, const Matrix& c);

// Unit-sphere geometry in Frobenius space; inputs must have unit norm.
namespace sphere {
double distance(const Matrix& p, const Matrix& q);
Matrix slerp(const Matrix& p, const Matrix& q, double t);
Matrix log_map(const Matrix& p, const Matrix& q);
Matrix exp_map(const Matrix& p, const Matrix& w);
}  // namespace sphere

/// Angle between two nonzero matrices under the Frobenius inner product,
/// 2·atan2(|û − v̂|, |û + v̂|), which stays accurate near 0 and pi.
double angle_between(const Matrix& u, const Matrix& v);

inline constexpr double kDegenerateTolerance = 1e-8;

}  // namespace repgeom
