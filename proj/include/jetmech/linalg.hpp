#pragma once

#include <Eigen/Dense>

namespace jetmech {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Pivot threshold below which a matrix is treated as singular.
inline constexpr double kSingularPivotThreshold = 1e-10;

/// Smallest LU pivot divided by the largest entry of `a` (0 for a zero matrix).
///
/// Computed from an LU factorization with partial pivoting; scale invariant, so
/// it can be compared against an absolute threshold.
double relative_pivot(const Matrix& a);

/// Solves `a x = b` by LU with partial pivoting.
/// Throws SingularMatrix when relative_pivot(a) < threshold.
Vector solve_regular(const Matrix& a, const Vector& b,
                     double threshold = kSingularPivotThreshold);

/// Inverse of `a`; same singularity rule as solve_regular.
Matrix invert_regular(const Matrix& a, double threshold = kSingularPivotThreshold);

/// Orthonormal basis (as columns) of the kernel of `a`.
///
/// Singular values below rel_tol * (largest singular value) count as zero. A
/// zero matrix has the whole space as kernel.
Matrix null_space(const Matrix& a, double rel_tol = 1e-10);

}  // namespace jetmech
