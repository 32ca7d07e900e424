#include "jetmech/linalg.hpp"

#include <fmt/format.h>

#include <cmath>

#include "jetmech/error.hpp"

namespace jetmech {

double relative_pivot(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0.0;
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& packed = lu.matrixLU();
  return packed.diagonal().cwiseAbs().minCoeff() / scale;
}

Vector solve_regular(const Matrix& a, const Vector& b, double threshold) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw InputError(fmt::format("solve_regular: shape mismatch {}x{} vs {}", a.rows(), a.cols(),
                                 b.size()));
  }
  if (a.size() == 0) return Vector(0);
  const double scale = a.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Matrix> lu(a);
  const double pivot = scale > 0.0 ? lu.matrixLU().diagonal().cwiseAbs().minCoeff() / scale : 0.0;
  if (!(pivot >= threshold)) {
    throw SingularMatrix(fmt::format("matrix is singular (relative pivot {:.3g})", pivot));
  }
  return lu.solve(b);
}

Matrix invert_regular(const Matrix& a, double threshold) {
  if (a.rows() != a.cols()) throw InputError("invert_regular: matrix is not square");
  if (a.size() == 0) return Matrix(0, 0);
  const double scale = a.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Matrix> lu(a);
  const double pivot = scale > 0.0 ? lu.matrixLU().diagonal().cwiseAbs().minCoeff() / scale : 0.0;
  if (!(pivot >= threshold)) {
    throw SingularMatrix(fmt::format("matrix is singular (relative pivot {:.3g})", pivot));
  }
  return lu.inverse();
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = rel_tol * sigma[0];
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace jetmech
