#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Sparse>

#include "vkf/types.hpp"

namespace vkf {

/// Coefficients of the q-th backward difference, oldest sample first:
/// q = 1 -> (-1, 1), q = 2 -> (1, -2, 1), q = 3 -> (-1, 3, -3, 1).
inline std::vector<int> difference_stencil(int q) {
  if (q < 1 || q > 3) {
    throw InvalidArgument("unsupported difference order " + std::to_string(q) + " (expected 1, 2 or 3)");
  }
  std::vector<int> coeffs(static_cast<std::size_t>(q) + 1);
  int binom = 1;
  for (int j = q; j >= 0; --j) {
    // coefficient of A[k - (q - j)] is (-1)^(q-j) C(q, q-j)
    const int lag = q - j;
    coeffs[static_cast<std::size_t>(j)] = (lag % 2 == 0 ? 1 : -1) * binom;
    binom = binom * (q - lag) / (lag + 1);
  }
  return coeffs;
}

/// (n - q) x n band matrix whose row i applies the q-th difference ending at
/// sample i + q. No boundary rows are synthesized.
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> difference_matrix(Index n_samples, int q) {
  const auto stencil = difference_stencil(q);
  if (n_samples <= q) {
    throw InvalidArgument("difference matrix needs more than q samples");
  }
  const Index rows = n_samples - q;
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> s(rows, n_samples);
  s.reserve(Eigen::VectorXi::Constant(rows, q + 1));
  for (Index i = 0; i < rows; ++i) {
    for (int j = 0; j <= q; ++j) {
      s.insert(i, i + j) = static_cast<Scalar>(stencil[static_cast<std::size_t>(j)]);
    }
  }
  s.makeCompressed();
  return s;
}

/// Applies the q-th difference to a vector without forming the matrix.
template <typename Derived>
Vector<typename Derived::Scalar> apply_difference(const Eigen::MatrixBase<Derived>& x, int q) {
  const auto stencil = difference_stencil(q);
  const Index rows = x.size() - q;
  Vector<typename Derived::Scalar> out = Vector<typename Derived::Scalar>::Zero(std::max<Index>(rows, 0));
  for (Index i = 0; i < rows; ++i) {
    for (int j = 0; j <= q; ++j) {
      out[i] += static_cast<double>(stencil[static_cast<std::size_t>(j)]) * x[i + j];
    }
  }
  return out;
}

}  // namespace vkf
