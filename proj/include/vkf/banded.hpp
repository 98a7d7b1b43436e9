#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include <Eigen/Sparse>

#include "vkf/types.hpp"

namespace vkf {

namespace detail {
template <typename T>
struct real_of {
  using type = T;
};
template <typename T>
struct real_of<std::complex<T>> {
  using type = T;
};

template <typename T>
T conj_if(const T& x) {
  if constexpr (std::is_arithmetic_v<T>) {
    return x;
  } else {
    return std::conj(x);
  }
}
}  // namespace detail

/// Hermitian (or real symmetric) band matrix in lower band storage.
///
/// Entry (i, j) with 0 <= i - j <= bandwidth lives at band_(i - j, j); the
/// upper triangle is implied by conjugate symmetry.
template <typename Scalar>
class BandedHermitian {
 public:
  using RealScalar = typename detail::real_of<Scalar>::type;

  BandedHermitian(Index size, Index bandwidth)
      : size_(size), bandwidth_(bandwidth), band_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(bandwidth + 1, size)) {}

  Index size() const { return size_; }
  Index bandwidth() const { return bandwidth_; }

  /// Lower-triangle access; requires row >= col and row - col <= bandwidth.
  Scalar& lower(Index row, Index col) {
    eigen_assert(row >= col && row - col <= bandwidth_);
    return band_(row - col, col);
  }
  const Scalar& lower(Index row, Index col) const {
    eigen_assert(row >= col && row - col <= bandwidth_);
    return band_(row - col, col);
  }

  /// Full access to any entry (zero outside the band).
  Scalar operator()(Index row, Index col) const {
    if (row >= col) {
      return row - col <= bandwidth_ ? band_(row - col, col) : Scalar(0);
    }
    return col - row <= bandwidth_ ? detail::conj_if(band_(col - row, row)) : Scalar(0);
  }

  Vector<Scalar> multiply(const Vector<Scalar>& x) const {
    eigen_assert(x.size() == size_);
    Vector<Scalar> y = Vector<Scalar>::Zero(size_);
    for (Index j = 0; j < size_; ++j) {
      y[j] += band_(0, j) * x[j];
      const Index last = std::min(size_ - 1, j + bandwidth_);
      for (Index i = j + 1; i <= last; ++i) {
        const Scalar a = band_(i - j, j);
        y[i] += a * x[j];
        y[j] += detail::conj_if(a) * x[i];
      }
    }
    return y;
  }

  /// Maximum absolute row sum (the matrix infinity norm).
  RealScalar norm_inf() const {
    Vector<RealScalar> rows = Vector<RealScalar>::Zero(size_);
    for (Index j = 0; j < size_; ++j) {
      rows[j] += std::abs(band_(0, j));
      const Index last = std::min(size_ - 1, j + bandwidth_);
      for (Index i = j + 1; i <= last; ++i) {
        const RealScalar a = std::abs(band_(i - j, j));
        rows[i] += a;
        rows[j] += a;
      }
    }
    return size_ > 0 ? rows.maxCoeff() : RealScalar(0);
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(size_, size_);
    for (Index j = 0; j < size_; ++j) {
      for (Index i = 0; i < size_; ++i) {
        m(i, j) = (*this)(i, j);
      }
    }
    return m;
  }

  Eigen::SparseMatrix<Scalar> to_sparse() const {
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(static_cast<std::size_t>(size_ * (2 * bandwidth_ + 1)));
    for (Index j = 0; j < size_; ++j) {
      triplets.emplace_back(j, j, band_(0, j));
      const Index last = std::min(size_ - 1, j + bandwidth_);
      for (Index i = j + 1; i <= last; ++i) {
        triplets.emplace_back(i, j, band_(i - j, j));
        triplets.emplace_back(j, i, detail::conj_if(band_(i - j, j)));
      }
    }
    Eigen::SparseMatrix<Scalar> m(size_, size_);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

 private:
  template <typename>
  friend class BandedCholesky;

  Index size_;
  Index bandwidth_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> band_;
};

/// In-place band Cholesky factorization A = L L^H.
///
/// Right-looking variant working directly on the lower band storage; cost is
/// O(n * bandwidth^2) and the factor occupies the same storage as A.
template <typename Scalar>
class BandedCholesky {
 public:
  using RealScalar = typename detail::real_of<Scalar>::type;

  BandedCholesky() = default;
  explicit BandedCholesky(BandedHermitian<Scalar> a) { compute(std::move(a)); }

  /// Returns false (and leaves info() set) if a pivot is not strictly positive.
  bool compute(BandedHermitian<Scalar> a) {
    factor_ = std::move(a);
    ok_ = false;
    failed_pivot_ = -1;
    auto& band = factor_->band_;
    const Index n = factor_->size_;
    const Index p = factor_->bandwidth_;
    for (Index j = 0; j < n; ++j) {
      const RealScalar pivot = std::real(band(0, j));
      if (!(pivot > RealScalar(0)) || !std::isfinite(pivot)) {
        failed_pivot_ = j;
        return false;
      }
      const RealScalar d = std::sqrt(pivot);
      band(0, j) = d;
      const Index last = std::min(n - 1, j + p);
      for (Index i = j + 1; i <= last; ++i) {
        band(i - j, j) /= d;
      }
      // trailing update A(r, c) -= L(r, j) conj(L(c, j)) for j < c <= r <= last
      for (Index c = j + 1; c <= last; ++c) {
        const Scalar lc = detail::conj_if(band(c - j, j));
        for (Index r = c; r <= last; ++r) {
          band(r - c, c) -= band(r - j, j) * lc;
        }
      }
    }
    ok_ = true;
    return true;
  }

  bool ok() const { return ok_; }
  Index failed_pivot() const { return failed_pivot_; }

  Vector<Scalar> solve(const Vector<Scalar>& b) const {
    eigen_assert(ok_ && b.size() == factor_->size_);
    const auto& band = factor_->band_;
    const Index n = factor_->size_;
    const Index p = factor_->bandwidth_;
    Vector<Scalar> x = b;
    // L z = b
    for (Index j = 0; j < n; ++j) {
      x[j] /= band(0, j);
      const Index last = std::min(n - 1, j + p);
      for (Index i = j + 1; i <= last; ++i) {
        x[i] -= band(i - j, j) * x[j];
      }
    }
    // L^H x = z
    for (Index j = n - 1; j >= 0; --j) {
      Scalar acc = x[j];
      const Index last = std::min(n - 1, j + p);
      for (Index i = j + 1; i <= last; ++i) {
        acc -= detail::conj_if(band(i - j, j)) * x[i];
      }
      x[j] = acc / band(0, j);
    }
    return x;
  }

 private:
  std::optional<BandedHermitian<Scalar>> factor_;
  bool ok_ = false;
  Index failed_pivot_ = -1;
};

}  // namespace vkf
