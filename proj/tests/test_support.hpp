#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vkf/types.hpp"

namespace vkf::test {

// Backward-difference coefficients written out by hand, oldest sample first.
inline std::vector<double> stencil_by_hand(int q) {
  switch (q) {
    case 1: return {-1, 1};
    case 2: return {1, -2, 1};
    case 3: return {-1, 3, -3, 1};
    default: return {};
  }
}

// Phase by direct summation of the rectangle rule.
inline RealVector cumulative_phase(const RealVector& f, double fs) {
  RealVector phi(f.size());
  double acc = 0.0;
  for (Index k = 0; k < f.size(); ++k) {
    if (k > 0) acc += 2.0 * std::numbers::pi * f[k] / fs;
    phi[k] = acc;
  }
  return phi;
}

// Stacked-layout normal equations of the real measurement model. Unknowns are
// [Re A_1 (N), Im A_1 (N), Re A_2 (N), ...]; each row of G is one sample.
struct StackedReal {
  Eigen::SparseMatrix<double> m;
  Eigen::VectorXd rhs;
};

inline StackedReal stacked_real_system(const std::vector<RealVector>& phases, const std::vector<double>& weights,
                                       const RealVector& y, int q) {
  const Index n = y.size();
  const Index s = static_cast<Index>(phases.size());
  std::vector<Eigen::Triplet<double>> g, d;
  for (Index o = 0; o < s; ++o) {
    for (Index k = 0; k < n; ++k) {
      g.emplace_back(k, 2 * o * n + k, std::cos(phases[o][k]));
      g.emplace_back(k, (2 * o + 1) * n + k, -std::sin(phases[o][k]));
    }
    const auto st = stencil_by_hand(q);
    for (int part = 0; part < 2; ++part) {
      const Index col0 = (2 * o + part) * n;
      const Index row0 = (2 * o + part) * (n - q);
      for (Index i = 0; i < n - q; ++i) {
        for (int j = 0; j <= q; ++j) d.emplace_back(row0 + i, col0 + i + j, weights[o] * st[j]);
      }
    }
  }
  Eigen::SparseMatrix<double> G(n, 2 * s * n), D(2 * s * (n - q), 2 * s * n);
  G.setFromTriplets(g.begin(), g.end());
  D.setFromTriplets(d.begin(), d.end());
  StackedReal out;
  out.m = Eigen::SparseMatrix<double>(G.transpose() * G) + Eigen::SparseMatrix<double>(D.transpose() * D);
  out.rhs = G.transpose() * y;
  return out;
}

inline std::vector<ComplexVector> unstack_real(const Eigen::VectorXd& x, Index n, Index s) {
  std::vector<ComplexVector> env;
  for (Index o = 0; o < s; ++o) {
    ComplexVector e(n);
    for (Index k = 0; k < n; ++k) e[k] = Complex(x[2 * o * n + k], x[(2 * o + 1) * n + k]);
    env.push_back(std::move(e));
  }
  return env;
}

// Stacked complex system [C^H C + (R S)^T (R S)] a = C^H y with
// C = [diag(c_1) ... diag(c_s)], dense.
inline Eigen::MatrixXcd stacked_complex_matrix(const std::vector<RealVector>& phases,
                                               const std::vector<double>& weights, Index n, int q) {
  const Index s = static_cast<Index>(phases.size());
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, s * n);
  Eigen::MatrixXd RS = Eigen::MatrixXd::Zero(s * (n - q), s * n);
  const auto st = stencil_by_hand(q);
  for (Index o = 0; o < s; ++o) {
    for (Index k = 0; k < n; ++k) C(k, o * n + k) = std::polar(1.0, phases[o][k]);
    for (Index i = 0; i < n - q; ++i) {
      for (int j = 0; j <= q; ++j) RS(o * (n - q) + i, o * n + i + j) = weights[o] * st[j];
    }
  }
  return C.adjoint() * C + (RS.transpose() * RS).cast<Complex>();
}

inline Eigen::VectorXcd stacked_complex_rhs(const std::vector<RealVector>& phases, const RealVector& y) {
  const Index n = y.size();
  const Index s = static_cast<Index>(phases.size());
  Eigen::VectorXcd b(s * n);
  for (Index o = 0; o < s; ++o) {
    for (Index k = 0; k < n; ++k) b[o * n + k] = std::polar(1.0, -phases[o][k]) * y[k];
  }
  return b;
}

inline double rms(const RealVector& v) { return v.size() ? std::sqrt(v.squaredNorm() / double(v.size())) : 0.0; }

inline double correlation(const RealVector& a, const RealVector& b) {
  const RealVector da = a.array() - a.mean();
  const RealVector db = b.array() - b.mean();
  return da.dot(db) / (da.norm() * db.norm());
}

}  // namespace vkf::test
