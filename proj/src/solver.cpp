#include "vkf/solver.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/IterativeLinearSolvers>

namespace vkf {

VkfConfig VkfConfig::iterative() {
  VkfConfig c;
  c.solver = SolverKind::Iterative;
  c.tolerance = 1e-8;
  return c;
}

void VkfConfig::validate() const {
  if (diff_order < 1 || diff_order > 3) {
    throw InvalidArgument("unsupported difference order " + std::to_string(diff_order) + " (expected 1, 2 or 3)");
  }
  if (bin_length <= 4 * diff_order) {
    throw InvalidArgument("bin length must exceed 4 * diff_order");
  }
  if (!(overlap > 0.0 && overlap < 1.0)) {
    throw InvalidArgument("overlap must lie in (0, 1)");
  }
  if (overlap * static_cast<double>(bin_length) < 2.0) {
    throw InvalidArgument("overlap must span at least 2 samples");
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw InvalidArgument("solver tolerance must be positive");
  }
  if (max_iterations < 1 || max_unknowns < 1) {
    throw InvalidArgument("iteration and memory limits must be positive");
  }
}

template <typename Real>
BandedHermitian<std::complex<Real>> assemble_system(const std::vector<Vector<std::complex<Real>>>& carriers,
                                                     const std::vector<double>& weights, int q) {
  using Scalar = std::complex<Real>;
  const auto stencil = difference_stencil(q);
  const Index s = static_cast<Index>(carriers.size());
  if (s == 0 || weights.size() != carriers.size()) {
    throw InvalidArgument("need one weight per carrier and at least one carrier");
  }
  const Index n = carriers.front().size();
  for (const auto& c : carriers) {
    if (c.size() != n) {
      throw InvalidArgument("carrier lengths differ");
    }
  }
  BandedHermitian<Scalar> m(n * s, s * q);

  // C^H C: dense s x s block per time sample.
  for (Index k = 0; k < n; ++k) {
    for (Index a = 0; a < s; ++a) {
      for (Index b = 0; b <= a; ++b) {
        m.lower(k * s + a, k * s + b) += std::conj(carriers[a][k]) * carriers[b][k];
      }
    }
  }

  // (R S)^T (R S): one banded Gram term per order.
  for (Index ord = 0; ord < s; ++ord) {
    const Real w2 = static_cast<Real>(weights[ord] * weights[ord]);
    for (Index row = 0; row + q < n; ++row) {
      for (int j = 0; j <= q; ++j) {
        for (int l = 0; l <= j; ++l) {
          const Real v = w2 * static_cast<Real>(stencil[j] * stencil[l]);
          m.lower((row + j) * s + ord, (row + l) * s + ord) += v;
        }
      }
    }
  }
  return m;
}

template <typename Real>
Vector<std::complex<Real>> assemble_rhs(const std::vector<Vector<std::complex<Real>>>& carriers,
                                        const Vector<Real>& y) {
  const Index s = static_cast<Index>(carriers.size());
  const Index n = y.size();
  Vector<std::complex<Real>> b(n * s);
  for (Index k = 0; k < n; ++k) {
    for (Index a = 0; a < s; ++a) {
      b[k * s + a] = std::conj(carriers[a][k]) * y[k];
    }
  }
  return b;
}

template BandedHermitian<std::complex<double>> assemble_system<double>(const std::vector<Vector<std::complex<double>>>&,
                                                                       const std::vector<double>&, int);
template BandedHermitian<std::complex<float>> assemble_system<float>(const std::vector<Vector<std::complex<float>>>&,
                                                                     const std::vector<double>&, int);
template Vector<std::complex<double>> assemble_rhs<double>(const std::vector<Vector<std::complex<double>>>&,
                                                           const Vector<double>&);
template Vector<std::complex<float>> assemble_rhs<float>(const std::vector<Vector<std::complex<float>>>&,
                                                         const Vector<float>&);

template <typename Real>
BandedHermitian<Real> assemble_real_system(const std::vector<Vector<std::complex<Real>>>& carriers,
                                           const std::vector<double>& weights, int q) {
  const auto stencil = difference_stencil(q);
  const Index s = static_cast<Index>(carriers.size());
  if (s == 0 || weights.size() != carriers.size()) {
    throw InvalidArgument("need one weight per carrier and at least one carrier");
  }
  const Index n = carriers.front().size();
  for (const auto& c : carriers) {
    if (c.size() != n) {
      throw InvalidArgument("carrier lengths differ");
    }
  }
  const Index block = 2 * s;
  BandedHermitian<Real> m(n * block, block * q);

  // g[k]^T g[k] with g[k] = (cos phi_1, -sin phi_1, ..., cos phi_s, -sin phi_s).
  Vector<Real> g(block);
  for (Index k = 0; k < n; ++k) {
    for (Index ord = 0; ord < s; ++ord) {
      g[2 * ord] = carriers[ord][k].real();
      g[2 * ord + 1] = -carriers[ord][k].imag();
    }
    for (Index a = 0; a < block; ++a) {
      for (Index b = 0; b <= a; ++b) {
        m.lower(k * block + a, k * block + b) += g[a] * g[b];
      }
    }
  }

  // The smoothness penalty acts on real and imaginary parts alike.
  for (Index ord = 0; ord < s; ++ord) {
    const Real w2 = static_cast<Real>(weights[ord] * weights[ord]);
    for (Index row = 0; row + q < n; ++row) {
      for (int j = 0; j <= q; ++j) {
        for (int l = 0; l <= j; ++l) {
          const Real v = w2 * static_cast<Real>(stencil[j] * stencil[l]);
          for (Index part = 0; part < 2; ++part) {
            m.lower((row + j) * block + 2 * ord + part, (row + l) * block + 2 * ord + part) += v;
          }
        }
      }
    }
  }
  return m;
}

template <typename Real>
Vector<Real> assemble_real_rhs(const std::vector<Vector<std::complex<Real>>>& carriers, const Vector<Real>& y) {
  const Index s = static_cast<Index>(carriers.size());
  const Index n = y.size();
  Vector<Real> b(2 * n * s);
  for (Index k = 0; k < n; ++k) {
    for (Index ord = 0; ord < s; ++ord) {
      b[2 * (k * s + ord)] = carriers[ord][k].real() * y[k];
      b[2 * (k * s + ord) + 1] = -carriers[ord][k].imag() * y[k];
    }
  }
  return b;
}

template BandedHermitian<double> assemble_real_system<double>(const std::vector<Vector<std::complex<double>>>&,
                                                              const std::vector<double>&, int);
template BandedHermitian<float> assemble_real_system<float>(const std::vector<Vector<std::complex<float>>>&,
                                                            const std::vector<double>&, int);
template Vector<double> assemble_real_rhs<double>(const std::vector<Vector<std::complex<double>>>&,
                                                  const Vector<double>&);
template Vector<float> assemble_real_rhs<float>(const std::vector<Vector<std::complex<float>>>&,
                                                const Vector<float>&);

double weight_for_bandwidth(double bandwidth_hz, double sample_rate, int q, Formulation formulation) {
  difference_stencil(q);
  if (!(sample_rate > 0.0) || !(bandwidth_hz > 0.0) || bandwidth_hz >= 0.5 * sample_rate) {
    throw InvalidArgument("bandwidth must lie in (0, sample_rate / 2)");
  }
  const double g = 2.0 * std::sin(std::numbers::pi * bandwidth_hz / sample_rate);
  // the real model's data term sees half the envelope energy
  const double fit = formulation == Formulation::RealMeasurement ? 0.5 : 1.0;
  return std::sqrt(fit * (std::sqrt(2.0) - 1.0)) * std::pow(g, -q);
}

RealVector hann_rise(Index count) {
  RealVector w(count);
  for (Index j = 0; j < count; ++j) {
    w[j] = 0.5 - 0.5 * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(count));
  }
  return w;
}

BinPlan plan_bins(Index n_samples, Index bin_length, double overlap) {
  BinPlan plan;
  if (n_samples <= bin_length) {
    plan.bins.push_back({0, n_samples});
    return plan;
  }
  const Index hop = std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(bin_length) * (1.0 - overlap))));
  std::vector<Index> starts{0};
  while (starts.back() + bin_length < n_samples) {
    starts.push_back(std::min(starts.back() + hop, n_samples - bin_length));
  }
  // A final bin that barely advances would leave no room for a cross-fade;
  // drop its predecessor when the remaining neighbours still overlap.
  if (starts.size() >= 3) {
    const Index last = starts.back();
    const Index prev = starts[starts.size() - 2];
    const Index before = starts[starts.size() - 3];
    if (2 * (last - prev) < hop && last - before <= bin_length - 2) {
      starts.erase(starts.end() - 2);
    }
  }
  for (Index s : starts) {
    plan.bins.push_back({s, bin_length});
  }

  const std::size_t n_fades = plan.bins.size() - 1;
  std::vector<Index> mid(n_fades), span(n_fades);
  for (std::size_t i = 0; i < n_fades; ++i) {
    const Index lo = plan.bins[i + 1].first;
    const Index hi = plan.bins[i].first + plan.bins[i].count;
    span[i] = hi - lo;
    mid[i] = lo + span[i] / 2;
  }
  for (std::size_t i = 0; i < n_fades; ++i) {
    Index half = span[i] / 2;
    if (i > 0) half = std::min(half, (mid[i] - mid[i - 1]) / 2);
    if (i + 1 < n_fades) half = std::min(half, (mid[i + 1] - mid[i]) / 2);
    plan.fades.push_back({mid[i] - half, 2 * half});
  }
  return plan;
}

std::vector<RealVector> blend_weights(const BinPlan& plan) {
  std::vector<RealVector> weights;
  weights.reserve(plan.bins.size());
  for (const auto& bin : plan.bins) {
    weights.push_back(RealVector::Zero(bin.count));
  }
  for (std::size_t b = 0; b < plan.bins.size(); ++b) {
    const auto& bin = plan.bins[b];
    const Index own_first = b == 0 ? bin.first : plan.fades[b - 1].first + plan.fades[b - 1].count;
    const Index own_last = b + 1 == plan.bins.size() ? bin.first + bin.count : plan.fades[b].first;
    for (Index k = own_first; k < own_last; ++k) {
      weights[b][k - bin.first] = 1.0;
    }
  }
  for (std::size_t i = 0; i < plan.fades.size(); ++i) {
    const auto& fade = plan.fades[i];
    const RealVector rise = hann_rise(fade.count);
    for (Index j = 0; j < fade.count; ++j) {
      const Index k = fade.first + j;
      weights[i + 1][k - plan.bins[i + 1].first] = rise[j];
      weights[i][k - plan.bins[i].first] = 1.0 - rise[j];
    }
  }
  return weights;
}

namespace {

struct BlockSolution {
  std::vector<ComplexVector> envelopes;
  BlockReport report;
};

// Factors (or iterates on) one assembled system and checks the solution.
template <typename Scalar>
Vector<Scalar> solve_checked(const BandedHermitian<Scalar>& m, const Vector<Scalar>& rhs, const VkfConfig& config,
                             Index bin, Index block, BlockReport& report) {
  Vector<Scalar> a;
  if (config.solver == SolverKind::DirectBanded) {
    BandedCholesky<Scalar> chol(m);
    if (!chol.ok()) {
      const Index pivot = chol.failed_pivot();
      std::ostringstream msg;
      msg << "banded Cholesky failed: non-positive pivot at unknown " << pivot << " (sample " << pivot / block
          << "); system is singular or indefinite";
      throw SolverError(msg.str(), bin);
    }
    a = chol.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<Scalar>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<Scalar>>
        cg;
    cg.setTolerance(config.tolerance);
    cg.setMaxIterations(config.max_iterations);
    const Eigen::SparseMatrix<Scalar> sparse = m.to_sparse();  // cg keeps a reference
    cg.compute(sparse);
    a = cg.solve(rhs);
    report.iterations = cg.iterations();
    if (cg.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "conjugate gradient did not converge: relative residual " << cg.error() << " after " << cg.iterations()
          << " iterations (tolerance " << config.tolerance << ")";
      throw SolverError(msg.str(), bin);
    }
  }
  const double rhs_norm = rhs.norm();
  const double r = (m.multiply(a) - rhs).norm();
  report.relative_residual = r / rhs_norm;
  report.backward_error = r / (m.norm_inf() * a.norm() + rhs_norm);
  const double check =
      config.solver == SolverKind::DirectBanded ? report.backward_error : report.relative_residual;
  // CG's own stop rule uses a differently rounded residual; allow for that.
  const double slack = config.solver == SolverKind::DirectBanded ? 1.0 : 1.01;
  if (!std::isfinite(r) || !a.allFinite() || check > config.tolerance * slack) {
    std::ostringstream msg;
    msg << "solution residual check failed: relative residual " << report.relative_residual << ", backward error "
        << report.backward_error << " (tolerance " << config.tolerance << ")";
    throw SolverError(msg.str(), bin);
  }
  return a;
}

BlockSolution solve_system(const std::vector<ComplexVector>& carriers, const std::vector<double>& weights,
                           const RealVector& y, const VkfConfig& config, Index bin) {
  const Index s = static_cast<Index>(carriers.size());
  const Index n = y.size();
  if (n * s > config.max_unknowns) {
    throw InvalidArgument("system of " + std::to_string(n * s) + " unknowns exceeds the configured limit of " +
                          std::to_string(config.max_unknowns));
  }

  BlockSolution out;
  out.report.bin = bin;
  out.report.count = n;
  out.envelopes.assign(static_cast<std::size_t>(s), ComplexVector::Zero(n));
  if (y.isZero(0.0)) {
    return out;
  }

  if (config.formulation == Formulation::RealMeasurement) {
    const RealVector x = solve_checked(assemble_real_system<double>(carriers, weights, config.diff_order),
                                       assemble_real_rhs<double>(carriers, y), config, bin, 2 * s, out.report);
    for (Index k = 0; k < n; ++k) {
      for (Index ord = 0; ord < s; ++ord) {
        const Index i = 2 * (k * s + ord);
        out.envelopes[ord][k] = Complex(x[i], x[i + 1]);
      }
    }
  } else {
    const ComplexVector a = solve_checked(assemble_system<double>(carriers, weights, config.diff_order),
                                          assemble_rhs<double>(carriers, y), config, bin, s, out.report);
    // A real cosine a cos(phi + p) projects half its amplitude onto the
    // positive-frequency carrier.
    for (Index k = 0; k < n; ++k) {
      for (Index ord = 0; ord < s; ++ord) {
        out.envelopes[ord][k] = 2.0 * a[k * s + ord];
      }
    }
  }
  return out;
}

std::vector<ComplexVector> slice(const std::vector<ComplexVector>& v, Index first, Index count) {
  std::vector<ComplexVector> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    out.emplace_back(x.segment(first, count));
  }
  return out;
}

Decomposition decompose(const SampledSignal& y, const std::vector<OrderSpec>& orders, const VkfConfig& config,
                        const BinPlan& plan) {
  const Index n = y.size();
  const Index s = static_cast<Index>(orders.size());
  if (orders.empty()) {
    throw InvalidArgument("at least one order is required");
  }
  if (n <= config.diff_order) {
    throw InvalidArgument("signal must contain more than diff_order samples");
  }

  Decomposition out;
  std::vector<ComplexVector> carriers;
  std::vector<double> weights;
  for (const auto& order : orders) {
    if (order.track.size() != n) {
      throw InvalidArgument("frequency track length " + std::to_string(order.track.size()) +
                            " does not match signal length " + std::to_string(n));
    }
    out.phases.push_back(build_phase(order.track, y.sample_rate()));
    carriers.push_back(build_carrier(out.phases.back()));
    weights.push_back(order.weight);
  }

  for (Index a = 0; a < s; ++a) {
    for (Index b = a + 1; b < s; ++b) {
      const RealVector& fa = orders[a].track.freqs();
      const RealVector& fb = orders[b].track.freqs();
      const Index close = ((fa - fb).array().abs() < 1.0).count();
      if (100 * close > n) {
        std::ostringstream msg;
        msg << "orders " << a << " and " << b << " lie within 1 Hz of each other for " << close << " of " << n
            << " samples; their separation there is governed by the regularizer only";
        out.warnings.push_back(msg.str());
      }
    }
  }

  const std::size_t n_bins = plan.bins.size();
  std::vector<BlockSolution> solved(n_bins);
  std::vector<std::exception_ptr> errors(n_bins);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < n_bins; b = next++) {
      try {
        const auto& bin = plan.bins[b];
        solved[b] = solve_system(slice(carriers, bin.first, bin.count), weights,
                                 y.samples().segment(bin.first, bin.count), config, static_cast<Index>(b));
        solved[b].report.first = bin.first;
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  unsigned n_threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_bins));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<ComplexVector> env(static_cast<std::size_t>(s), ComplexVector::Zero(n));
  if (n_bins == 1) {
    env = std::move(solved[0].envelopes);
  } else {
    const auto blend = blend_weights(plan);
    for (std::size_t b = 0; b < n_bins; ++b) {
      const auto& bin = plan.bins[b];
      for (Index ord = 0; ord < s; ++ord) {
        for (Index j = 0; j < bin.count; ++j) {
          env[ord][bin.first + j] += blend[b][j] * solved[b].envelopes[ord][j];
        }
      }
    }
  }

  out.residual = y.samples();
  for (Index ord = 0; ord < s; ++ord) {
    out.components.push_back(project_real(env[ord], out.phases[ord].phases()));
    out.residual -= out.components.back();
    out.envelopes.emplace_back(std::move(env[ord]));
  }
  for (auto& sol : solved) {
    out.blocks.push_back(sol.report);
  }
  const Index q = config.diff_order;
  for (Index k = 0; k < n; ++k) {
    if (k < q || k >= n - q) out.low_confidence.push_back(k);
  }
  return out;
}

}  // namespace

Decomposition solve_block(const SampledSignal& y, const std::vector<OrderSpec>& orders, const VkfConfig& config) {
  config.validate();
  BinPlan whole;
  whole.bins.push_back({0, y.size()});
  return decompose(y, orders, config, whole);
}

Decomposition solve_long(const SampledSignal& y, const std::vector<OrderSpec>& orders, const VkfConfig& config) {
  config.validate();
  return decompose(y, orders, config, plan_bins(y.size(), config.bin_length, config.overlap));
}

}  // namespace vkf
