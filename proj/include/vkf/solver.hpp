#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vkf/banded.hpp"
#include "vkf/difference.hpp"
#include "vkf/phase.hpp"
#include "vkf/types.hpp"

namespace vkf {

enum class SolverKind { DirectBanded, Iterative };

// RealMeasurement fits y[k] = sum_n Re(A_n[k] exp(j phi_n[k])) over the real
// and imaginary envelope parts; a stationary tone is represented exactly.
// ComplexCarrier solves [C^H C + (R S)^T (R S)] a = C^H y as written, with
// the real y matched against the positive-frequency carriers only.
enum class Formulation { RealMeasurement, ComplexCarrier };

struct VkfConfig {
  int diff_order = 2;
  Index bin_length = 16384;
  double overlap = 0.5;
  SolverKind solver = SolverKind::DirectBanded;
  Formulation formulation = Formulation::RealMeasurement;
  // Direct: bound on the normwise backward error of the factored solve.
  // Iterative: bound on ||M a - b|| / ||b||, the conjugate-gradient stop rule.
  double tolerance = 1e-10;
  Index max_iterations = 200000;
  // Upper bound on n_samples * n_orders for a single system.
  Index max_unknowns = Index(1) << 26;
  // Worker threads for solve_long; 0 selects hardware concurrency.
  unsigned threads = 0;

  /// Iterative solve with its default tolerance of 1e-8.
  static VkfConfig iterative();

  void validate() const;
};

/// Per-system solve diagnostics.
struct BlockReport {
  Index bin = 0;
  Index first = 0;  // first sample covered
  Index count = 0;  // samples covered
  double relative_residual = 0.0;  // ||M a - b|| / ||b||
  double backward_error = 0.0;     // ||M a - b|| / (||M||_inf ||a|| + ||b||)
  Index iterations = 0;            // 0 for the direct solver
};

struct Decomposition {
  std::vector<ComplexEnvelope> envelopes;
  std::vector<RealVector> components;
  RealVector residual;
  std::vector<PhaseTrack> phases;
  std::vector<BlockReport> blocks;
  // Samples within diff_order of either record end, where envelopes are
  // poorly constrained.
  std::vector<Index> low_confidence;
  std::vector<std::string> warnings;
};

/// Assembles C^H C + (R S)^T (R S) with unknowns interleaved by time
/// (A_1[k], ..., A_s[k], A_1[k+1], ...), giving half-bandwidth s * q.
template <typename Real = double>
BandedHermitian<std::complex<Real>> assemble_system(const std::vector<Vector<std::complex<Real>>>& carriers,
                                                     const std::vector<double>& weights, int q);

/// Right-hand side C^H y in the interleaved layout.
template <typename Real = double>
Vector<std::complex<Real>> assemble_rhs(const std::vector<Vector<std::complex<Real>>>& carriers,
                                        const Vector<Real>& y);

/// Normal equations of the real measurement model. Unknowns are interleaved
/// as (Re A_1[k], Im A_1[k], ..., Re A_s[k], Im A_s[k]) per sample, giving
/// half-bandwidth 2 s q.
template <typename Real = double>
BandedHermitian<Real> assemble_real_system(const std::vector<Vector<std::complex<Real>>>& carriers,
                                           const std::vector<double>& weights, int q);

template <typename Real = double>
Vector<Real> assemble_real_rhs(const std::vector<Vector<std::complex<Real>>>& carriers, const Vector<Real>& y);

/// Solves the regularized least-squares problem over the whole record.
///
/// Envelopes are returned as cosine amplitudes: for y = a cos(phi + p) the
/// recovered envelope is a * exp(j p), and components are
/// Re(A_n[k] exp(j phi_n[k])). The residual is y minus the components,
/// subtracted in order.
Decomposition solve_block(const SampledSignal& y, const std::vector<OrderSpec>& orders, const VkfConfig& config);

/// Splits the record into overlapping bins, solves each with the global
/// carrier phase, and blends envelopes with complementary Hann tapers.
Decomposition solve_long(const SampledSignal& y, const std::vector<OrderSpec>& orders, const VkfConfig& config);

/// Bin boundaries and cross-fade regions used by solve_long.
struct BinPlan {
  struct Bin {
    Index first = 0;
    Index count = 0;
  };
  struct Fade {
    Index first = 0;  // first sample of the cross-fade between bin i and i+1
    Index count = 0;
  };
  std::vector<Bin> bins;
  std::vector<Fade> fades;  // fades[i] joins bins[i] and bins[i + 1]
};

BinPlan plan_bins(Index n_samples, Index bin_length, double overlap);

/// Rising half of a Hann window over `count` samples; the falling taper is
/// 1 - w so the pair sums to one.
RealVector hann_rise(Index count);

/// Blending weight of every sample of every bin, indexed relative to the
/// bin's first sample.
std::vector<RealVector> blend_weights(const BinPlan& plan);

/// Weight whose single-order amplitude response is -3 dB at `bandwidth_hz`
/// from the carrier.
///
/// For an infinitely long stationary record the envelope estimate is the
/// demodulated input filtered by H(w) = 1 / (1 + r^2 (2 sin(w/2))^(2q) / c),
/// w = 2 pi df / fs, where c = 1 for ComplexCarrier and c = 1/2 for
/// RealMeasurement (a real cosine carries half its energy in the in-phase
/// fit). Solving H = 1/sqrt(2) gives r = sqrt(c (sqrt(2) - 1)) (2 sin(pi bw / fs))^-q.
/// Very narrow bandwidths at q = 3 give weights whose systems are not
/// representable in double precision.
double weight_for_bandwidth(double bandwidth_hz, double sample_rate, int q,
                            Formulation formulation = Formulation::RealMeasurement);

}  // namespace vkf
