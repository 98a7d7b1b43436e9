#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace vkf {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealVector = Vector<double>;
using ComplexVector = Vector<Complex>;

// Error hierarchy. Input validation failures derive from InvalidArgument so
// that front ends can map them to usage errors; numerical failures derive
// from SolverError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A frequency at or above Nyquist was requested.
class AliasingError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what, std::optional<Index> bin = std::nullopt)
      : Error(bin ? what + " (bin " + std::to_string(*bin) + ")" : what), bin_(bin) {}

  std::optional<Index> bin() const { return bin_; }

 private:
  std::optional<Index> bin_;
};

/// Uniformly sampled real time series.
class SampledSignal {
 public:
  SampledSignal(RealVector samples, double sample_rate);

  const RealVector& samples() const { return samples_; }
  double sample_rate() const { return sample_rate_; }
  double sample_period() const { return 1.0 / sample_rate_; }
  Index size() const { return samples_.size(); }

  /// Time stamp t = k / sample_rate.
  double time(Index k) const { return static_cast<double>(k) / sample_rate_; }

 private:
  RealVector samples_;
  double sample_rate_;
};

/// Instantaneous frequency in Hz, one value per signal sample.
class FrequencyTrack {
 public:
  explicit FrequencyTrack(RealVector freqs);

  const RealVector& freqs() const { return freqs_; }
  Index size() const { return freqs_.size(); }

  /// Throws AliasingError if any value is >= sample_rate / 2.
  void check_nyquist(double sample_rate) const;

 private:
  RealVector freqs_;
};

/// One order to extract: its frequency track and smoothness weight.
struct OrderSpec {
  OrderSpec(FrequencyTrack track, double weight, std::string label = {});

  FrequencyTrack track;
  double weight;
  std::string label;
};

/// Cumulative carrier phase in radians.
class PhaseTrack {
 public:
  explicit PhaseTrack(RealVector phases);

  const RealVector& phases() const { return phases_; }
  Index size() const { return phases_.size(); }

 private:
  RealVector phases_;
};

/// Per-sample complex amplitude of one order.
class ComplexEnvelope {
 public:
  explicit ComplexEnvelope(ComplexVector values);

  const ComplexVector& values() const { return values_; }
  Index size() const { return values_.size(); }

  RealVector magnitude() const { return values_.cwiseAbs(); }
  RealVector argument() const { return values_.unaryExpr([](const Complex& z) { return std::arg(z); }); }

 private:
  ComplexVector values_;
};

}  // namespace vkf
