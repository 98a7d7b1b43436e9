#pragma once

#include <numbers>

#include "vkf/types.hpp"

namespace vkf {

/// Cumulative carrier phase of a frequency track.
///
/// phases[0] = 0 and phases[k] = sum_{l=1..k} 2*pi*freqs[l] / sample_rate, so a
/// constant frequency f yields exactly 2*pi*f*t at t = k / sample_rate. Throws
/// AliasingError if any frequency reaches Nyquist.
PhaseTrack build_phase(const FrequencyTrack& track, double sample_rate);

/// Unit-modulus carrier exp(j*phase[k]), the diagonal of C_n.
template <typename Real = double>
Vector<std::complex<Real>> build_carrier(const PhaseTrack& phase) {
  const RealVector& p = phase.phases();
  Vector<std::complex<Real>> c(p.size());
  for (Index k = 0; k < p.size(); ++k) {
    c[k] = std::polar(Real(1), static_cast<Real>(p[k]));
  }
  return c;
}

/// Real order component Re(envelope[k] * exp(j*phase[k])).
RealVector reconstruct_component(const ComplexEnvelope& envelope, const PhaseTrack& phase);

/// Same as above for raw vectors; used inside the solver.
template <typename DerivedA, typename DerivedP>
RealVector project_real(const Eigen::MatrixBase<DerivedA>& envelope, const Eigen::MatrixBase<DerivedP>& phase) {
  RealVector out(envelope.size());
  for (Index k = 0; k < envelope.size(); ++k) {
    out[k] = std::real(envelope[k] * std::polar(1.0, phase[k]));
  }
  return out;
}

}  // namespace vkf
