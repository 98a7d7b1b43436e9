#include "vkf/phase.hpp"

namespace vkf {

PhaseTrack build_phase(const FrequencyTrack& track, double sample_rate) {
  if (!(sample_rate > 0.0)) {
    throw InvalidArgument("sample rate must be positive");
  }
  track.check_nyquist(sample_rate);
  const RealVector& f = track.freqs();
  RealVector phi(f.size());
  const double step = 2.0 * std::numbers::pi / sample_rate;
  double acc = 0.0;
  for (Index k = 0; k < f.size(); ++k) {
    if (k > 0) {
      acc += step * f[k];
    }
    phi[k] = acc;
  }
  return PhaseTrack(std::move(phi));
}

RealVector reconstruct_component(const ComplexEnvelope& envelope, const PhaseTrack& phase) {
  if (envelope.size() != phase.size()) {
    throw InvalidArgument("envelope and phase lengths differ");
  }
  return project_real(envelope.values(), phase.phases());
}

}  // namespace vkf
