#include "vkf/types.hpp"

#include <cmath>
#include <sstream>

namespace vkf {

namespace {
bool all_finite(const RealVector& v) { return v.array().isFinite().all(); }
}  // namespace

SampledSignal::SampledSignal(RealVector samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw InvalidArgument("sample rate must be positive and finite");
  }
  if (samples_.size() < 1) {
    throw InvalidArgument("signal must contain at least one sample");
  }
  if (!all_finite(samples_)) {
    throw InvalidArgument("signal contains non-finite samples");
  }
}

FrequencyTrack::FrequencyTrack(RealVector freqs) : freqs_(std::move(freqs)) {
  if (!all_finite(freqs_)) {
    throw InvalidArgument("frequency track contains non-finite values");
  }
  if (freqs_.size() > 0 && freqs_.minCoeff() < 0.0) {
    throw InvalidArgument("frequency track contains negative values");
  }
}

void FrequencyTrack::check_nyquist(double sample_rate) const {
  const double nyquist = 0.5 * sample_rate;
  for (Index k = 0; k < freqs_.size(); ++k) {
    if (freqs_[k] >= nyquist) {
      std::ostringstream msg;
      msg << "frequency " << freqs_[k] << " Hz at sample " << k << " reaches Nyquist (" << nyquist << " Hz)";
      throw AliasingError(msg.str());
    }
  }
}

OrderSpec::OrderSpec(FrequencyTrack track_in, double weight_in, std::string label_in)
    : track(std::move(track_in)), weight(weight_in), label(std::move(label_in)) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidArgument("order weight must be positive and finite");
  }
}

PhaseTrack::PhaseTrack(RealVector phases) : phases_(std::move(phases)) {
  if (!all_finite(phases_)) {
    throw InvalidArgument("phase track contains non-finite values");
  }
}

ComplexEnvelope::ComplexEnvelope(ComplexVector values) : values_(std::move(values)) {
  if (!values_.array().isFinite().all()) {
    throw InvalidArgument("envelope contains non-finite values");
  }
}

}  // namespace vkf
