#include "vkf/spectrogram.hpp"

#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace vkf {

Spectrogram spectrogram(const SampledSignal& signal, Index frame_length, Index hop) {
  if (frame_length < 2 || hop < 1) {
    throw InvalidArgument("spectrogram frame length must be >= 2 and hop >= 1");
  }
  const RealVector& x = signal.samples();
  const Index frames = x.size() >= frame_length ? 1 + (x.size() - frame_length) / hop : 0;
  const Index bins = frame_length / 2 + 1;

  std::vector<double> window(static_cast<std::size_t>(frame_length));
  double gain = 0.0;
  for (Index j = 0; j < frame_length; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(frame_length));
    gain += window[j];
  }

  Spectrogram out;
  out.times.resize(frames);
  out.freqs.resize(bins);
  out.magnitude.resize(frames, bins);
  for (Index b = 0; b < bins; ++b) {
    out.freqs[b] = static_cast<double>(b) * signal.sample_rate() / static_cast<double>(frame_length);
  }

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<std::size_t>(frame_length));
  std::vector<std::complex<double>> spectrum;
  for (Index f = 0; f < frames; ++f) {
    const Index start = f * hop;
    for (Index j = 0; j < frame_length; ++j) {
      frame[j] = window[j] * x[start + j];
    }
    fft.fwd(spectrum, frame);
    // amplitude-normalized so a unit cosine peaks near 1
    for (Index b = 0; b < bins; ++b) {
      out.magnitude(f, b) = 2.0 * std::abs(spectrum[b]) / gain;
    }
    out.times[f] = signal.time(start) + 0.5 * static_cast<double>(frame_length) / signal.sample_rate();
  }
  return out;
}

}  // namespace vkf
