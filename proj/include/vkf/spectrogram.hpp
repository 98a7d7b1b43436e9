#pragma once

#include "vkf/types.hpp"

namespace vkf {

/// Magnitude short-time Fourier transform on a Hann window.
struct Spectrogram {
  RealVector times;  // frame centres, s
  RealVector freqs;  // one-sided bin frequencies, Hz
  Eigen::MatrixXd magnitude;  // frames x freqs
};

Spectrogram spectrogram(const SampledSignal& signal, Index frame_length = 4096, Index hop = 1024);

}  // namespace vkf
