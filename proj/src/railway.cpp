#include "vkf/railway.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vkf/phase.hpp"

namespace vkf::railway {

double WheelGeometry::circumference() const { return std::numbers::pi * diameter; }

void WheelGeometry::validate() const {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw InvalidArgument("wheel diameter must be positive");
  }
}

void TrackGeometry::validate() const {
  if (!(sleeper_spacing > 0.0) || !std::isfinite(sleeper_spacing)) {
    throw InvalidArgument("sleeper spacing must be positive");
  }
}

SpeedProfile::SpeedProfile(RealVector speeds, double sample_rate)
    : speeds_(std::move(speeds)), sample_rate_(sample_rate) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw InvalidArgument("sample rate must be positive");
  }
  if (!speeds_.array().isFinite().all() || (speeds_.size() > 0 && speeds_.minCoeff() < 0.0)) {
    throw InvalidArgument("speeds must be finite and non-negative");
  }
}

RealVector SpeedProfile::distance() const {
  RealVector s(speeds_.size());
  const double dt = 1.0 / sample_rate_;
  double acc = 0.0;
  for (Index k = 0; k < speeds_.size(); ++k) {
    if (k > 0) acc += speeds_[k] * dt;
    s[k] = acc;
  }
  return s;
}

FrequencyTrack wheel_order_track(const SpeedProfile& speed, int order, const WheelGeometry& wheel) {
  wheel.validate();
  if (order < 1) {
    throw InvalidArgument("wheel order must be >= 1");
  }
  // Scaling the first-order rate by the order keeps track(l) == l * track(1)
  // bit for bit.
  const RealVector base = speed.speeds() / wheel.circumference();
  return FrequencyTrack(static_cast<double>(order) * base);
}

FrequencyTrack sleeper_track(const SpeedProfile& speed, const WheelGeometry& wheel, const TrackGeometry& track) {
  track.validate();
  const FrequencyTrack first = wheel_order_track(speed, 1, wheel);
  return FrequencyTrack(first.freqs() * (wheel.circumference() / track.sleeper_spacing));
}

RealVector WheelProfile::angles() const { return positions * (2.0 * std::numbers::pi / circumference); }

double WheelProfile::peak_to_peak() const { return radii.size() ? radii.maxCoeff() - radii.minCoeff() : 0.0; }

double WheelProfile::max_deviation(double mean_radius) const {
  return radii.size() ? (radii.array() - mean_radius).abs().maxCoeff() : 0.0;
}

WheelProfile reconstruct_wheel_profile(const std::vector<OrderEnvelope>& envelopes, const SpeedProfile& speed,
                                       const WheelGeometry& wheel, Index n_bins, std::optional<SampleRange> span) {
  wheel.validate();
  if (n_bins < 1) {
    throw InvalidArgument("profile needs at least one bin");
  }
  const Index n = speed.size();
  const SampleRange range = span.value_or(SampleRange{0, n});
  if (range.first < 0 || range.count < 1 || range.first + range.count > n) {
    throw InvalidArgument("sample range outside the speed profile");
  }

  RealVector deviation = RealVector::Zero(n);
  for (const auto& oe : envelopes) {
    if (oe.envelope.size() != n) {
      throw InvalidArgument("envelope length does not match the speed profile");
    }
    const PhaseTrack phase = build_phase(wheel_order_track(speed, oe.order, wheel), speed.sample_rate());
    deviation += reconstruct_component(oe.envelope, phase);
  }

  if (!(speed.speeds().segment(range.first, range.count).maxCoeff() > 0.0)) {
    throw InvalidArgument("wheel does not rotate over the analysed span; no positional coverage");
  }
  const RealVector s = speed.distance();

  const double circumference = wheel.circumference();
  RealVector sum = RealVector::Zero(n_bins);
  std::vector<Index> count(static_cast<std::size_t>(n_bins), 0);
  for (Index k = range.first; k < range.first + range.count; ++k) {
    const double x = std::fmod(s[k], circumference);
    Index bin = static_cast<Index>(x / circumference * static_cast<double>(n_bins));
    bin = std::clamp<Index>(bin, 0, n_bins - 1);
    sum[bin] += deviation[k];
    ++count[static_cast<std::size_t>(bin)];
  }

  WheelProfile profile;
  profile.circumference = circumference;
  profile.positions.resize(n_bins);
  profile.radii.resize(n_bins);
  profile.interpolated.assign(static_cast<std::size_t>(n_bins), false);
  std::vector<Index> filled;
  for (Index i = 0; i < n_bins; ++i) {
    profile.positions[i] = (static_cast<double>(i) + 0.5) * circumference / static_cast<double>(n_bins);
    if (count[static_cast<std::size_t>(i)] > 0) {
      profile.radii[i] = sum[i] / static_cast<double>(count[static_cast<std::size_t>(i)]);
      filled.push_back(i);
    }
  }
  if (filled.empty()) {
    throw InvalidArgument("no samples fell into any profile bin");
  }
  // circular linear interpolation across empty bins
  for (std::size_t f = 0; f < filled.size(); ++f) {
    const Index a = filled[f];
    const Index b = filled[(f + 1) % filled.size()];
    const Index gap = (b - a + n_bins) % n_bins == 0 ? n_bins : (b - a + n_bins) % n_bins;
    for (Index g = 1; g < gap; ++g) {
      const Index i = (a + g) % n_bins;
      const double t = static_cast<double>(g) / static_cast<double>(gap);
      profile.radii[i] = (1.0 - t) * profile.radii[a] + t * profile.radii[b];
      profile.interpolated[static_cast<std::size_t>(i)] = true;
    }
  }
  profile.radii.array() += 0.5 * wheel.diameter;
  return profile;
}

SpatialBins bin_by_position(const RealVector& values, const RealVector& distance, double interval) {
  if (values.size() != distance.size()) {
    throw InvalidArgument("values and distance lengths differ");
  }
  if (!(interval > 0.0)) {
    throw InvalidArgument("bin interval must be positive");
  }
  SpatialBins out;
  if (values.size() == 0) return out;
  const double lo = distance.minCoeff();
  const Index first = static_cast<Index>(std::floor(lo / interval));
  const Index n_bins = static_cast<Index>(std::floor(distance.maxCoeff() / interval)) - first + 1;
  RealVector sum = RealVector::Zero(n_bins);
  out.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (Index k = 0; k < values.size(); ++k) {
    const Index b = static_cast<Index>(std::floor(distance[k] / interval)) - first;
    sum[b] += values[k];
    ++out.counts[static_cast<std::size_t>(b)];
  }
  out.positions.resize(n_bins);
  out.values.resize(n_bins);
  for (Index b = 0; b < n_bins; ++b) {
    out.positions[b] = (static_cast<double>(first + b) + 0.5) * interval;
    const Index c = out.counts[static_cast<std::size_t>(b)];
    out.values[b] = c > 0 ? sum[b] / static_cast<double>(c) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

namespace {

RegressionFit fit_affine(const RealVector& x, const RealVector& y) {
  const Index n = x.size();
  const double mx = x.mean();
  const double my = y.mean();
  const RealVector dx = x.array() - mx;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 1e-24 * x.squaredNorm()) || !(sxx > 0.0)) {
    throw InvalidArgument("singular fit: regressor is constant");
  }
  RegressionFit fit;
  fit.slope = dx.dot((y.array() - my).matrix()) / sxx;
  fit.intercept = my - fit.slope * mx;
  const RealVector res = (y.array() - fit.slope * x.array() - fit.intercept).matrix();
  fit.rmse = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  fit.n_samples = n;
  return fit;
}

RegressionFit fit_origin(const RealVector& x, const RealVector& y) {
  const double sxx = x.squaredNorm();
  if (!(sxx > 0.0)) {
    throw InvalidArgument("singular fit: regressor is identically zero");
  }
  RegressionFit fit;
  fit.slope = x.dot(y) / sxx;
  fit.intercept = 0.0;
  fit.rmse = std::sqrt((y - fit.slope * x).squaredNorm() / static_cast<double>(x.size()));
  fit.n_samples = x.size();
  return fit;
}

std::pair<RealVector, RealVector> clean_pairs(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("regression inputs have different lengths");
  }
  std::vector<Index> keep;
  for (Index k = 0; k < a.size(); ++k) {
    if (std::isfinite(a[k]) && std::isfinite(b[k])) keep.push_back(k);
  }
  if (keep.size() < 2) {
    throw InvalidArgument("regression needs at least 2 finite sample pairs");
  }
  RealVector ca(static_cast<Index>(keep.size())), cb(static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    ca[static_cast<Index>(i)] = a[keep[i]];
    cb[static_cast<Index>(i)] = b[keep[i]];
  }
  return {ca, cb};
}

}  // namespace

RegressionFit fit_log_linear(const RealVector& x, const RealVector& u) {
  if (x.size() != u.size() || x.size() < 2) {
    throw InvalidArgument("log-linear fit needs equal-length inputs of at least 2 samples");
  }
  if (!x.array().isFinite().all() || !u.array().isFinite().all()) {
    throw InvalidArgument("log-linear fit inputs must be finite");
  }
  if (x.minCoeff() <= 0.0) {
    throw InvalidArgument("log-linear fit needs strictly positive regressors");
  }
  return fit_affine(x.array().log().matrix(), u);
}

RegressionFit fit_proportional(const RealVector& force, const RealVector& accel, FitMode mode) {
  auto [f, a] = clean_pairs(force, accel);
  return mode == FitMode::Affine ? fit_affine(a, f) : fit_origin(a, f);
}

ProportionalFits fit_proportional_both(const RealVector& force, const RealVector& accel) {
  return {fit_proportional(force, accel, FitMode::Affine), fit_proportional(force, accel, FitMode::ThroughOrigin)};
}

}  // namespace vkf::railway
