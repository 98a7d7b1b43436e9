#pragma once

#include <optional>
#include <vector>

#include "vkf/types.hpp"

namespace vkf::railway {

struct WheelGeometry {
  double diameter = 0.92;  // m

  double circumference() const;
  void validate() const;
};

struct TrackGeometry {
  double sleeper_spacing = 0.6;  // m

  void validate() const;
};

/// Vehicle speed in m/s, one value per signal sample.
class SpeedProfile {
 public:
  SpeedProfile(RealVector speeds, double sample_rate);

  const RealVector& speeds() const { return speeds_; }
  double sample_rate() const { return sample_rate_; }
  Index size() const { return speeds_.size(); }

  /// Travelled distance s[k] = sum_{l=1..k} v[l] / sample_rate, the same
  /// rectangle rule used for carrier phase, so order phases and positions
  /// stay consistent.
  RealVector distance() const;

 private:
  RealVector speeds_;
  double sample_rate_;
};

/// Wheel out-of-roundness order frequency v * order / (pi * d_w).
FrequencyTrack wheel_order_track(const SpeedProfile& speed, int order, const WheelGeometry& wheel = {});

/// Sleeper passage frequency f_w[1] * pi * d_w / d_s (= v / d_s).
FrequencyTrack sleeper_track(const SpeedProfile& speed, const WheelGeometry& wheel = {},
                             const TrackGeometry& track = {});

struct OrderEnvelope {
  int order;
  ComplexEnvelope envelope;  // radius deviation in metres
};

struct SampleRange {
  Index first = 0;
  Index count = 0;
};

struct WheelProfile {
  RealVector positions;  // bin centres along the circumference, m
  RealVector radii;      // m
  std::vector<bool> interpolated;  // bin had no samples and was filled in
  double circumference = 0.0;      // m

  RealVector angles() const;  // radians, positions mapped onto [0, 2 pi)
  double peak_to_peak() const;
  /// Largest absolute deviation from `mean_radius`.
  double max_deviation(double mean_radius) const;
};

/// Radius profile r(x) = d_w / 2 + sum of the order components, accumulated
/// by circumferential position x = s mod (pi d_w) and averaged per bin.
///
/// Envelopes must be referenced to carrier phases built from this speed
/// profile (build_phase of wheel_order_track). `span` restricts the samples
/// used; positions remain absolute. Empty bins are filled by circular linear
/// interpolation and flagged.
WheelProfile reconstruct_wheel_profile(const std::vector<OrderEnvelope>& envelopes, const SpeedProfile& speed,
                                       const WheelGeometry& wheel = {}, Index n_bins = 360,
                                       std::optional<SampleRange> span = std::nullopt);

/// Per-position averages of `values` binned by travelled distance.
struct SpatialBins {
  RealVector positions;  // bin centres, m
  RealVector values;     // NaN where a bin received no samples
  std::vector<Index> counts;
};

SpatialBins bin_by_position(const RealVector& values, const RealVector& distance, double interval = 0.25);

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rmse = 0.0;  // root mean square of the residuals
  Index n_samples = 0;
};

/// Least squares u = slope * ln(x) + intercept.
RegressionFit fit_log_linear(const RealVector& x, const RealVector& u);

enum class FitMode { Affine, ThroughOrigin };

/// Least squares force = slope * accel (+ intercept). Pairs with a
/// non-finite member are dropped first.
RegressionFit fit_proportional(const RealVector& force, const RealVector& accel, FitMode mode = FitMode::Affine);

struct ProportionalFits {
  RegressionFit affine;
  RegressionFit through_origin;
};

ProportionalFits fit_proportional_both(const RealVector& force, const RealVector& accel);

}  // namespace vkf::railway
