#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vkf/railway.hpp"
#include "vkf/types.hpp"

namespace vkf::lab {

/// A closed-form law of time t (seconds) together with a printable formula.
struct TimeLaw {
  std::string formula;
  std::function<double(double)> eval;

  double operator()(double t) const { return eval(t); }
};

/// One synthetic component a(t) cos(phi(t) + p(t)), where phi is the
/// integrated carrier phase of f(t).
struct SyntheticComponentSpec {
  TimeLaw amplitude;
  TimeLaw frequency;  // Hz
  TimeLaw phase;      // rad
};

/// Ground truth for one generated component.
struct ComponentTruth {
  RealVector signal;     // X_n[k]
  RealVector amplitude;  // a_n(t_k)
  RealVector frequency;  // f_n(t_k), Hz
  RealVector offset;     // p_n(t_k), rad
  PhaseTrack carrier_phase;

  /// a_n exp(j p_n): the envelope an exact decomposition recovers.
  ComplexVector envelope() const;
};

struct SyntheticSignal {
  SampledSignal y;
  RealVector clean;  // sum of the components without noise
  std::vector<ComponentTruth> components;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// The three-component validation signal: a drifting-frequency component
/// with linearly growing amplitude and phase, an amplitude- and
/// frequency-modulated component, and a stationary 500 Hz tone.
std::array<SyntheticComponentSpec, 3> validation_components();

/// Samples the given components for round(duration * sample_rate) samples and
/// adds seeded Gaussian noise. Throws AliasingError if any frequency law
/// reaches Nyquist.
SyntheticSignal synthesize(const std::vector<SyntheticComponentSpec>& specs, double duration, double sample_rate,
                           double noise_sigma, std::uint64_t seed);

SyntheticSignal generate_validation_signal(double duration, double sample_rate = 12000.0, double noise_sigma = 0.75,
                                           std::uint64_t seed = 0);

struct SpeedKnot {
  double time;   // s
  double speed;  // m/s
};

struct OorOrder {
  int order;
  double amplitude;    // m
  double phase = 0.0;  // rad at circumferential position 0
};

struct StiffnessSegment {
  double start;      // m
  double end;        // m
  double amplitude;  // sleeper-passage response, m/s^2
};

struct RunScenario {
  double duration = 60.0;  // s
  // Piecewise-linear speed, held constant outside the knot range.
  std::vector<SpeedKnot> speed_profile{{0.0, 30.0}};
  railway::WheelGeometry wheel;
  railway::TrackGeometry track;
  std::vector<OorOrder> oor;
  // Acceleration per metre of radius deviation.
  double oor_gain = 1.0;
  std::vector<StiffnessSegment> segments;
  double noise_sigma = 0.0;  // m/s^2
  double unsprung_mass = 300.0;  // kg; force channel = mass * sleeper response
  double force_noise_sigma = 0.0;  // N

  void validate() const;
};

struct SimulatedRun {
  SampledSignal acceleration;
  SampledSignal force;
  railway::SpeedProfile speed;
  RealVector distance;  // m
  RealVector clean;     // acceleration without noise
  // Truth envelopes in signal units, referenced to build_phase of the
  // corresponding order track.
  std::vector<std::pair<int, ComplexVector>> oor_envelopes;
  ComplexVector sleeper_envelope;
  PhaseTrack sleeper_phase;
  std::vector<PhaseTrack> oor_phases;
};

/// Evaluates the piecewise-linear speed profile at time t.
double speed_at(const std::vector<SpeedKnot>& knots, double t);

SimulatedRun generate_run(const RunScenario& scenario, double sample_rate, std::uint64_t seed);

/// True radius profile of the scenario at circumferential positions x (m).
RealVector oor_truth_profile(const RunScenario& scenario, const RealVector& positions);

}  // namespace vkf::lab
