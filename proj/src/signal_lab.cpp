#include "vkf/signal_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vkf/phase.hpp"
#include "vkf/random.hpp"

namespace vkf::lab {

namespace {
constexpr double kPi = std::numbers::pi;

Index sample_count(double duration, double sample_rate) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("duration must be positive");
  }
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw InvalidArgument("sample rate must be positive");
  }
  const auto n = static_cast<Index>(std::llround(duration * sample_rate));
  if (n < 1) {
    throw InvalidArgument("duration shorter than one sample");
  }
  return n;
}

RealVector sample_law(const TimeLaw& law, Index n, double sample_rate) {
  RealVector v(n);
  for (Index k = 0; k < n; ++k) {
    v[k] = law(static_cast<double>(k) / sample_rate);
  }
  return v;
}

void add_noise(RealVector& x, double sigma, std::uint64_t seed, std::uint64_t stream) {
  if (sigma == 0.0) return;
  const CounterGaussian gauss(seed, stream);
  for (Index k = 0; k < x.size(); ++k) {
    x[k] += sigma * gauss(static_cast<std::uint64_t>(k));
  }
}
}  // namespace

ComplexVector ComponentTruth::envelope() const {
  ComplexVector e(amplitude.size());
  for (Index k = 0; k < e.size(); ++k) {
    e[k] = std::polar(amplitude[k], offset[k]);
  }
  return e;
}

std::array<SyntheticComponentSpec, 3> validation_components() {
  return {{
      {{"0.02*t + 1", [](double t) { return 0.02 * t + 1.0; }},
       {"600 + 120*cos(2*pi*0.03*t)", [](double t) { return 600.0 + 120.0 * std::cos(2.0 * kPi * 0.03 * t); }},
       {"0.06*t - 2", [](double t) { return 0.06 * t - 2.0; }}},
      {{"1 + 0.5*sin(2*pi*0.02*t)*cos(2*pi*0.04*t)",
        [](double t) { return 1.0 + 0.5 * std::sin(2.0 * kPi * 0.02 * t) * std::cos(2.0 * kPi * 0.04 * t); }},
       {"240 - 120*cos(2*pi*0.01*t)", [](double t) { return 240.0 - 120.0 * std::cos(2.0 * kPi * 0.01 * t); }},
       {"0", [](double) { return 0.0; }}},
      {{"1", [](double) { return 1.0; }},
       {"500", [](double) { return 500.0; }},
       {"-1", [](double) { return -1.0; }}},
  }};
}

SyntheticSignal synthesize(const std::vector<SyntheticComponentSpec>& specs, double duration, double sample_rate,
                           double noise_sigma, std::uint64_t seed) {
  const Index n = sample_count(duration, sample_rate);
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgument("noise sigma must be non-negative");
  }
  RealVector clean = RealVector::Zero(n);
  std::vector<ComponentTruth> truth;
  truth.reserve(specs.size());
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& spec = specs[c];
    RealVector freq = sample_law(spec.frequency, n, sample_rate);
    PhaseTrack phi = [&] {
      try {
        return build_phase(FrequencyTrack(freq), sample_rate);
      } catch (const AliasingError& e) {
        throw AliasingError("component " + std::to_string(c + 1) + ": " + e.what());
      }
    }();
    RealVector amp = sample_law(spec.amplitude, n, sample_rate);
    RealVector offset = sample_law(spec.phase, n, sample_rate);
    RealVector x(n);
    for (Index k = 0; k < n; ++k) {
      x[k] = amp[k] * std::cos(phi.phases()[k] + offset[k]);
    }
    clean += x;
    truth.push_back({std::move(x), std::move(amp), std::move(freq), std::move(offset), std::move(phi)});
  }
  RealVector y = clean;
  add_noise(y, noise_sigma, seed, 0);
  return {SampledSignal(std::move(y), sample_rate), std::move(clean), std::move(truth), noise_sigma, seed};
}

SyntheticSignal generate_validation_signal(double duration, double sample_rate, double noise_sigma,
                                           std::uint64_t seed) {
  const auto specs = validation_components();
  return synthesize({specs.begin(), specs.end()}, duration, sample_rate, noise_sigma, seed);
}

void RunScenario::validate() const {
  if (!(duration > 0.0)) throw InvalidArgument("scenario duration must be positive");
  wheel.validate();
  track.validate();
  if (speed_profile.empty()) throw InvalidArgument("speed profile needs at least one knot");
  for (std::size_t i = 0; i < speed_profile.size(); ++i) {
    if (!(speed_profile[i].speed >= 0.0) || !std::isfinite(speed_profile[i].speed)) {
      throw InvalidArgument("speeds must be finite and non-negative");
    }
    if (i > 0 && !(speed_profile[i].time > speed_profile[i - 1].time)) {
      throw InvalidArgument("speed knots must have strictly increasing times");
    }
  }
  for (const auto& o : oor) {
    if (o.order < 1) throw InvalidArgument("OOR order must be >= 1");
    if (!std::isfinite(o.amplitude) || !std::isfinite(o.phase)) throw InvalidArgument("OOR parameters must be finite");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].end > segments[i].start)) throw InvalidArgument("stiffness segment end must exceed its start");
    if (i > 0 && segments[i].start < segments[i - 1].end) {
      throw InvalidArgument("stiffness segments must be sorted and non-overlapping");
    }
  }
  if (!(noise_sigma >= 0.0) || !(force_noise_sigma >= 0.0) || !std::isfinite(unsprung_mass) ||
      !std::isfinite(oor_gain)) {
    throw InvalidArgument("invalid noise, gain or mass parameter");
  }
}

double speed_at(const std::vector<SpeedKnot>& knots, double t) {
  if (t <= knots.front().time) return knots.front().speed;
  if (t >= knots.back().time) return knots.back().speed;
  const auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                                   [](double value, const SpeedKnot& k) { return value < k.time; });
  const auto lo = hi - 1;
  const double w = (t - lo->time) / (hi->time - lo->time);
  return (1.0 - w) * lo->speed + w * hi->speed;
}

SimulatedRun generate_run(const RunScenario& scenario, double sample_rate, std::uint64_t seed) {
  scenario.validate();
  const Index n = sample_count(scenario.duration, sample_rate);
  RealVector v(n);
  for (Index k = 0; k < n; ++k) {
    v[k] = speed_at(scenario.speed_profile, static_cast<double>(k) / sample_rate);
  }
  railway::SpeedProfile speed(std::move(v), sample_rate);
  RealVector distance = speed.distance();

  auto checked_phase = [&](const FrequencyTrack& track, const std::string& what) {
    const double nyquist = 0.5 * sample_rate;
    for (Index k = 0; k < track.size(); ++k) {
      if (track.freqs()[k] >= nyquist) {
        std::ostringstream msg;
        msg << what << " reaches " << track.freqs()[k] << " Hz at t = " << static_cast<double>(k) / sample_rate
            << " s, at or above Nyquist (" << nyquist << " Hz)";
        throw AliasingError(msg.str());
      }
    }
    return build_phase(track, sample_rate);
  };

  RealVector clean = RealVector::Zero(n);
  std::vector<std::pair<int, ComplexVector>> oor_env;
  std::vector<PhaseTrack> oor_phases;
  for (const auto& o : scenario.oor) {
    PhaseTrack phi = checked_phase(railway::wheel_order_track(speed, o.order, scenario.wheel),
                                   "wheel order " + std::to_string(o.order));
    const Complex e = std::polar(scenario.oor_gain * o.amplitude, o.phase);
    clean += project_real(ComplexVector::Constant(n, e), phi.phases());
    oor_env.emplace_back(o.order, ComplexVector::Constant(n, e));
    oor_phases.push_back(std::move(phi));
  }

  PhaseTrack sleeper_phase = checked_phase(railway::sleeper_track(speed, scenario.wheel, scenario.track), "sleeper passage");
  ComplexVector sleeper_env = ComplexVector::Zero(n);
  if (!scenario.segments.empty()) {
    const double covered_to = scenario.segments.back().end;
    if (scenario.segments.front().start > 0.0 || covered_to < distance[n - 1]) {
      std::ostringstream msg;
      msg << "stiffness segments cover [" << scenario.segments.front().start << ", " << covered_to
          << "] m but the run spans [0, " << distance[n - 1] << "] m";
      throw InvalidArgument(msg.str());
    }
    std::size_t seg = 0;
    for (Index k = 0; k < n; ++k) {
      while (seg + 1 < scenario.segments.size() && distance[k] >= scenario.segments[seg].end) ++seg;
      const auto& s = scenario.segments[seg];
      if (distance[k] < s.start || distance[k] > s.end) {
        throw InvalidArgument("stiffness segments leave a gap at " + std::to_string(distance[k]) + " m");
      }
      sleeper_env[k] = s.amplitude;
    }
  }
  const RealVector sleeper = project_real(sleeper_env, sleeper_phase.phases());
  clean += sleeper;

  RealVector accel = clean;
  add_noise(accel, scenario.noise_sigma, seed, 1);
  RealVector force = scenario.unsprung_mass * sleeper;
  add_noise(force, scenario.force_noise_sigma, seed, 2);

  return {SampledSignal(std::move(accel), sample_rate),
          SampledSignal(std::move(force), sample_rate),
          std::move(speed),
          std::move(distance),
          std::move(clean),
          std::move(oor_env),
          std::move(sleeper_env),
          std::move(sleeper_phase),
          std::move(oor_phases)};
}

RealVector oor_truth_profile(const RunScenario& scenario, const RealVector& positions) {
  const double c = scenario.wheel.circumference();
  RealVector r = RealVector::Constant(positions.size(), 0.5 * scenario.wheel.diameter);
  for (const auto& o : scenario.oor) {
    for (Index i = 0; i < positions.size(); ++i) {
      r[i] += o.amplitude * std::cos(2.0 * kPi * o.order * positions[i] / c + o.phase);
    }
  }
  return r;
}

}  // namespace vkf::lab
