#include "vkf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "vkf/io.hpp"
#include "vkf/railway.hpp"
#include "vkf/solver.hpp"
#include "vkf/spectrogram.hpp"

namespace vkf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flat key-value JSON config, e.g. {"duration": 10, "freq-columns": ["f1", "f2"]}.
// Values only fill options not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  const json doc = io::read_json(path);
  if (!doc.is_object()) throw InvalidArgument(path + ": config must be a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw InvalidArgument(path + ": unknown option '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const auto& v : value) inputs.push_back(text(v));
    } else if (value.is_object()) {
      throw InvalidArgument(path + ": option '" + key + "' must not be nested");
    } else {
      inputs.push_back(text(value));
    }
    try {
      opt->add_result(inputs);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw InvalidArgument(path + ": option '" + key + "': " + e.what());
    }
  }
}

struct Common {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
};

struct SynthOptions {
  double duration = 50.0;
  double rate = 12000.0;
  double noise = 0.75;
};

struct SimulateOptions {
  std::string scenario;
  double rate = 1000.0;
};

struct DecomposeOptions {
  std::string signal;
  std::string column = "y";
  std::string freqs;
  std::vector<std::string> freq_columns;
  std::string orders;
  std::string speed;
  double diameter = 0.92;
  double sleeper_spacing = 0.6;
  double weight = 1e4;
  std::vector<double> weights;
  double bandwidth = 0.0;
  int q = 2;
  Index bin = 16384;
  double overlap = 0.5;
  std::string solver = "direct";
  std::string formulation = "real";
  double tolerance = 0.0;
  unsigned threads = 0;
  double rate = 0.0;
  bool spectrogram = false;
  Index frame = 4096;
  Index hop = 1024;
};

struct AnalyzeOptions {
  std::string envelopes;
  std::string speed;
  double diameter = 0.92;
  Index bins = 360;
  double oor_gain = 1.0;
  double interval = 0.25;
  std::string force_envelopes;
  std::string subsidence;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Flat JSON file of option values; flags override it");
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw io::IoError("cannot create output directory '" + dir + "'");
  }
  return fs::path(dir);
}

RealVector time_axis(Index n, double rate) {
  RealVector t(n);
  for (Index k = 0; k < n; ++k) t[k] = static_cast<double>(k) / rate;
  return t;
}

json fit_json(const railway::RegressionFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"rmse", f.rmse}, {"n", f.n_samples}};
}

void cmd_synth(const SynthOptions& o, const Common& c, std::ostream& out) {
  const auto sig = lab::generate_validation_signal(o.duration, o.rate, o.noise, c.seed);
  const fs::path dir = prepare_out(c.out);
  const Index n = sig.y.size();
  const RealVector t = time_axis(n, o.rate);

  io::CsvTable signal;
  signal.add("t", t);
  signal.add("y", sig.y.samples());
  io::CsvTable freqs;
  freqs.add("t", t);
  json components = json::array();
  for (std::size_t i = 0; i < sig.components.size(); ++i) {
    signal.add("X" + std::to_string(i + 1), sig.components[i].signal);
    freqs.add("f" + std::to_string(i + 1), sig.components[i].frequency);
  }
  for (const auto& spec : lab::validation_components()) {
    components.push_back(
        {{"amplitude", spec.amplitude.formula}, {"frequency", spec.frequency.formula}, {"phase", spec.phase.formula}});
  }
  io::write_csv(dir / "signal.csv", signal);
  io::write_csv(dir / "freqs.csv", freqs);
  io::write_json(dir / "truth.json", {{"duration", o.duration},
                                      {"sample_rate", o.rate},
                                      {"samples", n},
                                      {"noise_sigma", o.noise},
                                      {"seed", c.seed},
                                      {"phase_convention", "X_n = a_n cos(phi_n + p_n), phi_n[k] = sum_{l=1..k} 2 pi f_n[l] / fs"},
                                      {"components", components}});
  out << "wrote " << n << " samples to " << dir.string() << "\n";
}

void cmd_simulate(const SimulateOptions& o, const Common& c, std::ostream& out) {
  const lab::RunScenario scenario =
      o.scenario.empty() ? default_scenario() : io::scenario_from_json(io::read_json(o.scenario));
  const auto run = lab::generate_run(scenario, o.rate, c.seed);
  const fs::path dir = prepare_out(c.out);
  const Index n = run.acceleration.size();
  const RealVector t = time_axis(n, o.rate);

  io::CsvTable signal;
  signal.add("t", t);
  signal.add("y", run.acceleration.samples());
  signal.add("force", run.force.samples());
  io::CsvTable speed;
  speed.add("t", t);
  speed.add("v", run.speed.speeds());
  speed.add("s", run.distance);
  io::write_csv(dir / "signal.csv", signal);
  io::write_csv(dir / "speed.csv", speed);
  io::write_json(dir / "truth.json", {{"scenario", io::scenario_to_json(scenario)},
                                      {"sample_rate", o.rate},
                                      {"samples", n},
                                      {"seed", c.seed}});
  out << "wrote " << n << " samples to " << dir.string() << "\n";
}

// Parses "wheel:1..11,sleeper" into labelled order list.
std::vector<std::pair<std::string, int>> parse_order_list(const std::string& text) {
  static const std::regex wheel_range(R"(wheel:(\d+)(?:\.\.(\d+))?)");
  std::vector<std::pair<std::string, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::smatch m;
    if (item == "sleeper") {
      out.emplace_back("sleeper", 0);
    } else if (std::regex_match(item, m, wheel_range)) {
      const int lo = std::stoi(m[1]);
      const int hi = m[2].matched ? std::stoi(m[2]) : lo;
      if (lo < 1 || hi < lo) throw InvalidArgument("invalid wheel order range '" + item + "'");
      for (int l = lo; l <= hi; ++l) out.emplace_back("wheel:" + std::to_string(l), l);
    } else {
      throw InvalidArgument("unknown order '" + item + "' (expected wheel:<l>[..<m>] or sleeper)");
    }
  }
  if (out.empty()) throw InvalidArgument("--orders is empty");
  return out;
}

void cmd_decompose(const DecomposeOptions& o, const Common& c, std::ostream& out) {
  if (o.signal.empty()) throw InvalidArgument("--signal is required");
  const io::CsvTable table = io::read_csv(o.signal);
  const RealVector& y = table.column(o.column);
  double rate = o.rate;
  if (!(rate > 0.0)) {
    if (!table.has("t")) throw InvalidArgument("signal has no 't' column; pass --rate");
    rate = io::sample_rate_from_time(table.column("t"));
  }
  const SampledSignal signal(y, rate);
  const Index n = signal.size();

  std::vector<std::pair<std::string, FrequencyTrack>> tracks;
  if (!o.orders.empty()) {
    if (o.speed.empty()) throw InvalidArgument("--orders needs --speed");
    const io::CsvTable sp = io::read_csv(o.speed);
    const railway::SpeedProfile speed(sp.column("v"), rate);
    const railway::WheelGeometry wheel{o.diameter};
    const railway::TrackGeometry track{o.sleeper_spacing};
    for (const auto& [label, order] : parse_order_list(o.orders)) {
      tracks.emplace_back(label, order == 0 ? railway::sleeper_track(speed, wheel, track)
                                            : railway::wheel_order_track(speed, order, wheel));
    }
  } else if (!o.freqs.empty()) {
    const io::CsvTable ft = io::read_csv(o.freqs);
    std::vector<std::string> cols = o.freq_columns;
    if (cols.empty()) {
      std::copy_if(ft.header.begin(), ft.header.end(), std::back_inserter(cols),
                   [](const std::string& h) { return h != "t"; });
    }
    if (cols.empty()) throw InvalidArgument("frequency file has no frequency columns");
    for (const auto& col : cols) tracks.emplace_back(col, FrequencyTrack(ft.column(col)));
  } else {
    throw InvalidArgument("one of --freqs or --orders is required");
  }
  for (const auto& [label, track] : tracks) {
    if (track.size() != n) {
      throw InvalidArgument("frequency track '" + label + "' has " + std::to_string(track.size()) +
                            " samples, signal has " + std::to_string(n));
    }
  }

  if (o.formulation != "real" && o.formulation != "complex") {
    throw InvalidArgument("--formulation must be real or complex");
  }
  const Formulation formulation = o.formulation == "real" ? Formulation::RealMeasurement : Formulation::ComplexCarrier;
  if (!o.weights.empty() && o.weights.size() != tracks.size()) {
    throw InvalidArgument("--weights needs one value per order");
  }
  std::vector<OrderSpec> orders;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const double w = !o.weights.empty() ? o.weights[i]
                     : o.bandwidth > 0.0 ? weight_for_bandwidth(o.bandwidth, rate, o.q, formulation)
                                         : o.weight;
    orders.emplace_back(tracks[i].second, w, tracks[i].first);
  }

  VkfConfig config = o.solver == "iterative" ? VkfConfig::iterative() : VkfConfig{};
  if (o.solver != "direct" && o.solver != "iterative") throw InvalidArgument("--solver must be direct or iterative");
  config.formulation = formulation;
  config.diff_order = o.q;
  config.bin_length = o.bin;
  config.overlap = o.overlap;
  config.threads = o.threads;
  if (o.tolerance > 0.0) config.tolerance = o.tolerance;
  config.validate();

  const Decomposition d = solve_long(signal, orders, config);
  const fs::path dir = prepare_out(c.out);
  const RealVector t = time_axis(n, rate);

  json order_docs = json::array();
  io::CsvTable comps;
  comps.add("t", t);
  RealVector y_filt = RealVector::Zero(n);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::string file = "envelope_" + std::to_string(i + 1) + ".csv";
    io::CsvTable env;
    env.add("t", t);
    env.add("abs", d.envelopes[i].magnitude());
    env.add("arg", d.envelopes[i].argument());
    env.add("f", orders[i].track.freqs());
    io::write_csv(dir / file, env);
    comps.add("x" + std::to_string(i + 1), d.components[i]);
    y_filt += d.components[i];
    order_docs.push_back({{"index", i + 1}, {"label", orders[i].label}, {"weight", orders[i].weight}, {"file", file}});
  }
  comps.add("y_filt", y_filt);
  io::write_csv(dir / "components.csv", comps);
  io::CsvTable res;
  res.add("t", t);
  res.add("residual", d.residual);
  io::write_csv(dir / "residual.csv", res);

  json blocks = json::array();
  double max_rel = 0.0, max_bwd = 0.0;
  for (const auto& b : d.blocks) {
    blocks.push_back({{"bin", b.bin},
                      {"first", b.first},
                      {"count", b.count},
                      {"relative_residual", b.relative_residual},
                      {"backward_error", b.backward_error},
                      {"iterations", b.iterations}});
    max_rel = std::max(max_rel, b.relative_residual);
    max_bwd = std::max(max_bwd, b.backward_error);
  }
  io::write_json(dir / "report.json",
                 {{"sample_rate", rate},
                  {"samples", n},
                  {"orders", order_docs},
                  {"config",
                   {{"diff_order", config.diff_order},
                    {"bin_length", config.bin_length},
                    {"overlap", config.overlap},
                    {"solver", o.solver},
                    {"formulation", o.formulation},
                    {"tolerance", config.tolerance}}},
                  {"blocks", blocks},
                  {"max_relative_residual", max_rel},
                  {"max_backward_error", max_bwd},
                  {"low_confidence", d.low_confidence},
                  {"warnings", d.warnings}});

  if (o.spectrogram) {
    const auto write_grid = [&](const SampledSignal& s, const fs::path& path) {
      const Spectrogram sg = spectrogram(s, o.frame, o.hop);
      io::CsvTable grid;
      grid.add("t", sg.times);
      for (Index b = 0; b < sg.freqs.size(); ++b) {
        grid.add(io::format_double(sg.freqs[b]), sg.magnitude.col(b));
      }
      io::write_csv(path, grid);
    };
    write_grid(signal, dir / "spectrogram.csv");
    write_grid(SampledSignal(y_filt, rate), dir / "spectrogram_filtered.csv");
  }
  for (const auto& w : d.warnings) out << "warning: " << w << "\n";
  out << "decomposed " << n << " samples into " << orders.size() << " orders (" << d.blocks.size() << " bins)\n";
}

struct LoadedEnvelopes {
  std::vector<std::pair<std::string, ComplexEnvelope>> orders;
  Index edge = 0;
};

LoadedEnvelopes load_envelopes(const std::string& dir) {
  const json report = io::read_json(fs::path(dir) / "report.json");
  LoadedEnvelopes out;
  try {
    out.edge = report.at("config").at("diff_order").get<Index>();
    for (const auto& o : report.at("orders")) {
      const io::CsvTable t = io::read_csv(fs::path(dir) / o.at("file").get<std::string>());
      const RealVector& mag = t.column("abs");
      const RealVector& arg = t.column("arg");
      ComplexVector v(mag.size());
      for (Index k = 0; k < v.size(); ++k) v[k] = std::polar(mag[k], arg[k]);
      out.orders.emplace_back(o.at("label").get<std::string>(), ComplexEnvelope(std::move(v)));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed report.json in '" + dir + "': " + e.what());
  }
  return out;
}

const ComplexEnvelope* find_label(const LoadedEnvelopes& env, const std::string& label) {
  for (const auto& [l, e] : env.orders) {
    if (l == label) return &e;
  }
  return nullptr;
}

// Envelope magnitude per spatial bin, skipping the low-confidence record ends.
railway::SpatialBins binned_magnitude(const ComplexEnvelope& env, const RealVector& distance, Index edge,
                                      double interval) {
  const Index n = env.size();
  const Index first = std::min(edge, n);
  const Index count = std::max<Index>(n - 2 * edge, 0);
  if (count < 1) throw InvalidArgument("envelope shorter than its low-confidence edges");
  return railway::bin_by_position(env.magnitude().segment(first, count), distance.segment(first, count), interval);
}

void cmd_analyze(const AnalyzeOptions& o, const Common& c, std::ostream& out) {
  if (o.envelopes.empty() || o.speed.empty()) throw InvalidArgument("--envelopes and --speed are required");
  const LoadedEnvelopes env = load_envelopes(o.envelopes);
  const io::CsvTable sp = io::read_csv(o.speed);
  const double rate = io::sample_rate_from_time(sp.column("t"));
  const railway::SpeedProfile speed(sp.column("v"), rate);
  const railway::WheelGeometry wheel{o.diameter};
  if (!(o.oor_gain != 0.0) || !std::isfinite(o.oor_gain)) throw InvalidArgument("--oor-gain must be non-zero");

  std::vector<railway::OrderEnvelope> wheel_orders;
  for (const auto& [label, e] : env.orders) {
    if (label.rfind("wheel:", 0) == 0) {
      if (e.size() != speed.size()) throw InvalidArgument("envelope and speed lengths differ");
      wheel_orders.push_back({std::stoi(label.substr(6)), ComplexEnvelope(e.values() / o.oor_gain)});
    }
  }
  const fs::path dir = prepare_out(c.out);
  const railway::WheelProfile profile = railway::reconstruct_wheel_profile(wheel_orders, speed, wheel, o.bins);
  io::CsvTable prof;
  prof.add("position", profile.positions);
  prof.add("angle", profile.angles());
  prof.add("radius", profile.radii);
  RealVector flags(profile.radii.size());
  for (Index i = 0; i < flags.size(); ++i) flags[i] = profile.interpolated[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  prof.add("interpolated", flags);
  io::write_csv(dir / "wheel_profile.csv", prof);

  json regression = json::object();
  if (const ComplexEnvelope* sleeper = find_label(env, "sleeper")) {
    const RealVector distance = speed.distance();
    const railway::SpatialBins accel = binned_magnitude(*sleeper, distance, env.edge, o.interval);
    io::CsvTable binned;
    binned.add("position", accel.positions);
    binned.add("accel", accel.values);

    if (!o.force_envelopes.empty()) {
      const LoadedEnvelopes force_env = load_envelopes(o.force_envelopes);
      const ComplexEnvelope* force = find_label(force_env, "sleeper");
      if (!force) throw InvalidArgument("force envelopes contain no 'sleeper' order");
      if (force->size() != sleeper->size()) throw InvalidArgument("force and acceleration envelope lengths differ");
      const railway::SpatialBins fb = binned_magnitude(*force, distance, env.edge, o.interval);
      binned.add("force", fb.values);
      const auto fits = railway::fit_proportional_both(fb.values, accel.values);
      regression["mass"] = {{"affine", fit_json(fits.affine)}, {"through_origin", fit_json(fits.through_origin)}};
    }
    if (!o.subsidence.empty()) {
      const io::CsvTable sub = io::read_csv(o.subsidence);
      const RealVector& pos = sub.column("position");
      const RealVector& u = sub.column("u");
      const double origin = std::floor(accel.positions[0] / o.interval);
      std::vector<double> xs, us;
      for (Index i = 0; i < pos.size(); ++i) {
        const Index b = static_cast<Index>(std::floor(pos[i] / o.interval) - origin);
        if (b < 0 || b >= accel.values.size()) continue;
        const double z = accel.values[b];
        if (std::isfinite(z) && z > 0.0 && std::isfinite(u[i])) {
          xs.push_back(z);
          us.push_back(u[i]);
        }
      }
      const RealVector x = Eigen::Map<RealVector>(xs.data(), static_cast<Index>(xs.size()));
      const RealVector uu = Eigen::Map<RealVector>(us.data(), static_cast<Index>(us.size()));
      regression["log_linear"] = fit_json(railway::fit_log_linear(x, uu));
    }
    io::write_csv(dir / "sleeper_binned.csv", binned);
  } else if (!o.force_envelopes.empty() || !o.subsidence.empty()) {
    throw InvalidArgument("regressions need a 'sleeper' order in the envelopes");
  }
  io::write_json(dir / "regression.json", regression);
  out << "wrote wheel profile (" << profile.radii.size() << " bins, peak-to-peak "
      << profile.peak_to_peak() * 1e6 << " um) to " << dir.string() << "\n";
}

}  // namespace

lab::RunScenario default_scenario() {
  lab::RunScenario sc;
  sc.duration = 60.0;
  sc.speed_profile = {{0.0, 20.0}, {60.0, 40.0}};
  sc.oor = {{1, 200e-6, 0.0}, {2, 100e-6, 1.0}, {3, 50e-6, 2.0}};
  sc.oor_gain = 1000.0;
  sc.segments = {{0.0, 600.0, 0.5}, {600.0, 1200.0, 2.0}, {1200.0, 2000.0, 1.0}};
  sc.noise_sigma = 0.05;
  sc.unsprung_mass = 300.0;
  sc.force_noise_sigma = 0.0;
  return sc;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vold-Kalman order tracking and railway analysis toolkit", "vkf"};
  app.require_subcommand(1);

  Common common;
  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate the three-component validation signal");
  add_common(s, common);
  s->add_option("--duration", synth.duration, "Record length, s")->capture_default_str();
  s->add_option("--rate", synth.rate, "Sample rate, Hz")->capture_default_str();
  s->add_option("--noise", synth.noise, "Gaussian noise standard deviation")->capture_default_str();

  SimulateOptions sim;
  auto* m = app.add_subcommand("simulate", "Simulate an axle-box acceleration run");
  add_common(m, common);
  m->add_option("--scenario", sim.scenario, "Scenario JSON (default built-in ramp scenario)");
  m->add_option("--rate", sim.rate, "Sample rate, Hz")->capture_default_str();

  DecomposeOptions dec;
  auto* d = app.add_subcommand("decompose", "Extract order envelopes with the Vold-Kalman filter");
  add_common(d, common);
  d->add_option("--signal", dec.signal, "Signal CSV (required)");
  d->add_option("--column", dec.column, "Signal column")->capture_default_str();
  d->add_option("--freqs", dec.freqs, "CSV of per-order frequency tracks, Hz");
  d->add_option("--freq-columns", dec.freq_columns, "Frequency columns to use (default: all but t)")->delimiter(',');
  d->add_option("--orders", dec.orders, "Order list built from speed, e.g. wheel:1..11,sleeper");
  d->add_option("--speed", dec.speed, "Speed CSV with column v, m/s");
  d->add_option("--diameter", dec.diameter, "Wheel diameter, m")->capture_default_str();
  d->add_option("--sleeper-spacing", dec.sleeper_spacing, "Sleeper spacing, m")->capture_default_str();
  d->add_option("--weight", dec.weight, "Smoothness weight for every order")->capture_default_str();
  d->add_option("--weights", dec.weights, "Per-order smoothness weights")->delimiter(',');
  d->add_option("--bandwidth", dec.bandwidth, "Choose the weight for this -3 dB envelope bandwidth, Hz");
  d->add_option("--q", dec.q, "Difference order (1, 2 or 3)")->capture_default_str();
  d->add_option("--bin", dec.bin, "Bin length, samples")->capture_default_str();
  d->add_option("--overlap", dec.overlap, "Bin overlap fraction")->capture_default_str();
  d->add_option("--solver", dec.solver, "direct or iterative")->capture_default_str();
  d->add_option("--formulation", dec.formulation, "real or complex")->capture_default_str();
  d->add_option("--tol", dec.tolerance, "Solver tolerance (default 1e-10 direct, 1e-8 iterative)");
  d->add_option("--threads", dec.threads, "Worker threads for bins (0 = all cores)");
  d->add_option("--rate", dec.rate, "Sample rate, Hz (default: from the t column)");
  d->add_flag("--spectrogram", dec.spectrogram, "Also write spectrogram grids of the input and filtered signal");
  d->add_option("--frame", dec.frame, "Spectrogram frame length")->capture_default_str();
  d->add_option("--hop", dec.hop, "Spectrogram hop")->capture_default_str();

  AnalyzeOptions ana;
  auto* a = app.add_subcommand("analyze", "Wheel profile and stiffness regressions from envelopes");
  add_common(a, common);
  a->add_option("--envelopes", ana.envelopes, "Directory written by decompose (required)");
  a->add_option("--speed", ana.speed, "Speed CSV with columns t, v (required)");
  a->add_option("--diameter", ana.diameter, "Wheel diameter, m")->capture_default_str();
  a->add_option("--bins", ana.bins, "Profile bins around the circumference")->capture_default_str();
  a->add_option("--oor-gain", ana.oor_gain, "Signal units per metre of radius deviation")->capture_default_str();
  a->add_option("--interval", ana.interval, "Spatial bin for regressions, m")->capture_default_str();
  a->add_option("--force-envelopes", ana.force_envelopes, "Directory of the decomposed force channel");
  a->add_option("--subsidence", ana.subsidence, "CSV with columns position, u");

  std::vector<const char*> argv;
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      if (!common.config.empty()) apply_config(sub, common.config);
    }
    if (s->parsed()) cmd_synth(synth, common, out);
    if (m->parsed()) cmd_simulate(sim, common, out);
    if (d->parsed()) cmd_decompose(dec, common, out);
    if (a->parsed()) cmd_analyze(ana, common, out);
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

}  // namespace vkf::cli
