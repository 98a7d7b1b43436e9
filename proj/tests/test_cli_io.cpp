#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "test_support.hpp"
#include "vkf/cli.hpp"
#include "vkf/io.hpp"

using namespace vkf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("vkf_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int vkf_run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "vkf");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Csv, RoundTripPreservesDoubles) {
  const fs::path dir = scratch("csv");
  io::CsvTable t;
  t.add("a", (RealVector(5) << 0.1, -1e-300, 1.0 / 3.0, 6.02214076e23, -0.0).finished());
  t.add("b", (RealVector(5) << std::numbers::pi, 1e300, 2.5, -7.0, 4.9e-324).finished());
  io::write_csv(dir / "t.csv", t);
  const io::CsvTable r = io::read_csv(dir / "t.csv");
  ASSERT_EQ(r.header, t.header);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(r.columns[c], t.columns[c]);
  EXPECT_EQ(slurp(dir / "t.csv").substr(0, 4), "a,b\n");
}

TEST(Csv, ReaderToleratesBomCrlfAndBlankLines) {
  const fs::path dir = scratch("csv2");
  std::ofstream(dir / "x.csv", std::ios::binary) << "\xEF\xBB\xBFt, y\r\n0,+1.5\r\n\r\n1,2e3\r\n";
  const io::CsvTable r = io::read_csv(dir / "x.csv");
  EXPECT_EQ(r.header, (std::vector<std::string>{"t", "y"}));
  EXPECT_EQ(r.column("y"), (RealVector(2) << 1.5, 2000.0).finished());
  EXPECT_THROW(r.column("z"), InvalidArgument);
  std::ofstream(dir / "bad.csv") << "t,y\n0,abc\n";
  EXPECT_THROW(io::read_csv(dir / "bad.csv"), InvalidArgument);
  std::ofstream(dir / "ragged.csv") << "t,y\n0\n";
  EXPECT_THROW(io::read_csv(dir / "ragged.csv"), InvalidArgument);
  EXPECT_THROW(io::read_csv(dir / "missing.csv"), io::IoError);
}

TEST(Json, ScenarioRoundTrip) {
  const fs::path dir = scratch("json");
  lab::RunScenario sc = cli::default_scenario();
  sc.oor.push_back({7, 1.234567890123e-5, -0.1});
  io::write_json(dir / "s.json", io::scenario_to_json(sc));
  const lab::RunScenario back = io::scenario_from_json(io::read_json(dir / "s.json"));
  EXPECT_EQ(back.duration, sc.duration);
  ASSERT_EQ(back.speed_profile.size(), sc.speed_profile.size());
  EXPECT_EQ(back.speed_profile[1].speed, sc.speed_profile[1].speed);
  ASSERT_EQ(back.oor.size(), sc.oor.size());
  EXPECT_EQ(back.oor.back().amplitude, sc.oor.back().amplitude);
  EXPECT_EQ(back.oor.back().phase, sc.oor.back().phase);
  ASSERT_EQ(back.segments.size(), sc.segments.size());
  EXPECT_EQ(back.segments[2].end, sc.segments[2].end);
  EXPECT_EQ(back.oor_gain, sc.oor_gain);
  EXPECT_EQ(back.unsprung_mass, sc.unsprung_mass);
  EXPECT_EQ(io::scenario_to_json(back), io::scenario_to_json(sc));
  EXPECT_THROW(io::scenario_from_json(nlohmann::json{{"duration", "long"}}), InvalidArgument);
  EXPECT_THROW(io::scenario_from_json(nlohmann::json{{"duration", -1.0}}), InvalidArgument);
}

TEST(Io, SampleRateFromTime) {
  RealVector t(1000);
  for (Index k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) / 12000.0;
  EXPECT_EQ(io::sample_rate_from_time(t), 12000.0);
  EXPECT_THROW(io::sample_rate_from_time(RealVector::Zero(1)), InvalidArgument);
  EXPECT_THROW(io::sample_rate_from_time(RealVector::Zero(3)), InvalidArgument);
}

TEST(CliSynth, NoiseFreeColumnsSumToSignal) {
  const fs::path dir = scratch("synth0");
  ASSERT_EQ(vkf_run({"synth", "--duration", "1", "--noise", "0", "--out", dir.string()}), 0);
  const io::CsvTable t = io::read_csv(dir / "signal.csv");
  EXPECT_EQ(t.rows(), 12000);
  EXPECT_EQ(t.column("y"), (t.column("X1") + t.column("X2") + t.column("X3")).eval());
  const auto truth = io::read_json(dir / "truth.json");
  EXPECT_EQ(truth.at("sample_rate").get<double>(), 12000.0);
  EXPECT_EQ(truth.at("components").size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "freqs.csv"));
}

TEST(CliSynth, SameSeedGivesIdenticalFiles) {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  ASSERT_EQ(vkf_run({"synth", "--duration", "0.5", "--seed", "7", "--out", a.string()}), 0);
  ASSERT_EQ(vkf_run({"synth", "--duration", "0.5", "--seed", "7", "--out", b.string()}), 0);
  ASSERT_EQ(vkf_run({"synth", "--duration", "0.5", "--seed", "8", "--out", c.string()}), 0);
  EXPECT_EQ(slurp(a / "signal.csv"), slurp(b / "signal.csv"));
  EXPECT_NE(slurp(a / "signal.csv"), slurp(c / "signal.csv"));
}

TEST(CliSynth, ConfigFileIsOverriddenByFlags) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "c.json") << R"({"duration": 0.25, "rate": 8000, "noise": 0})";
  ASSERT_EQ(vkf_run({"synth", "--config", (dir / "c.json").string(), "--rate", "4000", "--out", dir.string()}), 0);
  const io::CsvTable t = io::read_csv(dir / "signal.csv");
  EXPECT_EQ(t.rows(), 1000);
  EXPECT_EQ(t.column("y"), (t.column("X1") + t.column("X2") + t.column("X3")).eval());
  std::ofstream(dir / "bad.json") << R"({"durration": 1})";
  EXPECT_EQ(vkf_run({"synth", "--config", (dir / "bad.json").string(), "--out", dir.string()}), 1);
}

TEST(CliDecompose, RecoversTruthEnvelopes) {
  const fs::path dir = scratch("dec");
  ASSERT_EQ(vkf_run({"synth", "--duration", "3", "--seed", "1", "--out", dir.string()}), 0);
  const fs::path out = dir / "d";
  ASSERT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--freqs", (dir / "freqs.csv").string(),
                     "--out", out.string()}),
            0);
  const auto report = io::read_json(out / "report.json");
  EXPECT_EQ(report.at("orders").size(), 3u);
  EXPECT_EQ(report.at("low_confidence").size(), 4u);
  EXPECT_LE(report.at("max_backward_error").get<double>(), 1e-10);
  const auto laws = lab::validation_components();
  for (int n = 1; n <= 3; ++n) {
    const io::CsvTable e = io::read_csv(out / ("envelope_" + std::to_string(n) + ".csv"));
    const RealVector& t = e.column("t");
    const RealVector& mag = e.column("abs");
    RealVector err(t.size() - 12000);
    for (Index k = 6000; k < t.size() - 6000; ++k) err[k - 6000] = mag[k] - laws[n - 1].amplitude(t[k]);
    EXPECT_LE(test::rms(err), 0.1) << "order " << n;
  }
  const io::CsvTable res = io::read_csv(out / "residual.csv");
  EXPECT_EQ(res.rows(), 36000);
}

TEST(CliDecompose, UsageErrors) {
  const fs::path dir = scratch("dec_err");
  ASSERT_EQ(vkf_run({"synth", "--duration", "0.2", "--out", dir.string()}), 0);
  const std::string sig = (dir / "signal.csv").string(), fr = (dir / "freqs.csv").string();
  std::string err;
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--freqs", fr, "--freq-columns", "f9", "--out", dir.string()}, &err),
            1);
  EXPECT_NE(err.find("f9"), std::string::npos);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--column", "nope", "--freqs", fr}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--freqs", fr}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--freqs", fr, "--q", "7"}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--freqs", fr, "--weights", "1,2"}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--orders", "wheel:3..1", "--speed", sig}), 1);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--freqs", fr, "--rate", "1000"}), 1);  // aliasing
  EXPECT_EQ(vkf_run({"nonsense"}), 1);
  EXPECT_EQ(vkf_run({}), 1);
  EXPECT_EQ(vkf_run({"synth", "--help"}), 0);

  // a shorter frequency file is a length mismatch
  const io::CsvTable f = io::read_csv(fr);
  io::CsvTable shorter;
  for (std::size_t c = 0; c < f.header.size(); ++c) shorter.add(f.header[c], f.columns[c].head(f.rows() - 1));
  io::write_csv(dir / "short.csv", shorter);
  EXPECT_EQ(vkf_run({"decompose", "--signal", sig, "--freqs", (dir / "short.csv").string()}), 1);
}

TEST(CliDecompose, NumericalFailureExitsWithTwo) {
  const fs::path dir = scratch("dec_fail");
  ASSERT_EQ(vkf_run({"synth", "--duration", "0.1", "--out", dir.string()}), 0);
  std::string err;
  EXPECT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--freqs", (dir / "freqs.csv").string(),
                     "--solver", "iterative", "--weight", "100", "--out", (dir / "d").string()},
                    &err),
            0);
  // a weight this large makes the system numerically indefinite
  EXPECT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--freqs", (dir / "freqs.csv").string(),
                     "--weight", "1e12", "--q", "3", "--out", (dir / "d").string()},
                    &err),
            2);
  EXPECT_NE(err.find("numerical failure"), std::string::npos);
}

TEST(CliAnalyze, ZeroEnvelopesGiveMeanRadiusProfile) {
  const fs::path dir = scratch("zero");
  const Index n = 5000;
  RealVector t(n);
  for (Index k = 0; k < n; ++k) t[k] = k / 1000.0;
  io::CsvTable sig, speed;
  sig.add("t", t);
  sig.add("y", RealVector::Zero(n));
  speed.add("t", t);
  speed.add("v", RealVector::Constant(n, 20.0));
  io::write_csv(dir / "signal.csv", sig);
  io::write_csv(dir / "speed.csv", speed);
  ASSERT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--orders", "wheel:1..11",
                     "--speed", (dir / "speed.csv").string(), "--out", (dir / "env").string()}),
            0);
  ASSERT_EQ(vkf_run({"analyze", "--envelopes", (dir / "env").string(), "--speed", (dir / "speed.csv").string(),
                     "--out", (dir / "a").string()}),
            0);
  const io::CsvTable prof = io::read_csv(dir / "a" / "wheel_profile.csv");
  EXPECT_EQ(prof.rows(), 360);
  for (Index i = 0; i < prof.rows(); ++i) EXPECT_EQ(prof.column("radius")[i], 0.46);
  EXPECT_TRUE(io::read_json(dir / "a" / "regression.json").empty());
}

TEST(CliAnalyze, ExactLogLinearSubsidenceGivesZeroRmse) {
  const fs::path dir = scratch("loglin");
  lab::RunScenario sc;
  sc.duration = 20.0;
  sc.speed_profile = {{0.0, 25.0}};
  sc.segments = {{0.0, 200.0, 0.5}, {200.0, 400.0, 2.0}, {400.0, 600.0, 1.0}};
  io::write_json(dir / "sc.json", io::scenario_to_json(sc));
  ASSERT_EQ(vkf_run({"simulate", "--scenario", (dir / "sc.json").string(), "--out", dir.string()}), 0);
  const std::string speed = (dir / "speed.csv").string();
  ASSERT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--orders", "sleeper", "--speed", speed,
                     "--bandwidth", "1", "--out", (dir / "env").string()}),
            0);
  // subsidence built exactly from the binned sleeper amplitude the analysis will use
  ASSERT_EQ(vkf_run({"analyze", "--envelopes", (dir / "env").string(), "--speed", speed, "--out",
                     (dir / "pass1").string()}),
            0);
  const io::CsvTable binned = io::read_csv(dir / "pass1" / "sleeper_binned.csv");
  io::CsvTable sub;
  sub.add("position", binned.column("position"));
  sub.add("u", (0.3 * binned.column("accel").array().log() - 1.6).matrix().eval());
  io::write_csv(dir / "sub.csv", sub);
  ASSERT_EQ(vkf_run({"analyze", "--envelopes", (dir / "env").string(), "--speed", speed, "--subsidence",
                     (dir / "sub.csv").string(), "--out", (dir / "pass2").string()}),
            0);
  const auto reg = io::read_json(dir / "pass2" / "regression.json").at("log_linear");
  EXPECT_NEAR(reg.at("slope").get<double>(), 0.3, 1e-9);
  EXPECT_NEAR(reg.at("intercept").get<double>(), -1.6, 1e-9);
  EXPECT_LE(reg.at("rmse").get<double>(), 1e-12);
  EXPECT_EQ(reg.at("n").get<Index>(), binned.rows());
}

TEST(CliAnalyze, EndToEndMassSlope) {
  const fs::path dir = scratch("mass");
  lab::RunScenario sc = cli::default_scenario();
  sc.duration = 30.0;
  sc.speed_profile = {{0.0, 20.0}, {30.0, 30.0}};
  sc.oor = {{1, 1e-4, 0.0}};
  sc.segments = {{0.0, 250.0, 0.5}, {250.0, 500.0, 2.0}, {500.0, 800.0, 1.0}};
  sc.noise_sigma = 0.05;
  sc.force_noise_sigma = 0.05 * 300.0;
  io::write_json(dir / "sc.json", io::scenario_to_json(sc));
  ASSERT_EQ(vkf_run({"simulate", "--scenario", (dir / "sc.json").string(), "--seed", "3", "--out", dir.string()}), 0);
  const std::string sig = (dir / "signal.csv").string(), speed = (dir / "speed.csv").string();
  ASSERT_EQ(vkf_run({"decompose", "--signal", sig, "--orders", "wheel:1,sleeper", "--speed", speed, "--bandwidth",
                     "0.5", "--out", (dir / "acc").string()}),
            0);
  ASSERT_EQ(vkf_run({"decompose", "--signal", sig, "--column", "force", "--orders", "sleeper", "--speed", speed,
                     "--bandwidth", "0.5", "--out", (dir / "force").string()}),
            0);
  ASSERT_EQ(vkf_run({"analyze", "--envelopes", (dir / "acc").string(), "--speed", speed, "--oor-gain", "1000",
                     "--force-envelopes", (dir / "force").string(), "--out", (dir / "a").string()}),
            0);
  const auto mass = io::read_json(dir / "a" / "regression.json").at("mass");
  EXPECT_NEAR(mass.at("affine").at("slope").get<double>(), 300.0, 15.0);
  EXPECT_NEAR(mass.at("through_origin").at("slope").get<double>(), 300.0, 15.0);
  const io::CsvTable prof = io::read_csv(dir / "a" / "wheel_profile.csv");
  const RealVector& r = prof.column("radius");
  EXPECT_NEAR(r.maxCoeff() - r.minCoeff(), 2e-4, 2e-5);
}

TEST(CliBinary, ExitCodesFromProcess) {
  const fs::path dir = scratch("proc");
  const std::string exe = VKF_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(exe + " synth --duration 0.1 --out " + dir.string()), 0);
  EXPECT_EQ(status(exe + " synth --duration abc"), 1);
  EXPECT_EQ(status(exe + " decompose --signal " + (dir / "none.csv").string() + " --freqs x.csv"), 1);
  EXPECT_EQ(status(exe + " decompose --signal " + (dir / "signal.csv").string() + " --freqs " +
                   (dir / "freqs.csv").string() + " --weight 1e12 --q 3 --out " + dir.string()),
            2);
}

TEST(CliDecompose, SpectrogramGridIsWritten) {
  const fs::path dir = scratch("spec");
  ASSERT_EQ(vkf_run({"synth", "--duration", "1", "--noise", "0", "--out", dir.string()}), 0);
  ASSERT_EQ(vkf_run({"decompose", "--signal", (dir / "signal.csv").string(), "--freqs", (dir / "freqs.csv").string(),
                     "--spectrogram", "--frame", "1200", "--hop", "600", "--out", (dir / "d").string()}),
            0);
  const io::CsvTable grid = io::read_csv(dir / "d" / "spectrogram.csv");
  EXPECT_EQ(grid.header.size(), 1u + 601u);
  // the stationary 500 Hz tone sits in the 500 Hz column (10 Hz bins)
  const RealVector& col = grid.column("500");
  EXPECT_NEAR(col.mean(), 1.0, 0.1);
  EXPECT_TRUE(fs::exists(dir / "d" / "spectrogram_filtered.csv"));
}
