#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <unistd.h>

#include "cfq/cli/commands.hpp"
#include "cfq/discrete/chsh.hpp"
#include "cfq/discrete/json_io.hpp"
#include "cfq/error.hpp"
#include "cfq/io/csv.hpp"
#include "cfq/io/records.hpp"

using namespace cfq;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfq");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("cfq_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

// Bob's outcome given Alice's +1, then Alice's counterfactual +1 given Bob's outcome.
double chsh_oracle(double x, double y, double xc) {
  double s = 0.0;
  for (int b : {+1, -1}) s += 0.5 * (1.0 - b * std::cos(x - y)) * 0.5 * (1.0 - b * std::cos(xc - y));
  return s;
}

}  // namespace

// ------------------------------------------------------------------- CSV

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
  EXPECT_EQ(io::format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, RoundTripKeepsTwelveDigits) {
  TempDir dir;
  std::mt19937_64 g(1);
  std::normal_distribution<double> n(0.0, 10.0);
  io::CsvTable t{{"a", "b"}, {{}, {}}};
  for (int i = 0; i < 100; ++i) {
    t.columns[0].push_back(n(g));
    t.columns[1].push_back(std::exp(n(g)));
  }
  io::write_csv(dir.file("x.csv"), t);
  const io::CsvTable back = io::read_csv(dir.file("x.csv"));
  EXPECT_EQ(back.header, t.header);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 100; ++i) {
      EXPECT_NEAR(back.columns[j][i], t.columns[j][i], 5e-12 * std::abs(t.columns[j][i]));
    }
}

TEST(Csv, ErrorPaths) {
  TempDir dir;
  EXPECT_THROW(io::write_csv(dir.file("x.csv"), io::CsvTable{{"a", "b"}, {{1.0}, {1.0, 2.0}}}), InputError);
  EXPECT_THROW(io::write_csv(dir.file("missing/x.csv"), io::CsvTable{{"a"}, {{1.0}}}), IoError);
  EXPECT_THROW(io::read_csv(dir.file("nope.csv")), IoError);
  std::ofstream(dir.file("bad.csv")) << "a,b\n1,zz\n";
  EXPECT_THROW(io::read_csv(dir.file("bad.csv")), InputError);
}

TEST(Csv, TableShapes) {
  const auto bloch = io::bloch_table({0.0, 1.0}, {qubit::ground_projector(), qubit::excited_projector()}, {1.0, 0.5});
  EXPECT_EQ(bloch.header, (std::vector<std::string>{"t", "sx", "sy", "sz", "trace"}));
  EXPECT_EQ(bloch.columns[3], (std::vector<double>{-1.0, 1.0}));
  const auto curve = io::curve_table({0.0}, {2.0}, {0.1});
  EXPECT_EQ(curve.header, (std::vector<std::string>{"t", "value", "stderr"}));
  fpe::ThetaPdf pdf;
  pdf.values = {1.0, 2.0, 3.0, 4.0};
  const auto theta = io::theta_table(pdf);
  EXPECT_EQ(theta.header, (std::vector<std::string>{"theta", "pdf"}));
  ASSERT_EQ(theta.columns[0].size(), 5u);
  EXPECT_DOUBLE_EQ(theta.columns[0].back(), 2.0 * kPi);
  EXPECT_EQ(theta.columns[1].back(), theta.columns[1].front());
}

// --------------------------------------------------------------- records

TEST(Records, JsonLinesRoundTripWithZeroWeight) {
  TempDir dir;
  const std::vector<io::RecordLine> lines{{0, qubit::ClickRecord{{1.5, 2.25}}, -3.5},
                                          {1, qubit::ClickRecord{}, -std::numeric_limits<double>::infinity()}};
  io::write_records(dir.file("r.jsonl"), lines);
  const std::string text = slurp(dir.file("r.jsonl"));
  EXPECT_EQ(text, "{\"clicks\":[1.5,2.25],\"idx\":0,\"logw\":-3.5}\n{\"clicks\":[],\"idx\":1,\"logw\":null}\n");
  const auto back = io::read_records(dir.file("r.jsonl"));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].record.times, lines[0].record.times);
  EXPECT_EQ(back[0].log_weight, -3.5);
  EXPECT_EQ(back[1].log_weight, -std::numeric_limits<double>::infinity());
  std::ofstream(dir.file("bad.jsonl")) << "{\"idx\": 0}\n";
  EXPECT_THROW(io::read_records(dir.file("bad.jsonl")), InputError);
}

// ------------------------------------------------------------------- CLI

TEST(Cli, ChshDefaultsPrintThreeQuarters) {
  const auto r = run_cli({"chsh"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "supposability = 0.750000000000\n");
}

TEST(Cli, ChshVerbosePrintsBothFactors) {
  const auto r = run_cli({"chsh", "--verbose"});
  EXPECT_EQ(r.code, 0);
  const double hi = (std::sqrt(2.0) + 1.0) / (2.0 * std::sqrt(2.0));
  const double lo = (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(2.0));
  char buf[128];
  std::snprintf(buf, sizeof buf, "posterior = %.12f, counterfactual = %.12f", hi, hi);
  EXPECT_NE(r.out.find(buf), std::string::npos) << r.out;
  std::snprintf(buf, sizeof buf, "posterior = %.12f, counterfactual = %.12f", lo, lo);
  EXPECT_NE(r.out.find(buf), std::string::npos) << r.out;
}

TEST(Cli, ChshMatchingBasesAndArbitraryAngles) {
  EXPECT_EQ(run_cli({"chsh", "--bob-angle", "0", "--cf-angle", "0"}).out, "supposability = 1.000000000000\n");
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    const double x = u(g), y = u(g), xc = u(g);
    const auto r = run_cli({"chsh", "--alice-angle", std::to_string(x), "--bob-angle", std::to_string(y), "--cf-angle",
                        std::to_string(xc)});
    ASSERT_EQ(r.code, 0);
    const double v = std::stod(r.out.substr(r.out.find('=') + 1));
    EXPECT_NEAR(v, chsh_oracle(std::stod(std::to_string(x)), std::stod(std::to_string(y)),
                               std::stod(std::to_string(xc))),
                1e-11);
  }
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"teleport"}).code, 2);
  EXPECT_EQ(run_cli({"chsh", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"chsh", "--bob-angle", "abc"}).code, 2);
  EXPECT_EQ(run_cli({"chsh", "--bob-angle", "nan"}).code, 2);
  TempDir dir;
  EXPECT_EQ(run_cli({"lindblad", "--eta-a", "1.5", "--out-dir", dir.str()}).code, 2);
  EXPECT_EQ(run_cli({"fpe", "--n-grid", "100", "--out-dir", dir.str()}).code, 2);
  EXPECT_EQ(run_cli({"filter", "--t-click", "20", "--out-dir", dir.str()}).code, 2);
  EXPECT_EQ(run_cli({"jumprate", "--n-resample", "0", "--bin-width", "-1", "--out-dir", dir.str()}).code, 2);
  // Validation happens before anything is written.
  EXPECT_TRUE(fs::is_empty(dir.str()));
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, SupposabilityFromScenarioFile) {
  TempDir dir;
  const auto chsh = discrete::chsh_scenario(0.0, kPi / 4, kPi / 2);
  std::ofstream(dir.file("s.json")) << discrete::to_json(chsh.scenario, chsh.query).dump();
  const auto r = run_cli({"supposability", dir.file("s.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "supposability = 0.750000000000\n");
  EXPECT_EQ(run_cli({"supposability", dir.file("absent.json")}).code, 1);
  std::ofstream(dir.file("broken.json")) << "{\"events\": [";
  EXPECT_NE(run_cli({"supposability", dir.file("broken.json")}).code, 0);
}

TEST(Cli, LindbladAndFilterOutputsFollowTheTimeSeriesSchema) {
  TempDir dir;
  ASSERT_EQ(run_cli({"lindblad", "--t-final", "2", "--out-dir", dir.str()}).code, 0);
  ASSERT_EQ(run_cli({"filter", "--t-final", "2", "--t-click", "1.25", "--out-dir", dir.str()}).code, 0);
  for (const std::string name : {"lindblad.csv", "filter.csv"}) {
    const io::CsvTable t = io::read_csv(dir.file(name));
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "sx", "sy", "sz", "trace"}));
    ASSERT_EQ(t.columns[0].size(), 201u);  // stride 10 on dt = 1e-3
    EXPECT_DOUBLE_EQ(t.columns[0][1], 0.01);
    EXPECT_EQ(t.columns[3][0], -1.0);
  }
  const auto m = io::read_json(dir.file("manifest_lindblad.json"));
  EXPECT_EQ(m.at("command"), "lindblad");
  EXPECT_EQ(m.at("seed"), 1);
  EXPECT_EQ(m.at("parameters").at("t_final"), 2.0);
  EXPECT_EQ(m.at("outputs"), nlohmann::json::array({"lindblad.csv"}));
  EXPECT_TRUE(m.contains("version"));
  const auto f = io::read_json(dir.file("manifest_filter.json"));
  EXPECT_TRUE(f.at("results").contains("log_record_density"));
}

TEST(Cli, PrimaryOutputNameCanBeChosen) {
  TempDir dir;
  ASSERT_EQ(run_cli({"lindblad", "--t-final", "0.5", "--out-dir", dir.str(), "--out", "custom.csv"}).code, 0);
  EXPECT_TRUE(fs::exists(dir.file("custom.csv")));
  EXPECT_FALSE(fs::exists(dir.file("lindblad.csv")));
}

TEST(Cli, JumpRateOutputsForPlotting) {
  TempDir dir;
  const auto r = run_cli({"jumprate", "--n-ostensible", "60", "--n-resample", "80", "--seed", "3", "--out-dir", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const std::string name : {"jump_rate.csv", "ostensible_rate.csv"}) {
    const io::CsvTable t = io::read_csv(dir.file(name));
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "value", "stderr"}));
    ASSERT_EQ(t.columns[0].size(), 1000u);
    EXPECT_NEAR(t.columns[0][0], 0.005, 1e-12);
  }
  EXPECT_EQ(io::read_records(dir.file("ensemble_interval0.jsonl")).size(), 60u);
  EXPECT_EQ(io::read_records(dir.file("ensemble_interval1.jsonl")).size(), 60u);
  const auto resampled = io::read_records(dir.file("resampled.jsonl"));
  ASSERT_EQ(resampled.size(), 80u);
  for (const auto& l : resampled) EXPECT_NO_THROW(l.record.validate(0.0, 10.0));
  const auto m = io::read_json(dir.file("manifest_jumprate.json"));
  for (const char* key : {"peak_time", "peak_rate", "rate_at_click_bin", "mean_clicks_per_record", "ensembles"}) {
    EXPECT_TRUE(m.at("results").contains(key)) << key;
  }
  EXPECT_EQ(m.at("parameters").at("n_ostensible"), 60);
}

TEST(Cli, SuspectIsByteIdenticalForTheSameSeed) {
  TempDir a, b;
  const std::vector<std::string> common{"suspect", "--n-ostensible", "50", "--n-suspect", "20", "--seed", "7"};
  auto with_dir = [&](const TempDir& d) {
    auto args = common;
    args.push_back("--out-dir");
    args.push_back(d.str());
    return args;
  };
  ASSERT_EQ(run_cli(with_dir(a)).code, 0);
  ASSERT_EQ(run_cli(with_dir(b)).code, 0);
  for (const std::string name : {"suspectation.csv", "unconditioned.csv"}) {
    EXPECT_EQ(slurp(a.file(name)), slurp(b.file(name))) << name;
    EXPECT_EQ(first_line(a.file(name)), "t,value,stderr");
  }
  const auto m = io::read_json(a.file("manifest_suspect.json"));
  EXPECT_EQ(m.at("results").at("records").get<int>() + m.at("results").at("excluded").get<int>(), 20);
}

TEST(Cli, FpeWritesClosedThetaGrid) {
  TempDir dir;
  const auto r = run_cli({"fpe", "--n-grid", "512", "--tau", "0.5", "--out-dir", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("positive_mass = ", 0), 0u);
  const io::CsvTable t = io::read_csv(dir.file("theta_pdf.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"theta", "pdf"}));
  ASSERT_EQ(t.columns[0].size(), 513u);
  EXPECT_EQ(t.columns[0].front(), 0.0);
  EXPECT_NEAR(t.columns[0].back(), 2.0 * kPi, 1e-11);
  EXPECT_EQ(t.columns[1].front(), t.columns[1].back());
  const auto m = io::read_json(dir.file("manifest_fpe.json"));
  EXPECT_GT(m.at("results").at("positive_mass").get<double>(), 0.0);
  EXPECT_LT(m.at("results").at("clipped_mass").get<double>(), 1e-8);
}

TEST(Cli, InstalledBinaryRuns) {
  FILE* pipe = ::popen(CFQ_BINARY " chsh", "r");
  ASSERT_NE(pipe, nullptr);
  char buf[256] = {};
  const std::size_t n = std::fread(buf, 1, sizeof buf - 1, pipe);
  const int status = ::pclose(pipe);
  EXPECT_EQ(std::string(buf, n), "supposability = 0.750000000000\n");
  EXPECT_EQ(status, 0);
  EXPECT_NE(std::system(CFQ_BINARY " chsh --bogus > /dev/null 2>&1"), 0);
}
