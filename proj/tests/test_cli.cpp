#include <spdc/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace spdc;
namespace fs = std::filesystem;

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string data;  ///< column row plus data lines, verbatim
};

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv csv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      csv.header.push_back(line.substr(2));
      continue;
    }
    csv.data += line + "\n";
    std::stringstream ss(line);
    std::string cell;
    if (csv.columns.empty()) {
      while (std::getline(ss, cell, ',')) csv.columns.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    csv.rows.push_back(row);
  }
  return csv;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("spdc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig small_config() const {
    RunConfig c;
    c.wavelength_nm = {1300.0, 1900.0, 24};
    c.angle_rad = {-0.3, 0.3, 9};
    return c;
  }

  int run_cmd(const std::string& command, const RunConfig& c, RunOptions o = {}) {
    log_.str("");
    err_.str("");
    return run(command, c, o, log_, err_);
  }

  fs::path dir_;
  std::ostringstream log_, err_;
};

TEST_F(CliTest, SpectrumWritesHeaderAndGrid) {
  RunOptions o;
  o.out = (dir_ / "s.csv").string();
  ASSERT_EQ(run_cmd("spectrum", small_config(), o), exit_ok) << err_.str();
  const Csv csv = read_csv(dir_ / "s.csv");
  ASSERT_GE(csv.header.size(), 3u);
  EXPECT_EQ(csv.header[0], "spdc-etalon 0.1.0");
  EXPECT_EQ(csv.header[1], "command: spectrum");
  auto c = small_config();
  c.output = *o.out;
  EXPECT_EQ(parse_config(csv.header[2].substr(std::string("config: ").size())), c);
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"wavelength_nm", "angle_deg", "ff", "bb", "fb", "bf"}));
  ASSERT_EQ(csv.rows.size(), 24u * 9u);
  EXPECT_EQ(csv.rows.front()[0], 1300.0);
  EXPECT_NEAR(csv.rows.front()[1], -0.3 * 180.0 / std::numbers::pi, 1e-6);
  EXPECT_FALSE(fs::exists(dir_ / "s.csv.partial"));
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  auto c = small_config();
  c.model = Model::rigorous;
  RunOptions a, b;
  a.out = (dir_ / "a.csv").string();
  b.out = (dir_ / "a.csv").string();
  b.threads = 4;
  ASSERT_EQ(run_cmd("spectrum", c, a), exit_ok);
  const std::string first = read_csv(dir_ / "a.csv").data;
  ASSERT_EQ(run_cmd("spectrum", c, b), exit_ok);
  EXPECT_EQ(read_csv(dir_ / "a.csv").data, first);
}

TEST_F(CliTest, CompareReportsRSquared) {
  RunOptions o;
  o.out = (dir_ / "c.csv").string();
  o.scheme = "ff";
  ASSERT_EQ(run_cmd("compare", small_config(), o), exit_ok) << err_.str();
  const Csv csv = read_csv(dir_ / "c.csv");
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"wavelength_nm", "angle_deg", "simplified_ff", "rigorous_ff"}));
  bool found = false;
  for (const auto& h : csv.header)
    if (h.rfind("r_squared ff: ", 0) == 0) {
      found = true;
      EXPECT_GE(std::strtod(h.c_str() + 14, nullptr), 0.999);
    }
  EXPECT_TRUE(found);
  EXPECT_NE(log_.str().find("r_squared ff"), std::string::npos);
}

TEST_F(CliTest, NonresonantMatchedStackIsSincSquared) {
  auto c = small_config();
  c.stack.superstrate = c.stack.substrate = c.stack.film;
  c.normalization = Normalization::raw;
  RunOptions o;
  o.out = (dir_ / "n.csv").string();
  o.model = Model::nonresonant;
  o.scheme = "ff";
  ASSERT_EQ(run_cmd("spectrum", c, o), exit_ok);
  const Csv csv = read_csv(dir_ / "n.csv");
  const auto& ln = c.stack.film;
  const double L = 10150.0, two_pi = 2 * std::numbers::pi;
  const auto angles = c.angle_rad.values();
  ASSERT_EQ(csv.rows.size(), 24u * angles.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const double ls = c.wavelength_nm.values()[r / angles.size()], th = angles[r % angles.size()];
    const double li = 788.0 * ls / (ls - 788.0);
    const double ks = two_pi * refractive_index(ln, ls) / ls, ki = two_pi * refractive_index(ln, li) / li;
    const double kp = two_pi * refractive_index(ln, 788.0) / 788.0;
    const double sin_i = std::clamp(-ks * std::sin(th) / ki, -1.0, 1.0);
    const double dk_par = kp - ks * std::cos(th) - ki * std::sqrt(1 - sin_i * sin_i);
    const double dk_perp = -ks * std::sin(th) - ki * sin_i;
    const double x = dk_par * L / 2;
    const double expected = std::pow(std::sin(x) / x, 2) * std::exp(-0.5 * std::pow(dk_perp * 5000.0, 2));
    EXPECT_NEAR(row[2], expected, 1e-8 * expected + 1e-300);
  }
}

TEST_F(CliTest, TransmissionFringeSpacing) {
  auto c = small_config();
  c.wavelength_nm = {1480.0, 1680.0, 4001};
  c.angle_rad = {0.0, 0.01, 2};
  RunOptions o;
  o.out = (dir_ / "t.csv").string();
  ASSERT_EQ(run_cmd("transmission", c, o), exit_ok);
  const Csv csv = read_csv(dir_ / "t.csv");
  std::vector<double> wl, t;
  for (const auto& r : csv.rows)
    if (r[1] == 0.0) wl.push_back(r[0]), t.push_back(r[2]);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (t[i] > t[i - 1] && t[i] >= t[i + 1]) peaks.push_back(wl[i]);
  ASSERT_GE(peaks.size(), 2u);
  const double fsr = peaks[1] - peaks[0], mid = 0.5 * (peaks[0] + peaks[1]);
  const MaterialModel ln = material_preset("linbo3_e");
  const double ng = refractive_index(ln, mid) -
                    mid * (refractive_index(ln, mid + 0.01) - refractive_index(ln, mid - 0.01)) / 0.02;
  EXPECT_NEAR(fsr / (mid * mid / (2 * ng * 10150.0)), 1.0, 0.01);
}

TEST_F(CliTest, GainCurveAndDetectionTables) {
  auto c = small_config();
  c.gain_betas = {1e-3, 0.5, 2.0};
  c.envelope = EnvelopeModel{1576.0, 50.0, 1.0};
  c.efficiency_ratio = 0.4;
  RunOptions o;
  o.out = (dir_ / "g.csv").string();
  ASSERT_EQ(run_cmd("gain-curve", c, o), exit_ok);
  const Csv g = read_csv(dir_ / "g.csv");
  EXPECT_EQ(g.columns, (std::vector<std::string>{"beta_plus", "beta_normalized", "re_gamma_plus", "r_squared"}));
  ASSERT_EQ(g.rows.size(), 3u);
  EXPECT_EQ(g.rows[0][2], 0.0);
  EXPECT_GT(g.rows[2][2], 0.0);

  o.out = (dir_ / "d.csv").string();
  ASSERT_EQ(run_cmd("detection", c, o), exit_ok);
  const Csv d = read_csv(dir_ / "d.csv");
  EXPECT_EQ(d.columns, (std::vector<std::string>{"wavelength_nm", "forward", "backward", "forward_backward"}));
  double peak = 0.0;
  for (const auto& r : d.rows) peak = std::max(peak, r[1]);
  EXPECT_EQ(peak, 1.0);
  o.scheme = "backward";
  ASSERT_EQ(run_cmd("detection", c, o), exit_ok);
  EXPECT_EQ(read_csv(dir_ / "d.csv").columns, (std::vector<std::string>{"wavelength_nm", "backward"}));
}

TEST_F(CliTest, ErrorsMapToExitCodesAndLeaveNoFiles) {
  RunOptions o;
  o.out = (dir_ / "x.csv").string();
  EXPECT_EQ(run_cmd("bogus", small_config(), o), exit_config_error);
  o.scheme = "sideways";
  EXPECT_EQ(run_cmd("spectrum", small_config(), o), exit_config_error);
  o.scheme.reset();

  auto c = small_config();
  c.pump.wavelength_nm = 100.0;  // outside every material table
  EXPECT_EQ(run_cmd("detection", c, o), exit_numerical_error);
  EXPECT_NE(err_.str().find("detection"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "x.csv.partial"));

  EXPECT_EQ(run_file("spectrum", (dir_ / "missing.json").string(), o, log_, err_), exit_config_error);
  std::ofstream(dir_ / "bad.json") << R"({"stack": {}})";
  EXPECT_EQ(run_file("spectrum", (dir_ / "bad.json").string(), o, log_, err_), exit_config_error);
}

TEST_F(CliTest, ExecutableRunsSampleConfig) {
  const fs::path out = dir_ / "exe.csv";
  const std::string cmd = std::string(SPDC_ETALON_EXE) + " compare --config " + SPDC_CONFIG_DIR +
                          "/linbo3_on_silicon.json --scheme ff --threads 2 --out " + out.string() + " > " +
                          (dir_ / "log.txt").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const Csv csv = read_csv(out);
  EXPECT_EQ(csv.rows.size(), 512u * 256u);
  const std::string bad = std::string(SPDC_ETALON_EXE) + " spectrum --config " + (dir_ / "none.json").string() +
                          " 2> /dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), exit_config_error);
}

TEST(SampleConfigs, ParseAndRoundTrip) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SPDC_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    std::ifstream in(entry.path());
    std::ostringstream text;
    text << in.rdbuf();
    SCOPED_TRACE(entry.path().string());
    const RunConfig c = parse_config(text.str());
    EXPECT_EQ(parse_config(serialize_config(c)), c);
    EXPECT_NO_THROW(make_setup(c));
  }
  EXPECT_GE(seen, 3);
}

TEST(SampleConfigs, FieldDriveUsesChi2) {
  std::ifstream in(std::string(SPDC_CONFIG_DIR) + "/field_drive_detection.json");
  std::ostringstream text;
  text << in.rdbuf();
  const RunConfig c = parse_config(text.str());
  ASSERT_TRUE(std::holds_alternative<FieldDrive>(c.pump.drive));
  EXPECT_EQ(make_stack(c).chi2_pm_per_V, 50.0);
  ASSERT_TRUE(c.envelope);
  EXPECT_EQ(c.envelope->fwhm_nm, 60.0);
}

}  // namespace
