#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "config_file.hpp"

namespace lle::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lle");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Value printed after `key` in the estimate report.
std::string report_value(const std::string& text, const std::string& key) {
  for (const auto& line : lines(text)) {
    if (line.rfind(key + " ", 0) == 0) {
      std::istringstream in(line.substr(key.size()));
      std::string v;
      in >> v;
      return v;
    }
  }
  return {};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lle_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

TEST(ConfigFile, ParsesCommentsAndNormalizesKeys) {
  const auto s = parse_settings(
      "# sweep settings\n"
      "system = tent\n"
      "\n"
      "d_sat = 0.01   # trailing comment\n"
      "  lambda=constant\n",
      known_keys());
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.at("system"), "tent");
  EXPECT_EQ(s.at("d-sat"), "0.01");
  EXPECT_EQ(s.at("lambda"), "constant");
}

TEST(ConfigFile, RejectsBadInput) {
  auto expect_line = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_settings(text, known_keys());
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("system = tent\ncolour = red\n", "line 2");
  expect_line("system = tent\nsystem = henon\n", "line 2");
  expect_line("\n\njust words\n", "line 3");
  expect_line("= 3\n", "line 1");
}

TEST(ConfigFile, MergePrefersOverrides) {
  const Settings base = {{"system", "tent"}, {"steps", "100"}};
  const Settings over = {{"steps", "200"}};
  const auto m = merge(base, over);
  EXPECT_EQ(m.at("system"), "tent");
  EXPECT_EQ(m.at("steps"), "200");
}

TEST(Options, FromSettings) {
  const auto o = Options::from_settings(
      {{"system", "henon"}, {"x0", "0.25"}, {"channels", "down,up"}, {"lambda", "constant"}});
  EXPECT_EQ(o.system, "henon");
  EXPECT_EQ(o.x0, 0.25);
  EXPECT_EQ(o.channels, ChannelPair(Rounding::TowardNegative, Rounding::TowardPositive));
  EXPECT_EQ(o.lambda, LambdaSchedule::constant());
  const auto v = Options::from_settings({{"lambda-c", "0.5"}});
  EXPECT_EQ(v.lambda, LambdaSchedule::inverse_k(0.5));
  EXPECT_THROW((void)Options::from_settings({{"steps", "ten"}}), Error);
  EXPECT_THROW((void)Options::from_settings({{"lambda", "sometimes"}}), Error);
}

TEST_F(CliTest, SimulateCsv) {
  const auto csv = path("sim.csv");
  const auto r = invoke({"simulate", "--system", "logistic", "--x0", "0.1", "--steps", "1000",
                         "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(slurp(csv));
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_EQ(rows[0], "k,x_a,x_b,delta,ln_delta");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(std::stoul(f[0]), i);
    const double xa = std::stod(f[1]), xb = std::stod(f[2]), d = std::stod(f[3]);
    // 17 significant digits round-trip exactly.
    EXPECT_EQ(std::fabs(xa - xb) / 2, d);
    if (d == 0) {
      EXPECT_EQ(f[4], "-inf");
    } else {
      EXPECT_EQ(std::stod(f[4]), std::log(d));
    }
  }
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const auto a = path("a.csv"), b = path("b.csv");
  for (const auto& p : {a, b}) {
    ASSERT_EQ(invoke({"simulate", "--system", "henon", "--x0", "0.3", "--steps", "500",
                      "--channels", "zero,up", "--out", p.string()})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  const auto unknown = invoke({"estimate", "--system", "lorenz"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("mackey-glass"), std::string::npos);
  EXPECT_EQ(invoke({"simulate", "--steps", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"simulate", "--x0", "7"}).code, kExitUsage);
  EXPECT_EQ(invoke({"simulate", "--channels", "up,up"}).code, kExitUsage);
  EXPECT_EQ(invoke({"estimate", "--lambda", "sometimes"}).code, kExitUsage);
  EXPECT_EQ(invoke({"estimate", "--config", path("missing.conf").string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, NumericFailureExit) {
  const auto r = invoke({"simulate", "--system", "logistic", "--x0", "0.5"});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("never diverged"), std::string::npos);
  EXPECT_EQ(invoke({"estimate", "--system", "logistic", "--x0", "0.5"}).code, kExitNumeric);
}

TEST_F(CliTest, EstimateLogistic) {
  const auto v = invoke({"estimate", "--system", "logistic", "--x0", "0.1"});
  ASSERT_EQ(v.code, kExitOk) << v.err;
  EXPECT_NEAR(std::stod(report_value(v.out, "lle")), std::numbers::ln2, 0.1);
  EXPECT_EQ(report_value(v.out, "schedule"), "variable(c=1.02)");

  const auto c = invoke({"estimate", "--system", "logistic", "--x0", "0.1", "--lambda", "constant"});
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_EQ(report_value(c.out, "schedule"), "constant");
  // Same LBE window, different weighting.
  const auto window = [](const std::string& out) {
    for (const auto& l : lines(out)) {
      if (l.rfind("window", 0) == 0) return l;
    }
    return std::string();
  };
  EXPECT_EQ(window(v.out), window(c.out));
  EXPECT_NE(report_value(v.out, "slope"), report_value(c.out, "slope"));
}

TEST_F(CliTest, EstimateTentAndCsv) {
  const auto csv = path("fit.csv");
  const auto r = invoke({"estimate", "--system", "tent", "--x0", "0.3", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(std::stod(report_value(r.out, "lle")), std::log(1.99), 0.05);
  const auto rows = lines(slurp(csv));
  ASSERT_GT(rows.size(), kMinWindowPoints);
  EXPECT_EQ(rows[0], "k,ln_delta,fit");
}

TEST_F(CliTest, ConfigFileAndFlagOverride) {
  const auto conf = path("run.conf");
  std::ofstream(conf) << "# tent run\nsystem = tent\nx0 = 0.3\nlambda = constant\n";
  const auto from_file = invoke({"estimate", "--config", conf.string()});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(report_value(from_file.out, "system"), "tent");
  EXPECT_EQ(report_value(from_file.out, "schedule"), "constant");

  const auto overridden =
      invoke({"estimate", "--config", conf.string(), "--lambda", "variable"});
  ASSERT_EQ(overridden.code, kExitOk);
  EXPECT_EQ(report_value(overridden.out, "system"), "tent");
  EXPECT_EQ(report_value(overridden.out, "schedule"), "variable(c=1.02)");

  std::ofstream(path("bad.conf")) << "system = tent\nsytem = henon\n";
  const auto bad = invoke({"estimate", "--config", path("bad.conf").string()});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, Table2SingleSystem) {
  const auto csv = path("t2.csv");
  const auto r = invoke({"table2", "--system", "henon", "--n-ics", "10", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(slurp(csv));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(fields(rows[1])[0], "henon");
  EXPECT_EQ(fields(rows[1]).size(), 9u);
}

TEST_F(CliTest, Table2OneMinusDenominatorFlagged) {
  const auto csv = path("mg.csv");
  const auto r = invoke({"table2", "--system", "mackey-glass", "--n-ics", "4",
                         "--mg-denominator", "one-minus", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto f = fields(lines(slurp(csv)).at(1));
  EXPECT_EQ(f.back(), "0");
  EXPECT_NE(r.err.find("did not pass"), std::string::npos);
}

TEST_F(CliTest, FigureMatchesEstimate) {
  for (const auto& spec : all_systems()) {
    const auto svg = path(spec.name + ".svg");
    const auto fig = invoke({"figure", "--system", spec.name, "--out", svg.string()});
    ASSERT_EQ(fig.code, kExitOk) << spec.name << ": " << fig.err;
    const auto est = invoke({"estimate", "--system", spec.name});
    ASSERT_EQ(est.code, kExitOk);
    EXPECT_EQ(report_value(fig.out, "lle"), report_value(est.out, "lle")) << spec.name;

    const std::string text = slurp(svg);
    EXPECT_EQ(text.rfind("<?xml", 0), 0u);
    EXPECT_NE(text.find("</svg>"), std::string::npos);
    EXPECT_NE(text.find("LLE = " + report_value(est.out, "lle")), std::string::npos);

    // One CSV row per nonzero divergence, window rows flagged and fitted.
    auto csv_path = svg;
    csv_path.replace_extension(".csv");
    const auto rows = lines(slurp(csv_path));
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[0], "k,ln_delta,in_window,fit");
    const auto pair = simulate_pair(spec, spec.ic_range.lo, default_steps(spec));
    const auto lbe = compute_lbe(pair, spec.time_scale());
    EXPECT_EQ(rows.size() - 1, lbe.y.size());
    std::size_t in_window = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto f = fields(rows[i]);
      ASSERT_EQ(f.size(), 4u) << rows[i];
      if (f[2] == "1") {
        ++in_window;
        EXPECT_FALSE(f[3].empty());
      } else {
        EXPECT_TRUE(f[3].empty());
      }
    }
    EXPECT_EQ(in_window, lbe.window_points().size());
  }
}

}  // namespace
}  // namespace lle::cli
