#include <algorithm>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "udw/peaks.hpp"
#include "udw/scenario.hpp"

using namespace udw::cli;

namespace {

const char* kMinimal = R"({
  "kind": "linear_one",
  "params": {"n": 3, "k0": 1, "sigma": 0.5, "omega": 1},
  "sweep": {"variable": "omega", "min": 0.5, "max": 1.5, "points": 5}
})";

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string expect_config_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for: " << text;
  return {};
}

}  // namespace

TEST(ScenarioConfig, ParsesMinimalConfig) {
  auto s = parse_scenario(kMinimal);
  EXPECT_EQ(s.kind, Kind::linear_one);
  EXPECT_EQ(grid_points(s).size(), 5u);
  EXPECT_EQ(s.format, "csv");
}

TEST(ScenarioConfig, SinglePointGridIsRejected) {
  std::string text = kMinimal;
  text.replace(text.find("\"points\": 5"), 11, "\"points\": 1");
  EXPECT_NE(expect_config_error(text).find("sweep.points"), std::string::npos);
}

TEST(ScenarioConfig, SyntaxErrorReportsLine) {
  EXPECT_NE(expect_config_error("{\n  \"kind\": \"linear_one\",\n  oops\n}").find("line 3"), std::string::npos);
}

TEST(ScenarioConfig, FieldDiagnostics) {
  EXPECT_NE(expect_config_error(R"({"kind": "linear_one", "params": {"n": 3, "k0": "x", "sigma": 1, "omega": 1},
      "sweep": {"variable": "omega", "min": 0.1, "max": 1, "points": 3}})")
                .find("params.k0"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"kind": "linear_one", "params": {"n": 3, "k0": 1, "sigma": 1},
      "sweep": {"variable": "T", "min": 0.1, "max": 1, "points": 3}})")
                .find("sweep.variable"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"kind": "linear_one", "params": {"n": 3, "k0": 1},
      "sweep": {"variable": "omega", "min": 0.1, "max": 1, "points": 3}})")
                .find("params.sigma"),
            std::string::npos);
  EXPECT_NE(expect_config_error(R"({"kind": "warp_drive", "params": {}, "sweep": {}})").find("kind"), std::string::npos);
}

TEST(ScenarioConfig, LogGridNeedsPositiveStart) {
  std::string text = kMinimal;
  text.replace(text.find("\"points\": 5"), 11, "\"points\": 5, \"scale\": \"log\"");
  text.replace(text.find("\"min\": 0.5"), 10, "\"min\": 0.0");
  EXPECT_NE(expect_config_error(text).find("sweep.min"), std::string::npos);
}

TEST(ScenarioConfig, IntegerSweepNeedsIntegerStep) {
  EXPECT_NE(expect_config_error(R"({"kind": "deposit_linear", "params": {"L": 3.14, "T": 1, "omega": 6},
      "sweep": {"variable": "j", "min": 1, "max": 4, "points": 7}})")
                .find("integer"),
            std::string::npos);
}

TEST(Presets, CountAndNames) {
  const auto& all = presets();
  EXPECT_GE(all.size(), 14u);
  EXPECT_NE(list_presets().find("fig1_n3"), std::string::npos);
  std::vector<std::string> names;
  for (const auto& p : all) names.push_back(p.name);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
}

TEST(Presets, RoundTripThroughSerialization) {
  for (const auto& p : presets()) {
    const auto text = to_json(p).dump(2);
    const auto back = parse_scenario(text);
    EXPECT_EQ(to_json(back).dump(2), text) << p.name;
    EXPECT_EQ(grid_points(back), grid_points(p)) << p.name;
  }
}

TEST(Run, CsvHeaderAndRowCount) {
  auto rows = run_rows(parse_scenario(kMinimal), 1);
  const auto table = parse_csv(to_csv(rows));
  ASSERT_EQ(table.size(), 6u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"k0", "n", "omega", "sigma", "value", "error_estimate"}));
  EXPECT_EQ(table[1][2], "0.5");
  EXPECT_EQ(table[5][2], "1.5");
}

TEST(Run, ShortestRoundTripFloats) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  for (double x : {M_PI, 1.0 / 3.0, 2.5e-17}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Run, IdenticalAcrossWorkerCounts) {
  auto s = preset("fig4");
  s.sweep.points = 30;
  EXPECT_EQ(to_csv(run_rows(s, 1)), to_csv(run_rows(s, 3)));
}

TEST(Run, JsonOutputIsValidAndMatchesCsv) {
  auto rows = run_rows(parse_scenario(kMinimal), 2);
  auto parsed = nlohmann::json::parse(to_json_text(rows));
  ASSERT_EQ(parsed.size(), 5u);
  EXPECT_EQ(parsed[4]["omega"].get<double>(), 1.5);
  EXPECT_EQ(parsed[2]["value"].get<double>(), rows[2].value);
}

TEST(Run, NumericalFailureNamesGridPoint) {
  const char* text = R"({"kind": "linear_one", "params": {"n": 1, "k0": 1, "sigma": 0.5, "ir_cutoff": 0.2},
      "sweep": {"variable": "omega", "min": 0.1, "max": 1, "points": 3}})";
  try {
    run_rows(parse_scenario(text), 1);
    FAIL() << "expected RunError";
  } catch (const RunError& e) {
    EXPECT_NE(std::string(e.what()).find("grid point 0"), std::string::npos);
  }
}

TEST(Run, FigureOnePeaksShrinkWithWidth) {
  auto rows = run_rows(preset("fig1_n3"), 2);
  std::map<double, double> peak;
  for (const auto& r : rows) {
    const double s = r.params.at("sigma").get<double>();
    peak[s] = std::max(peak[s], r.value);
  }
  ASSERT_EQ(peak.size(), 3u);
  EXPECT_GT(peak[1.0], peak[0.5]);
  EXPECT_GT(peak[0.5], peak[0.25]);
}

TEST(Run, SumFrequencyPresetPeaksNearSum) {
  auto s = preset("fig5_sfg");
  s.rel_tol = 1e-7;
  auto rows = run_rows(s, 2);
  double best = 0.0, at = 0.0;
  for (const auto& r : rows) {
    const double pr = r.components.at(1).value;
    EXPECT_EQ(r.components.at(1).name, "p_r");
    if (pr > best) best = pr, at = r.params.at("omega").get<double>();
  }
  EXPECT_NEAR(at, 4.0, 0.6);
}

TEST(Run, DimensionlessUnitsDivideByCouplingScale) {
  std::string raw = kMinimal;
  raw.insert(raw.rfind('}'), ", \"units\": \"raw\"");
  std::string text = kMinimal;
  text.replace(text.find("\"k0\": 1"), 7, "\"k0\": 2");
  raw.replace(raw.find("\"k0\": 1"), 7, "\"k0\": 2");
  auto a = run_rows(parse_scenario(text), 1), b = run_rows(parse_scenario(raw), 1);
  EXPECT_DOUBLE_EQ(a[0].value, b[0].value / std::pow(2.0, 0.0));  // n = 3: lambda-tilde = lambda
  text.replace(text.find("\"n\": 3"), 6, "\"n\": 2");
  raw.replace(raw.find("\"n\": 3"), 6, "\"n\": 2");
  a = run_rows(parse_scenario(text), 1), b = run_rows(parse_scenario(raw), 1);
  EXPECT_DOUBLE_EQ(a[0].value, b[0].value * 2.0);  // n = 2: lambda-tilde^2 = lambda^2 / k0
}
