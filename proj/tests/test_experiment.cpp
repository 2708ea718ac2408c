#include <sstream>

#include <gtest/gtest.h>

#include "spinflip/config.hpp"
#include "spinflip/emit.hpp"
#include "spinflip/experiment.hpp"
#include "spinflip/metrics.hpp"

namespace spinflip {
namespace {

using nlohmann::json;

TEST(Presets, AllNamesResolve) {
  for (const auto& name : preset_names()) {
    const auto specs = preset(name);
    ASSERT_FALSE(specs.empty()) << name;
    for (const auto& s : specs) EXPECT_NO_THROW(s.validate()) << name;
  }
  EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Presets, RowCounts) {
  const auto fig2c = run_experiments(preset("fig2c"));
  ASSERT_TRUE(fig2c.ok());
  EXPECT_EQ(fig2c.rows.size(), 3u * 21u);
  const auto fig2ab = run_experiments(preset("fig2ab"));
  ASSERT_TRUE(fig2ab.ok());
  EXPECT_EQ(fig2ab.rows.size(), 29u * 15u);
  EXPECT_DOUBLE_EQ(fig2ab.rows.front().g, 0.2);
  EXPECT_DOUBLE_EQ(fig2ab.rows.back().g, 3.0);
}

TEST(Experiment, SerialAndParallelAreIdentical) {
  for (const char* name : {"fig2ab", "robustness", "photonic-ideal"}) {
    const auto a = run_experiments(preset(name), Execution::serial);
    const auto b = run_experiments(preset(name), Execution::parallel);
    EXPECT_EQ(a.rows, b.rows) << name;
  }
}

TEST(Experiment, GridOrderIsCouplingOuterSeparationInner) {
  auto spec = preset("fig2c").front();
  spec.n_max = 0;
  spec.sweep.g = {0.5, 1.0};
  spec.sweep.kx0_over_pi = {0.9, 1.0, 1.1};
  const auto res = run_experiment(spec);
  ASSERT_EQ(res.rows.size(), 6u);
  EXPECT_DOUBLE_EQ(res.rows[1].g, 0.5);
  EXPECT_DOUBLE_EQ(res.rows[1].kx0_over_pi, 1.0);
  EXPECT_DOUBLE_EQ(res.rows[3].g, 1.0);
}

TEST(Experiment, TruncatedBranchBecomesFailure) {
  auto spec = preset("fig2c").front();
  spec.initial = InitialState::singlet();
  spec.post_select = PostSelect::down;
  spec.n_max = 3;
  const auto res = run_experiment(spec);
  ASSERT_EQ(res.failures.size(), 1u);
  EXPECT_NE(res.failures[0].reason.find("vanished"), std::string::npos);
  EXPECT_EQ(res.rows.size(), 1u);
}

TEST(Experiment, DefaultInitialStateIsExtremeProduct) {
  const auto spec = preset("entanglement-s2").front();
  const StateVector v = spec.initial_or_default().build(spec.model.s);
  EXPECT_LT((v - product_state(spec.model.s, 4, -4)).norm(), 1e-15);
}

TEST(Experiment, RunTrajectoryMatchesExperimentRows) {
  const auto spec = preset("fig2c")[1];
  const auto res = run_experiment(spec);
  const auto traj = run_trajectory(spec.model, spec.initial_or_default(), spec.n_max);
  ASSERT_EQ(res.rows.size(), traj.records.size());
  for (std::size_t j = 0; j < traj.records.size(); ++j) {
    EXPECT_EQ(res.rows[j].fidelity, traj.records[j].fidelity);
  }
}

TEST(InitialStates, ParseAndBuild) {
  const Spin s(2);
  EXPECT_LT((InitialState::parse("product:1,-1").build(s) - product_state(s, 2, -2)).norm(), 1e-15);
  EXPECT_LT((InitialState::parse("coupled:0,0").build(s) - singlet_state(s)).norm(), 1e-14);
  EXPECT_LT((InitialState::parse("singlet").build(s) - singlet_state(s)).norm(), 1e-15);
  const StateVector c = InitialState::parse("custom:1,0,0,0,0,0,0,0,1").build(s);
  EXPECT_NEAR(c.norm(), 1.0, 1e-15);
  EXPECT_NEAR(c(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(InitialStates, Errors) {
  EXPECT_THROW(InitialState::parse("product:1"), ConfigError);
  EXPECT_THROW(InitialState::parse("bogus"), ConfigError);
  EXPECT_THROW(InitialState::parse("product:3/2,1/2").build(Spin(1)), ConfigError);
  EXPECT_THROW(InitialState::parse("coupled:1/2,1/2").build(Spin(2)), ConfigError);  // parity
  EXPECT_THROW(InitialState::parse("coupled:3,0").build(Spin(2)), ConfigError);
  EXPECT_THROW(InitialState::parse("custom:1,0").build(Spin(1)), ConfigError);
  EXPECT_THROW(InitialState::parse("custom:0,0,0,0").build(Spin(1)), ConfigError);
}

TEST(PostSelection, Parse) {
  EXPECT_EQ(parse_post_select("up"), PostSelect::up);
  EXPECT_EQ(parse_post_select("none"), PostSelect::none);
  EXPECT_THROW(parse_post_select("sideways"), ConfigError);
}

TEST(Axis, ParsesListsAndRanges) {
  EXPECT_EQ(parse_axis("1.5"), (std::vector<double>{1.5}));
  EXPECT_EQ(parse_axis("1,2,3"), (std::vector<double>{1, 2, 3}));
  const auto r = parse_axis("0.2:3.0:0.1");
  ASSERT_EQ(r.size(), 29u);
  EXPECT_DOUBLE_EQ(r[10], 1.2);
  EXPECT_THROW(parse_axis("1:0:0.1"), ConfigError);
  EXPECT_THROW(parse_axis("1:2:0"), ConfigError);
  EXPECT_THROW(parse_axis("abc"), ConfigError);
}

TEST(Config, ParsesFullDocument) {
  const auto doc = json::parse(R"({
    "label": "demo",
    "model": {"spin": "3/2", "coupling": "xy", "rates": [1.0, 2.0, 1.0], "kx0_over_pi": 1.0},
    "initial": {"kind": "product", "m1": 1.5, "m2": -1.5},
    "n_max": 5,
    "post_select": "up",
    "k_spread": {"sigma_over_k": 0.02, "nodes": 11},
    "sweep": {"kx0_over_pi": "0.9:1.1:0.1"}
  })");
  const auto spec = parse_experiment(doc);
  EXPECT_EQ(spec.label, "demo");
  EXPECT_EQ(spec.model.s.twice(), 3);
  EXPECT_EQ(spec.model.coupling.kind, CouplingKind::xy);
  EXPECT_EQ(spec.model.dispersion, Dispersion::linear);
  EXPECT_EQ(spec.n_max, 5);
  ASSERT_TRUE(spec.k_spread);
  EXPECT_EQ(spec.k_spread->nodes, 11);
  EXPECT_EQ(spec.sweep.kx0_over_pi.size(), 3u);
  const auto res = run_experiment(spec);
  EXPECT_TRUE(res.ok());
  EXPECT_EQ(res.rows.size(), 18u);
}

TEST(Config, ErrorsCarryFieldPath) {
  auto expect_path = [](const char* text, const std::string& path) {
    try {
      parse_experiment(json::parse(text));
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(path), std::string::npos) << e.what();
    }
  };
  expect_path(R"({"model": {"spin": 0.5, "jvv": 1}})", "model.jvv");
  expect_path(R"({"model": {"spin": 0.3}})", "model.spin");
  expect_path(R"({"model": {"spin": 0.5, "jv": -1}})", "model");
  expect_path(R"({"model": {"spin": 0.5}, "n_max": -2})", "n_max");
  expect_path(R"({"model": {"spin": 0.5}, "k_spread": {"sigma_over_k": 0.5}})", "k_spread");
  expect_path(R"({"model": {"spin": 0.5}, "initial": {"kind": "product", "m1": 0.25, "m2": 0.5}})",
              "initial.m1");
  expect_path(R"({"model": {"spin": 0.5}, "extra": 1})", "extra");
  expect_path(R"({})", "model");
}

ResultRow sample_row() {
  return {"x", "3/2", "xy", 0.1, 1.0 / 3.0, 0.0, 4, 0.123456789012345678, 1e-300, 2.5, 0.75, 1.0};
}

TEST(Emit, CsvHeaderOnlyForEmptyRows) {
  std::ostringstream os;
  write_csv(os, {});
  EXPECT_EQ(os.str(), csv_header() + "\n");
}

TEST(Emit, CsvRowHasAllColumns) {
  std::ostringstream os;
  write_csv(os, {sample_row()});
  const std::string text = os.str();
  const auto second = text.substr(text.find('\n') + 1);
  EXPECT_EQ(std::count(second.begin(), second.end(), ','), 11);
  EXPECT_EQ(second.rfind("x,3/2,xy,", 0), 0u);
}

TEST(Emit, JsonRoundTripIsExact) {
  std::vector<ResultRow> rows{sample_row(), sample_row()};
  rows[1].n = 5;
  rows[1].fidelity = 0.9999999999999999;
  std::ostringstream os;
  write_json(os, rows);
  EXPECT_EQ(rows_from_json(os.str()), rows);
}

TEST(Emit, FormatParsingAndBadPath) {
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(parse_format("json"), Format::json);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
  EXPECT_THROW(emit({}, Format::csv, "/nonexistent-dir/out.csv"), std::runtime_error);
}

}  // namespace
}  // namespace spinflip
