// Copyright 2026 The ALIP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alip/simgen.h"

#include <cmath>

#include <gtest/gtest.h>

#include "alip/error.h"
#include "alip/metrics.h"
#include "alip/pipeline.h"
#include "test_util.h"

namespace alip {
namespace {

SimScenario Single(double rating, DenseMatrix transitions, std::size_t length) {
  SimScenario s;
  ApplianceSpec a;
  a.id = "A";
  a.states = {StateSpec::Steady("on", rating)};
  s.model.specs = {a};
  s.transitions = {std::move(transitions)};
  s.length = length;
  s.seed = 3;
  return s;
}

DenseMatrix Square(std::vector<std::vector<double>> rows) {
  DenseMatrix m(rows.size());
  for (const auto& r : rows) {
    auto d = m.AppendRow();
    std::copy(r.begin(), r.end(), d.begin());
  }
  return m;
}

TEST(Simulate, NoiseFreeSingleApplianceDrawsRating) {
  const SimResult r = Simulate(Single(250, Square({{0.7, 0.3}, {0.4, 0.6}}), 500));
  ASSERT_EQ(r.series.size(), 500u);
  std::size_t on = 0;
  for (std::size_t k = 0; k < 500; ++k) {
    const double expect = r.states[k][0] == 1 ? 250.0 : 0.0;
    EXPECT_EQ(r.series.aggregate[k], expect);
    EXPECT_EQ(r.series.channels(k, 0), expect);
    EXPECT_EQ(r.series.timestamps[k], static_cast<double>(k));
    on += r.states[k][0];
  }
  EXPECT_GT(on, 50u);
  EXPECT_LT(on, 450u);
}

TEST(Simulate, IdentityMatrixHoldsInitialState) {
  SimScenario s = Single(90, Square({{1, 0}, {0, 1}}), 200);
  s.initial = {1};
  const SimResult r = Simulate(s);
  for (const auto& codes : r.states) EXPECT_EQ(codes, (std::vector<int>{1}));
}

TEST(Simulate, BitIdenticalReruns) {
  for (const std::string& name : PresetNames()) {
    const SimResult a = Simulate(Preset(name, 11, 3000));
    const SimResult b = Simulate(Preset(name, 11, 3000));
    EXPECT_EQ(a.series.aggregate, b.series.aggregate) << name;
    EXPECT_EQ(a.series.channels, b.series.channels) << name;
    EXPECT_EQ(a.states, b.states) << name;
    const SimResult c = Simulate(Preset(name, 12, 3000));
    EXPECT_NE(a.series.aggregate, c.series.aggregate) << name;
  }
}

TEST(Simulate, OnlyLegalTransitions) {
  for (const std::string& name : PresetNames()) {
    const SimScenario sc = Preset(name, 5, 5000);
    const HouseholdModel m = CompileModelFile(sc.model);
    const SimResult r = Simulate(sc);
    for (std::size_t k = 1; k < r.states.size(); ++k) {
      for (std::size_t j = 0; j < m.num_appliances(); ++j) {
        ASSERT_TRUE(m.CanTransition(j, r.states[k - 1][j], r.states[k][j]))
            << name << " k=" << k << " j=" << j;
      }
    }
  }
}

TEST(Simulate, TransientsStayInBandAndDecay) {
  for (const std::string& name : {"alias", "mixed"}) {
    const SimScenario sc = Preset(name, 9, 20000);
    ASSERT_GT(sc.transient_len, 0u);
    const HouseholdModel m = CompileModelFile(sc.model);
    const SimResult r = Simulate(sc);
    for (std::size_t j = 0; j < m.num_appliances(); ++j) {
      for (std::size_t k = 0; k < r.states.size(); ++k) {
        const int code = r.states[k][j];
        const double v = r.series.channels(k, j);
        if (code == kOffCode) {
          EXPECT_EQ(v, 0.0);
          continue;
        }
        const std::size_t i = m.flat_index(j, code);
        EXPECT_GE(v, m.transient_min()[i] - 1e-9);
        EXPECT_LE(v, m.transient_max()[i] + 1e-9);
        // Within one visit the distance to the rating never grows.
        if (k > 0 && r.states[k - 1][j] == code) {
          EXPECT_LE(std::abs(v - m.ratings()[i]),
                    std::abs(r.series.channels(k - 1, j) - m.ratings()[i]) + 1e-9);
        }
      }
    }
  }
}

TEST(Simulate, AggregateIsClippedSumPlusNoise) {
  const SimScenario sc = Preset("chatter", 4, 5000);
  const SimResult r = Simulate(sc);
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    double draw = 0.0;
    for (std::size_t j = 0; j < r.series.channels.cols(); ++j) draw += r.series.channels(k, j);
    EXPECT_GE(r.series.aggregate[k], 0.0);
    if (r.series.aggregate[k] > 0.0) sum_sq += std::pow(r.series.aggregate[k] - draw, 2);
  }
  EXPECT_GT(std::sqrt(sum_sq / 5000.0), 0.5 * sc.noise_sd);
  EXPECT_LT(std::sqrt(sum_sq / 5000.0), 1.5 * sc.noise_sd);
}

TEST(Presets, CleanPresetIsSolvedExactly) {
  const SimScenario sc = Preset("clean", 1, 5000);
  const HouseholdModel m = CompileModelFile(sc.model);
  const SimResult sim = Simulate(sc);
  PipelineConfig c;
  c.enhancements = Enhancements::None();
  const DisaggregationResult r = alip::Run(m, sim.series.aggregate, c);
  EXPECT_EQ(Acc(*GroundTruthFor(sim.series, m), r.power), 1.0);
  EXPECT_EQ(r.states, sim.states);
}

TEST(Presets, ExperimentModelShape) {
  const HouseholdModel m = CompileModelFile(Preset("exp1", 1, 10).model);
  EXPECT_EQ(m.num_appliances(), 4u);
  EXPECT_EQ(m.num_states(), 13u);
  EXPECT_THROW(Preset("nope", 1, 10), Error);
}

TEST(Presets, CollisionSuiteCyclesPresets) {
  const std::vector<SimScenario> suite = CollisionSuite(10, 100, 50);
  ASSERT_EQ(suite.size(), 10u);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    EXPECT_EQ(suite[i].seed, 50 + i);
    EXPECT_EQ(suite[i].length, 100u);
  }
  EXPECT_EQ(suite[0].model.specs.size(), suite[5].model.specs.size());
}

TEST(ValidateScenario, RejectsBadInputs) {
  const auto code_of = [](const SimScenario& s) {
    try {
      ValidateScenario(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidConfig;  // sentinel: no error
  };
  EXPECT_EQ(code_of(Single(1, Square({{1, 0}, {0, 1}}), 5)), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(Single(1, Square({{0.5, 0.4}, {0, 1}}), 5)),
            ErrorCode::kInvalidScenario);
  EXPECT_EQ(code_of(Single(1, Square({{1.5, -0.5}, {0, 1}}), 5)),
            ErrorCode::kInvalidScenario);
  EXPECT_EQ(code_of(Single(1, Square({{1}}), 5)), ErrorCode::kInvalidScenario);
  SimScenario bad_start = Single(1, Square({{1, 0}, {0, 1}}), 5);
  bad_start.initial = {2};
  EXPECT_EQ(code_of(bad_start), ErrorCode::kInvalidScenario);
  SimScenario illegal = Single(1, Square({{0.5, 0.5}, {0.5, 0.5}}), 5);
  illegal.model.specs[0].std_edges = {{"OFF", "on"}};
  EXPECT_EQ(code_of(illegal), ErrorCode::kInvalidScenario);
}

TEST(UniformTransitions, RowsAreStochasticOnEdges) {
  const HouseholdModel m = CompileModelFile(Preset("fridge", 1, 10).model);
  for (std::size_t j = 0; j < m.num_appliances(); ++j) {
    const DenseMatrix t = UniformTransitions(m, j, 0.9);
    for (std::size_t a = 0; a < t.rows(); ++a) {
      double sum = 0.0;
      for (std::size_t b = 0; b < t.cols(); ++b) {
        sum += t(a, b);
        if (!m.CanTransition(j, static_cast<int>(a), static_cast<int>(b))) {
          EXPECT_EQ(t(a, b), 0.0);
        }
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(ParseScenario, InlineModelAndOverrides) {
  const std::string text = R"(schema: alip.scenario/1
length: 300
seed: 4
noise_sd: 0
model:
  appliances:
    - id: A
      states: [{label: s1, rating: 100}]
    - id: B
      states: [{label: s1, rating: 40}]
default_walk: {leave_off: 0.1, stay: 0.9}
transitions:
  B: [[0, 1], [0, 1]]
)";
  const SimScenario s = ParseScenario(text, ".");
  EXPECT_EQ(s.length, 300u);
  EXPECT_EQ(s.seed, 4u);
  const SimResult r = Simulate(s);
  for (std::size_t k = 1; k < r.states.size(); ++k) EXPECT_EQ(r.states[k][1], 1);
}

TEST(ParseScenario, ModelPathAndPreset) {
  const std::string dir = testing::TempPath("scen");
  std::filesystem::create_directories(dir);
  testing::WriteFile(dir + "/house.yaml",
                     "appliances:\n  - id: A\n    states: [{label: s1, rating: 7}]\n");
  testing::WriteFile(dir + "/s.yaml", "model: house.yaml\nlength: 20\n");
  const SimScenario s = LoadScenario(dir + "/s.yaml");
  EXPECT_EQ(s.model.specs[0].id, "A");
  EXPECT_EQ(s.length, 20u);

  const SimScenario p = ParseScenario("preset: chatter\nseed: 9\nlength: 50\n", ".");
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(Simulate(p).series.aggregate,
            Simulate(Preset("chatter", 9, 50)).series.aggregate);
}

TEST(ParseScenario, Errors) {
  const auto message = [](const std::string& text) -> std::string {
    try {
      ParseScenario(text, ".");
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message("preset: nope\n").find("unknown preset"), std::string::npos);
  EXPECT_NE(message("length: 5\n").find("/model"), std::string::npos);
  const std::string bad_row = message(
      "model:\n  appliances:\n    - id: A\n      states: [{label: s1, rating: 1}]\n"
      "transitions:\n  A: [[0.5, 0.2], [0, 1]]\n");
  EXPECT_NE(bad_row.find("InvalidScenario"), std::string::npos) << bad_row;
}

}  // namespace
}  // namespace alip
