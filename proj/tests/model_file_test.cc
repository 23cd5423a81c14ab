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

#include "alip/model_file.h"

#include <gtest/gtest.h>

#include "alip/error.h"
#include "alip/simgen.h"
#include "test_util.h"

namespace alip {
namespace {

constexpr const char* kHouse = R"(schema: alip.model/1
unit: W
tolerance: 2
appliances:
  - id: FRG
    always_on: true
    states:
      - {label: cool, rating: 120}
      - {label: defrost, rating: 400, tmin: 400, tmax: 650}
    std:
      - [cool, defrost]
      - [defrost, cool]
  - id: TV
    states:
      - {label: on, rating: 130}
)";

std::string ErrorOf(const std::string& text) {
  try {
    ParseModelFile(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return "";
}

TEST(ParseModelFile, ReadsEverything) {
  const ModelFile f = ParseModelFile(kHouse);
  EXPECT_EQ(f.unit, "W");
  EXPECT_EQ(f.options.tolerance, 2.0);
  EXPECT_EQ(f.options.max_subset, 3);
  ASSERT_EQ(f.specs.size(), 2u);
  EXPECT_TRUE(f.specs[0].always_on);
  EXPECT_EQ(f.specs[0].states[1].transient_max, 650.0);
  EXPECT_EQ(f.specs[0].states[0].transient_min, 120.0);
  EXPECT_EQ(f.specs[0].std_edges.size(), 2u);
  const HouseholdModel m = CompileModelFile(f);
  EXPECT_EQ(m.num_states(), 3u);
  EXPECT_TRUE(m.CanTransition(0, 1, 2));
  EXPECT_FALSE(m.CanTransition(0, 1, 0));
}

TEST(ParseModelFile, GroupOverrides) {
  const std::string text = std::string(kHouse) +
                           "combo_groups:\n  - [[FRG, defrost], [TV, on]]\n"
                           "alias_groups: []\n";
  const ModelFile f = ParseModelFile(text);
  ASSERT_TRUE(f.options.combo_override.has_value());
  EXPECT_EQ(*f.options.combo_override, (std::vector<IndexSet>{{1, 2}}));
  EXPECT_TRUE(f.options.alias_override->empty());
  EXPECT_EQ(CompileModelFile(f).combo_groups(), (std::vector<IndexSet>{{1, 2}}));
}

TEST(ParseModelFile, ErrorsCiteLineAndField) {
  std::string bad = kHouse;
  bad.replace(bad.find("rating: 130"), 11, "rating: lots");
  const std::string e1 = ErrorOf(bad);
  EXPECT_NE(e1.find("line 15"), std::string::npos) << e1;
  EXPECT_NE(e1.find("appliances/1/states/0/rating"), std::string::npos) << e1;

  const std::string e2 = ErrorOf("appliances:\n  - id: X\n");
  EXPECT_NE(e2.find("appliances/0/states"), std::string::npos) << e2;

  const std::string e3 = ErrorOf("schema: alip.model/9\nappliances: []\n");
  EXPECT_NE(e3.find("schema"), std::string::npos) << e3;

  const std::string e4 = ErrorOf(std::string(kHouse) + "combo_groups:\n  - [[TV, off], [FRG, cool]]\n");
  EXPECT_NE(e4.find("unknown state TV.off"), std::string::npos) << e4;

  const std::string e5 = ErrorOf("appliances: [\n");
  EXPECT_NE(e5.find("line"), std::string::npos) << e5;
}

TEST(ParseModelFile, CompileErrorsSurface) {
  std::string bad = kHouse;
  bad.replace(bad.find("rating: 130"), 11, "rating: -5");
  const ModelFile f = ParseModelFile(bad);
  try {
    CompileModelFile(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveRating);
  }
}

TEST(ModelFileToYaml, RoundTrips) {
  const ModelFile f = ParseModelFile(kHouse);
  const ModelFile back = ParseModelFile(ModelFileToYaml(f));
  EXPECT_EQ(ModelFileToYaml(back), ModelFileToYaml(f));
  EXPECT_EQ(back.specs.size(), f.specs.size());
  EXPECT_EQ(back.specs[0].states[1].transient_max, 650.0);
  EXPECT_EQ(back.specs[0].std_edges, f.specs[0].std_edges);
  for (const std::string& name : PresetNames()) {
    const ModelFile p = Preset(name, 1, 10).model;
    const ModelFile q = ParseModelFile(ModelFileToYaml(p));
    const HouseholdModel a = CompileModelFile(p), b = CompileModelFile(q);
    EXPECT_EQ(std::vector<double>(a.ratings().begin(), a.ratings().end()),
              std::vector<double>(b.ratings().begin(), b.ratings().end()))
        << name;
    EXPECT_EQ(a.combo_groups(), b.combo_groups()) << name;
    EXPECT_EQ(a.alias_groups(), b.alias_groups()) << name;
  }
}

TEST(LoadModelFile, MissingFile) {
  try {
    LoadModelFile(testing::TempPath("nope.yaml"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace alip
