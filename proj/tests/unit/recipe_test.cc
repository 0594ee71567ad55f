// Copyright 2026 The MiNER Authors.
//
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


#include <gtest/gtest.h>

#include <fstream>

#include "miner/recipe.h"
#include "test_util.h"

namespace miner {
namespace {

using nlohmann::json;
using testing::TempDir;

TEST(Recipe, DefaultsAndPathResolution) {
  Recipe r = Recipe::from_json({{"corpus", "data/c.jsonl"}}, "/base");
  EXPECT_EQ(r.corpus, "/base/data/c.jsonl");
  EXPECT_EQ(r.output_dir, "/base/out");
  EXPECT_EQ(r.qa_model, "/base/out/models/mbd");
  EXPECT_EQ(r.ner_model, "/base/out/models/mer");
  EXPECT_EQ(r.llm.cache_dir, "/base/out/cache");
  EXPECT_FALSE(r.deslex);
  EXPECT_FALSE(r.meter);
  EXPECT_EQ(r.split_seed, 42u);
  EXPECT_EQ(Recipe::from_json({{"corpus", "/abs/c.jsonl"}}, "/base").corpus, "/abs/c.jsonl");
}

TEST(Recipe, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THROW(Recipe::from_json({{"corpus", "c"}, {"corpra", 1}}, "/"), ConfigError);
  EXPECT_THROW(Recipe::from_json({{"corpus", "c"}, {"ner", {{"epochz", 3}}}}, "/"), ConfigError);
  EXPECT_THROW(Recipe::from_json({{"corpus", "c"}, {"split", {{"sed", 3}}}}, "/"), ConfigError);
  EXPECT_THROW(Recipe::from_json({{"corpus", "c"}, {"llm", {{"shot", 3}}}}, "/"), ConfigError);
  EXPECT_THROW(Recipe::from_json(json::object(), "/"), ConfigError);
}

TEST(Recipe, MeterRequiresCarbonIntensity) {
  EXPECT_THROW(Recipe::from_json({{"corpus", "c"}, {"meter", {{"average_watts", 65}}}}, "/"),
               ConfigError);
  Recipe r = Recipe::from_json(
      {{"corpus", "c"}, {"meter", {{"average_watts", 65}, {"carbon_intensity", 0.2}}}}, "/");
  ASSERT_TRUE(r.meter);
  EXPECT_DOUBLE_EQ(*r.meter->carbon_intensity, 0.2);
}

TEST(Recipe, EffectiveConfigRoundTripsAndHashes) {
  json j = {{"corpus", "c.jsonl"},
            {"deslex", {{"enabled", true}}},
            {"ner", {{"epochs", 4}, {"use_crf", true}}},
            {"incremental", {{"k_max", 3}}}};
  Recipe r = Recipe::from_json(j, "/base");
  ASSERT_TRUE(r.deslex);
  EXPECT_EQ(r.ner.epochs, 4);
  EXPECT_TRUE(r.ner.use_crf);
  EXPECT_EQ(r.k_max, 3);
  Recipe again = Recipe::from_json(json::parse(r.to_json().dump()), "/elsewhere");
  EXPECT_EQ(again.to_json(), r.to_json());
  EXPECT_EQ(again.hash(), r.hash());
  EXPECT_EQ(r.hash().size(), 16u);
  Recipe other = Recipe::from_json({{"corpus", "c.jsonl"}}, "/base");
  EXPECT_NE(other.hash(), r.hash());
  ProtocolConfig pc = r.protocol_config();
  EXPECT_EQ(pc.k_max, 3);
  EXPECT_TRUE(pc.deslex);
}

TEST(Recipe, LoadResolvesAgainstRecipeDirectory) {
  TempDir dir("recipe");
  {
    std::ofstream out(dir.path() / "r.json");
    out << R"({"corpus": "c.jsonl", "output_dir": "run"})";
  }
  Recipe r = Recipe::load(dir.path() / "r.json");
  EXPECT_EQ(r.corpus, dir.path() / "c.jsonl");
  EXPECT_EQ(r.output_dir, dir.path() / "run");
  {
    std::ofstream out(dir.path() / "bad.json");
    out << "{not json";
  }
  EXPECT_THROW(Recipe::load(dir.path() / "bad.json"), ConfigError);
  EXPECT_THROW(Recipe::load(dir.path() / "missing.json"), IoError);
}

}  // namespace
}  // namespace miner
