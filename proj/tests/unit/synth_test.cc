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

#include <set>
#include <sstream>

#include "miner/boundary.h"
#include "miner/synth.h"
#include "miner/text.h"
#include "test_util.h"

namespace miner {
namespace {

std::string serialize(const Corpus& c) {
  std::string out;
  for (const auto& m : c.minutes()) out += serialize_minute(m) + "\n";
  return out;
}

TEST(Synth, DeterministicPerSeed) {
  SynthConfig cfg;
  cfg.docs_per_municipality = 2;
  EXPECT_EQ(serialize(generate_synthetic_corpus(cfg)), serialize(generate_synthetic_corpus(cfg)));
  SynthConfig other = cfg;
  other.seed = 8;
  EXPECT_NE(serialize(generate_synthetic_corpus(cfg)), serialize(generate_synthetic_corpus(other)));
}

TEST(Synth, RecordsAreValidAndRoundTrip) {
  const Corpus& c = testing::synthetic_corpus();
  EXPECT_EQ(c.size(), 30u);
  EXPECT_EQ(c.municipalities().size(), 6u);
  std::istringstream in(serialize(c));
  Corpus back = parse_corpus(in);
  EXPECT_EQ(serialize(back), serialize(c));
  std::set<std::string> ids;
  for (const auto& m : c.minutes()) {
    EXPECT_NO_THROW(validate_minute(m));
    EXPECT_TRUE(ids.insert(m.doc.doc_id).second);
    EXPECT_TRUE(m.segment(SegmentType::kOpening));
    for (const auto& e : m.entities) EXPECT_EQ(slice(m.doc.text, e.span), e.surface);
  }
}

TEST(Synth, MetadataRegionIsSmallFraction) {
  size_t region = 0, total = 0;
  for (const auto& m : testing::synthetic_corpus().minutes()) {
    size_t doc_tokens = tokenize_words(m.doc.text).size();
    EXPECT_GE(doc_tokens, 1900u);
    region += tokenize_words(gold_region(m).text).size();
    total += doc_tokens;
  }
  EXPECT_LE(static_cast<double>(region) / total, 0.10);
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig cfg;
  cfg.municipalities = 0;
  EXPECT_THROW(generate_synthetic_corpus(cfg), ConfigError);
}

}  // namespace
}  // namespace miner
