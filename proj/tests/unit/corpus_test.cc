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

#include <sstream>

#include "miner/corpus.h"
#include "test_util.h"

namespace miner {
namespace {

using testing::sample_minute;

TEST(Corpus, ParsesCodePointOffsets) {
  nlohmann::json rec = {
      {"doc_id", "d1"},
      {"municipality", "Évora"},
      {"language", "pt"},
      {"text", "Reunião em Évora. Presidente: Ana Lúcia."},
      {"entities", {{{"kind", "PRESIDENT"}, {"start", 30}, {"end", 39}}}},
      {"segments", {{{"type", "opening"}, {"start", 0}, {"end", 40}}, {{"type", "closing"}, {"null", true}}}}};
  AnnotatedMinute m = parse_minute(rec);
  ASSERT_EQ(m.entities.size(), 1u);
  EXPECT_EQ(m.entities[0].surface, "Ana Lúcia");
  EXPECT_EQ(m.entities[0].category.presence, Presence::kPresent);
  EXPECT_FALSE(m.segment(SegmentType::kClosing).has_value());
  EXPECT_EQ(slice(m.doc.text, *m.segment(SegmentType::kOpening)), m.doc.text);
}

TEST(Corpus, RejectsBadRecords) {
  nlohmann::json base = {{"doc_id", "d"}, {"municipality", "M"}, {"language", "pt"}, {"text", "abc"}};
  nlohmann::json bad_lang = base;
  bad_lang["language"] = "fr";
  EXPECT_THROW(parse_minute(bad_lang), SchemaError);
  nlohmann::json bad_span = base;
  bad_span["entities"] = {{{"kind", "DATE"}, {"start", 2}, {"end", 9}}};
  EXPECT_THROW(parse_minute(bad_span), SpanError);
  nlohmann::json bad_kind = base;
  bad_kind["entities"] = {{{"kind", "WEATHER"}, {"start", 0}, {"end", 1}}};
  EXPECT_THROW(parse_minute(bad_kind), SchemaError);
  nlohmann::json bad_presence = base;
  bad_presence["entities"] = {{{"kind", "DATE"}, {"presence", "ABSENT"}, {"start", 0}, {"end", 1}}};
  EXPECT_THROW(parse_minute(bad_presence), SchemaError);
  nlohmann::json overlap = base;
  overlap["entities"] = {{{"kind", "DATE"}, {"start", 0}, {"end", 2}},
                         {{"kind", "LOCATION"}, {"start", 1}, {"end", 3}}};
  EXPECT_THROW(parse_minute(overlap), SpanError);
}

TEST(Corpus, SerializeRoundTrip) {
  AnnotatedMinute m = sample_minute();
  std::string line = serialize_minute(m);
  AnnotatedMinute back = parse_minute(nlohmann::json::parse(line));
  EXPECT_EQ(back.doc.text, m.doc.text);
  EXPECT_EQ(back.entities, m.entities);
  EXPECT_EQ(back.segments, m.segments);
  EXPECT_EQ(serialize_minute(back), line);
}

TEST(Corpus, DuplicateIdsRejected) {
  std::vector<AnnotatedMinute> ms = {sample_minute("a"), sample_minute("a")};
  EXPECT_THROW(Corpus{ms}, SchemaError);
}

TEST(Corpus, JsonlStream) {
  std::stringstream ss;
  ss << serialize_minute(sample_minute("a")) << "\n\n" << serialize_minute(sample_minute("b")) << "\n";
  Corpus c = parse_corpus(ss);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_TRUE(c.contains("b"));
  EXPECT_EQ(c.municipalities(), std::vector<std::string>{"Vale Serrano"});
}

TEST(LabelInventory, DefaultTagsAndExtension) {
  LabelInventory labels;
  EXPECT_EQ(labels.size(), 10);
  EXPECT_EQ(labels.num_tags(), 21);
  for (int l = 0; l < labels.size(); ++l) {
    EXPECT_EQ(labels.parse_tag(labels.tag_name(begin_tag(l))), begin_tag(l));
    EXPECT_EQ(labels.parse_tag(labels.tag_name(inside_tag(l))), inside_tag(l));
    EXPECT_EQ(tag_label(begin_tag(l)), l);
  }
  EXPECT_EQ(labels.tag_name(0), "O");
  Category odd{Kind::kPresident, Presence::kAbsent};
  EXPECT_FALSE(labels.find(odd));
  LabelInventory ext = LabelInventory::from_categories({odd});
  EXPECT_EQ(ext.size(), 11);
  EXPECT_EQ(ext.category(ext.label_of(odd)), odd);
}

TEST(SquadV2, AnswersAndImpossible) {
  AnnotatedMinute m = sample_minute();
  BoundaryPrompt open{SegmentType::kOpening, "Onde começa?"};
  BoundaryPrompt close{SegmentType::kClosing, "Onde acaba?"};
  QaInstance a = to_squad_v2(m, m.segments[0], open);
  EXPECT_FALSE(a.is_impossible);
  EXPECT_EQ(slice(a.context, a.answer), a.answer_text);
  EXPECT_THROW(to_squad_v2(m, m.segments[0], close), ConfigError);
  SegmentAnnotation none{SegmentType::kClosing, std::nullopt};
  QaInstance b = to_squad_v2(m, none, close);
  EXPECT_TRUE(b.is_impossible);
  auto j = squad_v2_json({a, b});
  EXPECT_EQ(j["version"], "v2.0");
  ASSERT_EQ(j["data"].size(), 1u);
  const auto& qas = j["data"][0]["paragraphs"][0]["qas"];
  ASSERT_EQ(qas.size(), 2u);
  EXPECT_EQ(qas[1]["is_impossible"], true);
  EXPECT_EQ(qas[0]["answers"][0]["answer_start"], 0);
}

TEST(Bio, SnapsInnerBoundariesOrThrowsInStrictMode) {
  const std::string text = "Presidente: Ana Silva.";
  auto tokens = tokenize_words(text);
  LabelInventory labels;
  std::vector<EntityAnnotation> ann = {{make_category(Kind::kPresident), {13, 21}, "na Silva"}};
  TagSequence t = to_bio(text, tokens, ann, labels);
  int l = labels.label_of(make_category(Kind::kPresident));
  EXPECT_EQ(t.tags, (std::vector<int>{0, 0, begin_tag(l), inside_tag(l), 0}));
  EXPECT_THROW(to_bio(text, tokens, ann, labels, true), AlignmentError);
}

TEST(Snap, ExpandsToCoveringSentences) {
  const std::string text = "Um. Dois dois. Três.";
  auto sents = sentence_split(text, Language::kPt);
  Span s = snap_to_sentences(sents, {6, 9});
  EXPECT_EQ(slice(text, s), "Dois dois.");
  Span t = snap_to_sentences(sents, {1, 6});
  EXPECT_EQ(slice(text, t), "Um. Dois dois.");
}

TEST(Conll, TwoColumns) {
  const std::string text = "Ana Silva";
  auto tokens = tokenize_words(text);
  LabelInventory labels;
  TagSequence t = to_bio(text, tokens, {{make_category(Kind::kPresident), {0, 9}, text}}, labels);
  EXPECT_EQ(to_conll(text, t, labels), "Ana\tB-PRESIDENT\nSilva\tI-PRESIDENT\n\n");
}

}  // namespace
}  // namespace miner
