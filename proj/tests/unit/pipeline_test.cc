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

#include "miner/pipeline.h"
#include "miner/splits.h"
#include "test_util.h"

namespace miner {
namespace {

using testing::cat;
using testing::synthetic_corpus;

Entity ent(Category c, size_t b, size_t e, std::string surface, double conf) {
  Entity x;
  x.category = c;
  x.span = {b, e};
  x.surface = std::move(surface);
  x.confidence = conf;
  return x;
}

TEST(MeetingType, KeywordClasses) {
  EXPECT_EQ(classify_meeting_type("Extraordinária"), MeetingTypeClass::kExtraordinary);
  EXPECT_EQ(classify_meeting_type("reunião ordinária"), MeetingTypeClass::kOrdinary);
  EXPECT_EQ(classify_meeting_type("privada"), MeetingTypeClass::kOther);
  EXPECT_EQ(meeting_type_class_name(MeetingTypeClass::kOrdinary), "ordinary");
}

TEST(AssembleRecord, SingletonsAndCouncilors) {
  std::vector<Entity> es = {
      ent(cat(Kind::kDate), 40, 50, "2 de maio", 0.6),
      ent(cat(Kind::kDate), 10, 20, "1 de maio", 0.6),
      ent(cat(Kind::kLocation), 60, 70, "Salão", 0.4),
      ent(cat(Kind::kLocation), 80, 90, "Paços", 0.9),
      ent(cat(Kind::kCouncilor, Presence::kAbsent), 120, 130, "Rui", 0.7),
      ent(cat(Kind::kCouncilor, Presence::kPresent), 100, 110, "Ana", 0.8),
      ent(cat(Kind::kCouncilor, Presence::kPresent), 100, 110, "Ana", 0.5),
      ent(cat(Kind::kMeetingType), 0, 5, "ordinária", 0.9),
  };
  MetadataRecord r = assemble_record("d", es);
  ASSERT_TRUE(r.date);
  EXPECT_EQ(r.date->text, "1 de maio");  // earliest on ties
  ASSERT_TRUE(r.location);
  EXPECT_EQ(r.location->text, "Paços");  // most confident
  ASSERT_EQ(r.councilors.size(), 2u);
  EXPECT_EQ(r.councilors[0].name, "Ana");
  EXPECT_EQ(r.councilors[1].presence, Presence::kAbsent);
  EXPECT_EQ(r.meeting_type_class, MeetingTypeClass::kOrdinary);
  EXPECT_FALSE(r.president);
  EXPECT_EQ(r.entities.size(), es.size());
}

TEST(AssembleRecord, JsonOffsetsAreCodePoints) {
  const std::string text = "Câmara reunida às 9h00 no Salão.";
  Span time = testing::find_span(text, "9h00");
  MetadataRecord r = assemble_record("d", {ent(cat(Kind::kStartTime), time.begin, time.end,
                                               "9h00", 1.0)});
  auto j = r.to_json(text);
  EXPECT_EQ(j["start_time"]["start"], 18);
  EXPECT_EQ(j["start_time"]["end"], 22);
  EXPECT_TRUE(j["date"].is_null());
  EXPECT_TRUE(j["councilors"].empty());
  EXPECT_TRUE(j["flags"].empty());
}

struct Models {
  std::vector<AnnotatedMinute> test;
  BoundaryModelHandle qa;
  NerModelHandle ner;
};

const Models& models() {
  static const Models m = [] {
    Models m;
    const Corpus& c = synthetic_corpus();
    CorpusSplit s = make_global_split(c, 42);
    std::vector<AnnotatedMinute> train, val;
    for (const auto& id : s.train) train.push_back(c.at(id));
    for (const auto& id : s.val) val.push_back(c.at(id));
    for (const auto& id : s.test) m.test.push_back(c.at(id));
    std::vector<QaInstance> qa_train;
    for (const auto& t : train) {
      for (SegmentType type : {SegmentType::kOpening, SegmentType::kClosing}) {
        qa_train.push_back(
            to_squad_v2(t, {type, t.segment(type)}, default_prompt(type, Language::kPt)));
      }
    }
    m.qa = train_boundary(qa_train, {}, Language::kPt, {}, {});
    NerHyperparams hp;
    hp.epochs = 5;
    m.ner = train_ner(train, val, c.labels(), hp);
    return m;
  }();
  return m;
}

TEST(Extract, RecordsPointIntoSource) {
  const Models& m = models();
  for (const auto& minute : m.test) {
    PipelineTrace trace;
    MetadataRecord r = extract(minute.doc, m.qa, m.ner, {}, &trace);
    EXPECT_EQ(r.doc_id, minute.doc.doc_id);
    EXPECT_LE(trace.region_tokens, trace.document_tokens);
    for (const auto& e : r.entities) EXPECT_EQ(slice(minute.doc.text, e.span), e.surface);
    for (const auto& c : r.councilors) EXPECT_EQ(slice(minute.doc.text, c.span), c.name);
  }
}

TEST(Extract, NullRegionIsFlaggedAndEmpty) {
  const Models& m = models();
  PipelineConfig config;
  config.null_threshold = -1e12;
  MetadataRecord r = extract(m.test.front().doc, m.qa, m.ner, config);
  EXPECT_TRUE(r.no_metadata_region);
  EXPECT_TRUE(r.entities.empty());
  EXPECT_FALSE(r.date);
  EXPECT_EQ(r.to_json(m.test.front().doc.text)["flags"][0], "no_metadata_region");
}

TEST(Extract, BatchContinuesPastFailures) {
  const Models& m = models();
  std::vector<MinuteDocument> docs;
  for (const auto& t : m.test) docs.push_back(t.doc);
  docs[1].language = Language::kEn;
  BatchResult b = batch_extract(docs, m.qa, m.ner, {});
  EXPECT_EQ(b.records.size(), docs.size() - 1);
  ASSERT_EQ(b.errors.size(), 1u);
  EXPECT_EQ(b.errors[0].doc_id, docs[1].doc_id);
  EXPECT_EQ(b.traces.size(), b.records.size());
  EXPECT_EQ(b.total.energy_kwh, 0.0);
}

}  // namespace
}  // namespace miner
