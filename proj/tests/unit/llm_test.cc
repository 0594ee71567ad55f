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

#include <random>

#include "miner/llm_baseline.h"
#include "test_util.h"

namespace miner {
namespace {

using testing::sample_minute;
using testing::TempDir;

TEST(ParseLadder, EachStageRecovers) {
  EXPECT_EQ(parse_llm_json(R"({"date": "1 de maio"})").stage, "direct");
  ParseOutcome fenced = parse_llm_json("```json\n{\"date\": \"x\"}\n```");
  EXPECT_EQ(fenced.stage, "fence");
  EXPECT_EQ(fenced.value["date"], "x");
  ParseOutcome chatty = parse_llm_json("Aqui está: {\"a\": \"}\"} Obrigado.");
  EXPECT_EQ(chatty.stage, "balanced");
  EXPECT_EQ(chatty.value["a"], "}");
  ParseOutcome sloppy = parse_llm_json("{'a': 'b', 'c': True, 'd': None,}");
  EXPECT_EQ(sloppy.stage, "tolerant");
  EXPECT_EQ(sloppy.value["c"], true);
  EXPECT_TRUE(sloppy.value["d"].is_null());
  ParseOutcome bad = parse_llm_json("não sei");
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.stage, "failed");
}

TEST(ParseLadder, Helpers) {
  EXPECT_EQ(trim(strip_code_fences("```\n{}\n```")), "{}");
  EXPECT_EQ(first_balanced_object("a {b {c}} d"), "{b {c}}");
  EXPECT_EQ(first_balanced_object("none"), "");
}

size_t oracle_edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<size_t>> d(a.size() + 1, std::vector<size_t>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

TEST(Alignment, EditDistanceMatchesDp) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    std::string a(rng() % 8, 'a'), b(rng() % 8, 'a');
    for (auto& c : a) c = 'a' + rng() % 3;
    for (auto& c : b) c = 'a' + rng() % 3;
    EXPECT_EQ(edit_distance(a, b), oracle_edit_distance(a, b)) << a << " " << b;
  }
}

TEST(Alignment, LadderLevels) {
  const std::string text = "Anabela e Ana Sousa reuniram na Câmara com João Silva.";
  auto exact = align_value(text, "Ana");
  ASSERT_TRUE(exact);
  EXPECT_EQ(exact->span.begin, text.find("Ana Sousa"));  // word boundary preferred
  EXPECT_EQ(exact->level, MatchLevel::kExact);
  auto folded = align_value(text, "camara");
  ASSERT_TRUE(folded);
  EXPECT_EQ(folded->level, MatchLevel::kFolded);
  EXPECT_EQ(slice(text, folded->span), "Câmara");
  auto fuzzy = align_value(text, "João Silvaa");
  ASSERT_TRUE(fuzzy);
  EXPECT_EQ(fuzzy->level, MatchLevel::kEditDistance);
  EXPECT_EQ(slice(text, fuzzy->span), "João Silva");
  EXPECT_FALSE(align_value(text, "Pedro Ferreira Antunes"));
  EXPECT_FALSE(align_value(text, ""));
}

TEST(Alignment, ExactSpansAreSound) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> words = {"ana", "rui", "sala", "nobre", "maio", "ata"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    std::vector<std::string> used;
    for (int i = 0; i < 12; ++i) {
      used.push_back(words[rng() % words.size()]);
      text += used.back() + " ";
    }
    std::string value = used[rng() % used.size()];
    auto a = align_value(text, value);
    ASSERT_TRUE(a);
    EXPECT_EQ(slice(text, a->span), value);
    EXPECT_EQ(a->span.begin, text.find(value));
  }
}

TEST(AnswerJson, FirstOccurrenceAndCouncilors) {
  AnnotatedMinute m = sample_minute();
  auto j = answer_json(m.entities);
  EXPECT_EQ(j["date"], "12 de março de 2023");
  EXPECT_EQ(j["president"]["name"], "João Silva");
  ASSERT_EQ(j["councilors"].size(), 3u);
  EXPECT_EQ(j["councilors"][2]["presence"], presence_name(Presence::kAbsent));
  EXPECT_TRUE(j["start_time"].is_null());
  EXPECT_EQ(values_from_answer(nlohmann::json::parse(j.dump())).size(), m.entities.size());
}

ExtractionPromptSpec spec() {
  static const AnnotatedMinute shot = sample_minute("shot", "Monte Alvo");
  return ExtractionPromptSpec::make_default(Language::kPt, {&shot}, EndpointConfig{});
}

TEST(LlmExtract, PerfectAnswerRecoversGold) {
  AnnotatedMinute m = sample_minute();
  MockEndpoint mock(std::map<std::string, std::string>{{m.doc.doc_id,
                                                        answer_json(m.entities).dump()}});
  LlmResult r = llm_extract(m.doc, spec(), mock, nullptr);
  EXPECT_TRUE(r.parse.ok);
  EXPECT_EQ(r.unaligned, 0);
  ASSERT_EQ(r.entities.size(), m.entities.size());
  std::sort(r.entities.begin(), r.entities.end(),
            [](const auto& a, const auto& b) { return a.span < b.span; });
  for (size_t i = 0; i < m.entities.size(); ++i) {
    EXPECT_EQ(r.entities[i].span, m.entities[i].span);
    EXPECT_EQ(r.entities[i].category, m.entities[i].category);
  }
  EXPECT_TRUE(r.record.president);
}

TEST(LlmExtract, GarbageYieldsEmptyRecord) {
  AnnotatedMinute m = sample_minute();
  MockEndpoint mock(std::map<std::string, std::string>{{m.doc.doc_id, "I cannot help."}});
  LlmResult r = llm_extract(m.doc, spec(), mock, nullptr);
  EXPECT_FALSE(r.parse.ok);
  EXPECT_TRUE(r.entities.empty());
  EXPECT_TRUE(r.record.councilors.empty());
}

TEST(LlmExtract, MissingMockAnswerIsEndpointError) {
  MockEndpoint mock(std::map<std::string, std::string>{});
  EXPECT_THROW(llm_extract(sample_minute().doc, spec(), mock, nullptr), EndpointError);
}

TEST(LlmExtract, CacheReplaysWithoutCalls) {
  AnnotatedMinute m = sample_minute();
  TempDir dir("llm-cache");
  MockEndpoint mock(std::map<std::string, std::string>{{m.doc.doc_id,
                                                        answer_json(m.entities).dump()}});
  LlmResult first = llm_extract(m.doc, spec(), mock, nullptr, dir.path());
  LlmResult second = llm_extract(m.doc, spec(), mock, nullptr, dir.path());
  EXPECT_EQ(mock.calls(), 1);
  EXPECT_FALSE(first.from_cache);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(first.raw, second.raw);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / spec().hash().substr(0, 16) /
                                      (m.doc.doc_id + ".json")));
}

TEST(LlmBenchmark, FabricatedValuesAreFalsePositives) {
  AnnotatedMinute m = sample_minute();
  auto answer = answer_json(m.entities);
  answer["location"] = "Biblioteca Municipal de Xangai";
  MockEndpoint mock(std::map<std::string, std::string>{{m.doc.doc_id, answer.dump()}});
  LlmBenchmark b = llm_benchmark({m}, spec(), mock, nullptr);
  EXPECT_EQ(b.unaligned, 1);
  EXPECT_EQ(b.llm.micro.tp, static_cast<long>(m.entities.size()) - 1);
  EXPECT_EQ(b.llm.micro.fp, 1);
  EXPECT_EQ(b.llm.micro.fn, 1);
  EXPECT_EQ(b.llm_errors.spurious, 1);
  EXPECT_EQ(b.documents, 1u);
}

TEST(EndpointConfig, RejectsUnknownKeys) {
  EXPECT_THROW(EndpointConfig::from_json({{"kind", "mock"}, {"modle", "x"}}), ConfigError);
  EXPECT_THROW(EndpointConfig::from_json({{"kind", "carrier-pigeon"}}), ConfigError);
  EndpointConfig c;
  EXPECT_EQ(EndpointConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(PromptSpec, HashTracksContent) {
  ExtractionPromptSpec a = spec();
  ExtractionPromptSpec b = a;
  EXPECT_EQ(a.hash(), b.hash());
  b.endpoint.temperature = 0.5;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_NE(a.render(sample_minute().doc).find("Vale Serrano"), std::string::npos);
}

}  // namespace
}  // namespace miner
