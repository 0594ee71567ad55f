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

#include <algorithm>
#include <cmath>
#include <random>

#include "miner/retrieval.h"
#include "test_util.h"

namespace miner {
namespace {

MinuteDocument doc_of(const std::string& text) {
  MinuteDocument d;
  d.doc_id = "r";
  d.text = text;
  d.sentences = sentence_split(text, Language::kPt);
  return d;
}

// Textbook BM25 over the sentences as documents.
std::vector<double> oracle_bm25(const std::vector<std::vector<std::string>>& sents,
                                const std::vector<std::string>& query, double k1, double b) {
  double avg = 0;
  for (const auto& s : sents) avg += s.size();
  avg /= sents.size();
  std::vector<double> out(sents.size(), 0.0);
  for (const auto& q : query) {
    double nq = 0;
    for (const auto& s : sents) nq += std::find(s.begin(), s.end(), q) != s.end();
    if (nq == 0) continue;
    double idf = std::log(1.0 + (sents.size() - nq + 0.5) / (nq + 0.5));
    for (size_t i = 0; i < sents.size(); ++i) {
      double f = std::count(sents[i].begin(), sents[i].end(), q);
      out[i] += idf * f * (k1 + 1) / (f + k1 * (1 - b + b * sents[i].size() / avg));
    }
  }
  return out;
}

TEST(RetrievalTerms, FoldsAndDropsPunctuation) {
  EXPECT_EQ(retrieval_terms("Reunião, Câmara!"),
            (std::vector<std::string>{"reuniao", "camara"}));
}

TEST(Bm25, MatchesTextbookFormula) {
  const std::vector<std::string> vocab = {"ata", "reuniao", "camara", "vereador", "presente",
                                          "ordem", "dia", "encerrada"};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    std::vector<std::vector<std::string>> sents;
    size_t ns = 1 + rng() % 6;
    for (size_t s = 0; s < ns; ++s) {
      std::vector<std::string> words;
      size_t nw = 1 + rng() % 7;
      for (size_t w = 0; w < nw; ++w) words.push_back(vocab[rng() % vocab.size()]);
      sents.push_back(words);
      for (size_t w = 0; w < nw; ++w) text += (w ? " " : "") + words[w];
      text += ". ";
    }
    MinuteDocument d = doc_of(text);
    ASSERT_EQ(d.sentences.size(), ns);
    std::vector<std::string> query = {vocab[rng() % vocab.size()], vocab[rng() % vocab.size()]};
    auto got = bm25_sentence_scores(d, query[0] + " " + query[1]);
    auto want = oracle_bm25(sents, query, 1.5, 0.75);
    for (size_t i = 0; i < ns; ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
  }
}

TEST(Bm25, WindowPicksBestContiguousRun) {
  MinuteDocument d = doc_of("Ordem do dia. Reunião da câmara. Presentes os vereadores. Nada.");
  SpanPrediction p = bm25_segment(d, "reunião câmara vereadores", 2);
  ASSERT_TRUE(p.span);
  EXPECT_EQ(p.span->begin, d.sentences[1].begin);
  EXPECT_EQ(p.span->end, d.sentences[2].end);
  SpanPrediction none = bm25_segment(d, "inexistente", 1);
  ASSERT_TRUE(none.span);
  EXPECT_EQ(*none.span, d.sentences[0]);
  EXPECT_THROW(bm25_segment(doc_of(""), "x", 1), DataError);
}

TEST(Dense, CosineAndNormalization) {
  HashedNgramEmbedder e(256);
  auto a = e.embed("reunião da câmara");
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-6);
  double norm = 0;
  for (float x : a) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-5);
  EXPECT_NEAR(cosine({1, 0}, {0, 1}), 0.0, 1e-12);
  EXPECT_GT(cosine(a, e.embed("reuniao da camara")), cosine(a, e.embed("ordem do dia")));
  MinuteDocument d = doc_of("Ordem do dia. Reunião da câmara municipal. Nada mais.");
  SpanPrediction p = dense_segment(d, "reunião câmara", 1, e);
  ASSERT_TRUE(p.span);
  EXPECT_EQ(*p.span, d.sentences[1]);
}

}  // namespace
}  // namespace miner
