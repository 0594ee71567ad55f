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
#include <random>

#include "miner/boundary.h"
#include "miner/mer.h"
#include "miner/splits.h"
#include "miner/subword.h"
#include "test_util.h"

namespace miner {
namespace {

using testing::sample_minute;
using testing::synthetic_corpus;
using testing::TempDir;

TEST(RepairBio, FixesOrphansAndIsIdempotent) {
  // O, B-0, I-0, B-1, I-1
  EXPECT_EQ(repair_bio({2, 2, 0, 4}), (std::vector<int>{1, 2, 0, 3}));
  EXPECT_EQ(repair_bio({1, 4}), (std::vector<int>{1, 3}));
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> tags(rng() % 10);
    for (auto& t : tags) t = rng() % 5;
    auto once = repair_bio(tags);
    EXPECT_TRUE(is_valid_bio(once));
    EXPECT_EQ(repair_bio(once), once);
    if (is_valid_bio(tags)) {
      EXPECT_EQ(once, tags);
    }
  }
}

TEST(DecodeEntities, RoundTripsThroughBio) {
  AnnotatedMinute m = sample_minute();
  ReducedRegion r = gold_region(m);
  auto gold = annotations_in_region(m, r);
  LabelInventory labels;
  auto tokens = tokenize_words(r.text);
  TagSequence seq = to_bio(r.text, tokens, gold, labels, true);
  auto entities = decode_entities(r.text, seq, labels);
  auto back = to_annotations(entities);
  ASSERT_EQ(back.size(), gold.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    EXPECT_EQ(back[i].span, gold[i].span);
    EXPECT_EQ(back[i].category, gold[i].category);
    EXPECT_EQ(back[i].surface, gold[i].surface);
    EXPECT_DOUBLE_EQ(entities[i].confidence, 1.0);
  }
}

TEST(Subwords, SplitPartitionsWords) {
  std::vector<std::string> words = {"reunião", "reuniões", "câmara", "camarário", "vereador",
                                    "vereadora", "vereadores", "presidente"};
  SubwordVocab vocab = SubwordVocab::learn(words, 100, 2);
  for (const std::string w : {"vereadoras", "reunião", "xyzzy", "çã"}) {
    auto pieces = vocab.split(w);
    ASSERT_FALSE(pieces.empty());
    std::string rebuilt = pieces[0];
    for (size_t i = 1; i < pieces.size(); ++i) {
      ASSERT_TRUE(pieces[i].starts_with("##"));
      rebuilt += pieces[i].substr(2);
    }
    EXPECT_EQ(rebuilt, w);
  }
  EXPECT_EQ(SubwordVocab::from_json(vocab.to_json()).split("vereadoras"),
            vocab.split("vereadoras"));
}

TEST(Subwords, AlignmentLabelsFirstPieces) {
  auto a = align_subwords({"ana", "silva"}, {"an", "##a", "silva"}, {1, 2});
  EXPECT_EQ(a.piece_labels, (std::vector<int>{1, kMaskedLabel, 2}));
  EXPECT_EQ(a.first_piece, (std::vector<size_t>{0, 2}));
  EXPECT_EQ(a.word_of_piece, (std::vector<size_t>{0, 0, 1}));
  EXPECT_THROW(align_subwords({"ana"}, {"an"}, {1}), AlignmentError);
  EXPECT_THROW(align_subwords({"ana"}, {"ana"}, {1, 2}), AlignmentError);
  EXPECT_THROW(align_subwords({"ana", "b"}, {"ana", "##b"}, {1, 2}), AlignmentError);
}

TEST(Placeholder, GuardRejectsLeaks) {
  EXPECT_NO_THROW(check_no_placeholder("d", "Câmara de Vale", "@MUNICIPIO"));
  EXPECT_THROW(check_no_placeholder("d", "Câmara de @MUNICIPIO", "@MUNICIPIO"), DataError);
}

struct Split {
  std::vector<AnnotatedMinute> train, val, test;
};

const Split& split() {
  static const Split s = [] {
    Split s;
    const Corpus& c = synthetic_corpus();
    CorpusSplit cs = make_global_split(c, 42);
    for (const auto& id : cs.train) s.train.push_back(c.at(id));
    for (const auto& id : cs.val) s.val.push_back(c.at(id));
    for (const auto& id : cs.test) s.test.push_back(c.at(id));
    return s;
  }();
  return s;
}

std::vector<NerExample> examples(const std::vector<AnnotatedMinute>& ms) {
  std::vector<NerExample> out;
  for (const auto& m : ms) out.push_back(make_ner_example(m, RegionMode::kSegments));
  return out;
}

const NerModelHandle& softmax_model() {
  static const NerModelHandle h = [] {
    NerHyperparams hp;
    hp.epochs = 6;
    return train_ner(split().train, split().val, synthetic_corpus().labels(), hp);
  }();
  return h;
}

TEST(NerModel, LearnsSyntheticEntities) {
  const NerModelHandle& h = softmax_model();
  EXPECT_GE(ner_micro_f1(h, examples(split().test)), 0.85);
  EXPECT_TRUE(h.metrics.contains("best_epoch"));
}

TEST(NerModel, OutputsAreValidBio) {
  const NerModelHandle& h = softmax_model();
  for (const auto& m : split().test) {
    TaggedRegion t = tag(h, gold_region(m), m.doc.language);
    EXPECT_TRUE(is_valid_bio(t.sequence.tags));
    EXPECT_EQ(t.sequence.tags.size(), t.sequence.tokens.size());
    EXPECT_EQ(t.token_probs.size(), t.sequence.tokens.size());
  }
}

TEST(NerModel, RegionEntitiesMapToSource) {
  const NerModelHandle& h = softmax_model();
  for (const auto& m : split().test) {
    ReducedRegion r = gold_region(m);
    for (const auto& e : region_entities(h, r, tag(h, r, m.doc.language))) {
      EXPECT_EQ(slice(m.doc.text, e.span), e.surface);
      EXPECT_GE(e.confidence, 0.0);
      EXPECT_LE(e.confidence, 1.0);
    }
  }
}

TEST(NerModel, CrfVariantDecodesValidBio) {
  NerHyperparams hp;
  hp.epochs = 4;
  hp.use_crf = true;
  NerModelHandle h = train_ner(split().train, split().val, synthetic_corpus().labels(), hp);
  ASSERT_TRUE(h.crf);
  EXPECT_GE(ner_micro_f1(h, examples(split().test)), 0.8);
  for (const auto& m : split().test) {
    EXPECT_TRUE(is_valid_bio(tag(h, gold_region(m), m.doc.language).sequence.tags));
  }
}

TEST(NerModel, SaveLoadReproducesTags) {
  const NerModelHandle& h = softmax_model();
  TempDir dir("mer");
  save_ner(h, dir.path() / "ckpt");
  NerModelHandle loaded = load_ner(dir.path() / "ckpt");
  EXPECT_EQ(loaded.labels, h.labels);
  for (const auto& m : split().test) {
    ReducedRegion r = gold_region(m);
    TaggedRegion a = tag(h, r, m.doc.language);
    TaggedRegion b = tag(loaded, r, m.doc.language);
    EXPECT_EQ(a.sequence.tags, b.sequence.tags);
    EXPECT_EQ(a.token_probs, b.token_probs);
  }
}

TEST(NerModel, LanguageMismatchRejected) {
  EXPECT_THROW(tag_text(softmax_model(), "Ata da reunião.", Language::kEn), BackendError);
}

TEST(NerModel, PlaceholderInValidationRejected) {
  NerHyperparams hp;
  hp.epochs = 1;
  DeslexPolicy policy = DeslexPolicy::from_json(nlohmann::json::object());
  std::vector<AnnotatedMinute> val = {sample_minute("leak", policy.municipality_placeholder)};
  EXPECT_THROW(train_ner(split().train, val, synthetic_corpus().labels(), hp,
                         RegionMode::kSegments, policy),
               DataError);
}

TEST(NerModel, EmptyTrainingRejected) {
  EXPECT_THROW(train_ner({}, {}, LabelInventory(), NerHyperparams{}), DataError);
}

TEST(NerHyperparams, JsonRoundTripAndValidation) {
  NerHyperparams hp;
  hp.use_crf = true;
  EXPECT_EQ(NerHyperparams::from_json(hp.to_json()).to_json(), hp.to_json());
  EXPECT_THROW(NerHyperparams::from_json({{"epochs", -1}}), ConfigError);
}

}  // namespace
}  // namespace miner
