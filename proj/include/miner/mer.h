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

// Metadata entity recognition over a reduced region: BIO token
// classification with optional linear-chain CRF decoding.

#ifndef MINER_MER_H_
#define MINER_MER_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/boundary.h"
#include "miner/corpus.h"
#include "miner/crf.h"
#include "miner/deslex.h"
#include "miner/learn.h"
#include "miner/subword.h"

namespace miner {

// Orphan I-l (after O or at the start) and I-l after a different label
// become B-l.
std::vector<int> repair_bio(const std::vector<int>& tags);
bool is_valid_bio(const std::vector<int>& tags);

struct Entity {
  Category category;
  size_t first_token = 0;  // inclusive
  size_t last_token = 0;   // inclusive
  Span span;               // into the tagged text
  std::string surface;
  double confidence = 1.0;
};

// Maximal B/I runs (after repair). Confidence is the mean of `token_probs`
// over the run, or 1 when no probabilities are given.
std::vector<Entity> decode_entities(std::string_view text, const TagSequence& tags,
                                    const LabelInventory& labels,
                                    const std::vector<double>& token_probs = {});
std::vector<EntityAnnotation> to_annotations(const std::vector<Entity>& entities);

struct NerHyperparams {
  int epochs = 15;
  int patience = 3;
  int batch_size = 2;
  int grad_accum = 4;
  // Step size of the sparse AdaGrad backend.
  double learning_rate = 0.1;
  double weight_decay = 0.01;
  int max_length = 512;
  int stride = 128;
  bool use_crf = false;
  bool mask_transitions = true;
  uint64_t seed = 17;

  nlohmann::ordered_json to_json() const;
  static NerHyperparams from_json(const nlohmann::json& j);
};

enum class RegionMode {
  kSegments,      // gold opening + closing segments
  kFullDocument,  // the whole minute (no boundary detection)
};

struct NerExample {
  std::string doc_id;
  Language language = Language::kPt;
  std::string text;
  std::vector<EntityAnnotation> annotations;  // in `text` coordinates
};

NerExample make_ner_example(const AnnotatedMinute& minute, RegionMode mode);

struct TaggedRegion {
  TagSequence sequence;
  std::vector<double> token_probs;  // probability of the chosen tag
  Emissions emissions;              // per-token per-tag scores
};

struct NerModelHandle {
  LabelInventory labels;
  SubwordVocab vocab;
  FeatureSpace space;
  LinearLayer layer;
  std::optional<CrfParameters> crf;
  NerHyperparams hyperparams;
  Language language = Language::kPt;
  RegionMode region_mode = RegionMode::kSegments;
  bool deslex = false;
  nlohmann::ordered_json deslex_policy;  // null unless deslex
  std::string data_fingerprint;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

// Tags word tokens of `text`; long inputs are windowed over subword pieces
// and stitched by the higher per-token probability. Throws BackendError on a
// language mismatch.
TaggedRegion tag_text(const NerModelHandle& handle, const std::string& text, Language lang);
TaggedRegion tag(const NerModelHandle& handle, const ReducedRegion& region, Language lang);

// Entities of a tagged region mapped to source-document coordinates;
// entities straddling the separator are dropped.
std::vector<Entity> region_entities(const NerModelHandle& handle, const ReducedRegion& region,
                                    const TaggedRegion& tagged);

// Trains on examples with early stopping on validation entity micro-F1.
// `warm_start` continues from an existing model (vocabulary kept). Throws
// DataError on empty training data or when a validation input contains the
// municipality placeholder.
NerModelHandle train_ner_examples(const std::vector<NerExample>& train,
                                  const std::vector<NerExample>& val, const LabelInventory& labels,
                                  const NerHyperparams& hp,
                                  const NerModelHandle* warm_start = nullptr);

// Builds examples from minutes. With a deslex policy, training minutes (and
// only those) are deslexicalized first.
NerModelHandle train_ner(const std::vector<AnnotatedMinute>& train,
                         const std::vector<AnnotatedMinute>& val, const LabelInventory& labels,
                         const NerHyperparams& hp, RegionMode mode = RegionMode::kSegments,
                         const std::optional<DeslexPolicy>& deslex = std::nullopt,
                         const NerModelHandle* warm_start = nullptr);

// Micro entity scores of a model on examples, in example coordinates.
double ner_micro_f1(const NerModelHandle& handle, const std::vector<NerExample>& examples);

// Throws DataError when `text` contains the placeholder.
void check_no_placeholder(const std::string& doc_id, std::string_view text,
                          std::string_view placeholder);

void save_ner(const NerModelHandle& handle, const std::filesystem::path& dir);
NerModelHandle load_ner(const std::filesystem::path& dir);

}  // namespace miner

#endif  // MINER_MER_H_
