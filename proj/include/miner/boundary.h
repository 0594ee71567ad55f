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

// Metadata boundary detection: an extractive QA model that locates the
// opening and closing segments of a minute (or predicts that a segment is
// absent), and the reduced region built from its predictions.

#ifndef MINER_BOUNDARY_H_
#define MINER_BOUNDARY_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/corpus.h"
#include "miner/learn.h"

namespace miner {

// Default natural-language questions. Callers may override them through the
// recipe; a trained model only understands the prompts it was trained with.
BoundaryPrompt default_prompt(SegmentType type, Language lang);

struct SpanPrediction {
  std::optional<Span> span;
  double span_score = 0.0;
  double null_score = 0.0;
};

// ---------------------------------------------------------------------------
// Windowing

struct TokenWindow {
  size_t begin = 0;  // first token index (inclusive)
  size_t end = 0;    // last token index (exclusive)

  size_t to_global(size_t local) const { return begin + local; }
  bool contains(size_t first, size_t last) const { return first >= begin && last < end; }
};

// Windows of at most `max_length` tokens; consecutive windows overlap by
// `stride` tokens. Throws ConfigError unless max_length > stride.
std::vector<TokenWindow> chunk_with_stride(size_t num_tokens, size_t max_length = 512,
                                           size_t stride = 128);

// ---------------------------------------------------------------------------
// Reduced region

struct ReducedRegion {
  struct Piece {
    Span region;
    Span source;
  };

  std::string source_doc_id;
  std::string text;
  std::vector<Piece> offset_map;
  bool empty_flag = false;  // neither segment was predicted

  static constexpr std::string_view kSeparator = "\n\n";

  // Offsets outside every mapped piece (e.g. inside the separator) map to
  // nullopt. Piece ends map to source ends.
  std::optional<size_t> to_source(size_t region_offset) const;
  std::optional<size_t> to_region(size_t source_offset) const;
  // Both ends must fall into the same piece.
  std::optional<Span> span_to_source(const Span& region_span) const;
  std::optional<Span> span_to_region(const Span& source_span) const;
};

// Concatenates opening then closing text. Overlapping spans throw
// OverlapError in strict mode; otherwise the closing span is truncated to
// start where the opening ends.
ReducedRegion make_region(const MinuteDocument& doc, std::optional<Span> opening,
                          std::optional<Span> closing, bool strict = false);
ReducedRegion extract_region(const MinuteDocument& doc, const SpanPrediction& opening,
                             const SpanPrediction& closing, bool strict = false);
ReducedRegion gold_region(const AnnotatedMinute& minute);
ReducedRegion full_document_region(const MinuteDocument& doc);

// Gold annotations lying inside the region, in region coordinates.
std::vector<EntityAnnotation> annotations_in_region(const AnnotatedMinute& minute,
                                                    const ReducedRegion& region);

// ---------------------------------------------------------------------------
// QA model

struct BoundaryHyperparams {
  int epochs = 3;
  // Step size of the sparse AdaGrad backend (not a transformer learning rate).
  double learning_rate = 0.05;
  int batch_size = 8;
  double weight_decay = 0.01;
  int max_length = 512;
  int stride = 128;
  int max_answer_tokens = 512;
  uint64_t seed = 13;

  nlohmann::ordered_json to_json() const;
  static BoundaryHyperparams from_json(const nlohmann::json& j);
};

struct BoundaryTrainingDoc {
  QaInstance instance;
  Language language = Language::kPt;
};

class BoundaryModel {
 public:
  BoundaryModel() : layer_(2) {}

  // Scores every window of the context. Spans are token-level and not yet
  // snapped to sentences.
  SpanPrediction predict(const std::string& context, Language lang,
                         const std::string& question, int max_length, int stride,
                         int max_answer_tokens) const;

  void fit(const std::vector<BoundaryTrainingDoc>& train, const BoundaryHyperparams& hp);

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);
  size_t num_features() const { return space_.size(); }

 private:
  FeatureSpace space_;
  LinearLayer layer_;  // output 0 = start logit, 1 = end logit
};

struct BoundaryModelHandle {
  BoundaryModel model;
  BoundaryHyperparams hyperparams;
  Language language = Language::kPt;
  std::map<SegmentType, BoundaryPrompt> prompts;
  std::string data_fingerprint;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();

  const BoundaryPrompt& prompt(SegmentType type) const;
};

// Throws DataError on an empty training set.
BoundaryModelHandle train_boundary(const std::vector<QaInstance>& train,
                                   const std::vector<QaInstance>& val, Language lang,
                                   const BoundaryHyperparams& hp,
                                   const std::map<SegmentType, BoundaryPrompt>& prompts);

// Writes `dir/model/weights.bin` and `dir/meta.json` atomically (via a
// temporary sibling directory).
void save_boundary(const BoundaryModelHandle& handle, const std::filesystem::path& dir);
// Throws BackendError when the checkpoint is missing or inconsistent.
BoundaryModelHandle load_boundary(const std::filesystem::path& dir);

// Segment prediction for one document. NULL iff
// null_score - best_span_score > null_threshold; non-null spans are expanded
// to whole sentences.
SpanPrediction predict_segment(const BoundaryModelHandle& handle, const MinuteDocument& doc,
                               const BoundaryPrompt& prompt, double null_threshold = 0.0);

// Fingerprint of a QA training set (SHA-256 over ids, questions and answers).
std::string qa_fingerprint(const std::vector<QaInstance>& instances);

// JSONL prediction record; offsets in code points.
nlohmann::ordered_json prediction_json(const MinuteDocument& doc, SegmentType type,
                                       const SpanPrediction& prediction);

}  // namespace miner

#endif  // MINER_BOUNDARY_H_
