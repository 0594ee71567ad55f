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

// Span-level QA metrics (exact match, token F1), strict entity scoring and
// the error taxonomy used in reports.

#ifndef MINER_METRICS_H_
#define MINER_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "miner/corpus.h"

namespace miner {

// Lowercase, collapse whitespace, strip punctuation at both ends.
std::string normalize_answer(std::string_view text);
std::vector<std::string> answer_tokens(std::string_view text);

// nullopt stands for a null (no-answer) prediction or gold.
int squad_em(const std::optional<std::string>& pred, const std::optional<std::string>& gold);
double squad_f1(const std::optional<std::string>& pred, const std::optional<std::string>& gold);

struct PrfCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  // Empty denominators yield 0.
  double precision() const;
  double recall() const;
  double f1() const;
  PrfCounts& operator+=(const PrfCounts& other);
  nlohmann::ordered_json to_json() const;
};

enum class MatchMode {
  kStrict,   // category and span identical
  kOverlap,  // category identical, spans overlap; analysis only
};

struct EntityScores {
  PrfCounts micro;
  std::map<std::string, PrfCounts> per_category;  // keyed by expanded label

  nlohmann::ordered_json to_json() const;
};

// Predictions and gold for one document, in one coordinate system whose
// extent is `length` bytes.
struct ScoredDocument {
  std::string doc_id;
  size_t length = 0;
  std::vector<EntityAnnotation> pred;
  std::vector<EntityAnnotation> gold;
};

// Micro-averaged over all documents. Throws CoordError when a span exceeds
// its document.
EntityScores entity_prf(const std::vector<ScoredDocument>& docs,
                        MatchMode mode = MatchMode::kStrict);
EntityScores entity_prf(const std::vector<EntityAnnotation>& pred,
                        const std::vector<EntityAnnotation>& gold, size_t length,
                        MatchMode mode = MatchMode::kStrict);

struct ErrorCounts {
  long boundary = 0;
  long type_confusion = 0;
  long spurious = 0;
  long missed = 0;

  long total() const { return boundary + type_confusion + spurious + missed; }
  ErrorCounts& operator+=(const ErrorCounts& other);
  nlohmann::ordered_json to_json() const;
};

// Exact matches are removed first. Remaining predictions and golds are paired
// greedily by overlap (ties by earliest gold, then earliest prediction):
// same category with a different span is a boundary error, identical span
// with a different category is a type confusion. Unpaired predictions are
// spurious, unpaired golds missed.
ErrorCounts error_taxonomy(const std::vector<EntityAnnotation>& pred,
                           const std::vector<EntityAnnotation>& gold);

}  // namespace miner

#endif  // MINER_METRICS_H_
