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

// Evaluation protocols: global split, leave-one-municipality-out and
// incremental target-municipality fine-tuning, plus the reports they emit.

#ifndef MINER_PROTOCOLS_H_
#define MINER_PROTOCOLS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/boundary.h"
#include "miner/corpus.h"
#include "miner/deslex.h"
#include "miner/mer.h"
#include "miner/meter.h"
#include "miner/metrics.h"
#include "miner/pipeline.h"

namespace miner {

struct QaScores {
  double em = 0.0;
  double f1 = 0.0;
  int questions = 0;
  std::map<std::string, std::pair<double, double>> per_segment;  // type -> (em, f1)

  nlohmann::ordered_json to_json() const;
};

// Scores one prediction per (minute, segment type) against the gold segment
// text; absent segments are null answers.
QaScores score_segments(const std::vector<AnnotatedMinute>& test,
                        const std::vector<std::pair<SpanPrediction, SpanPrediction>>& predictions);

QaScores evaluate_boundary(const BoundaryModelHandle& qa, const std::vector<AnnotatedMinute>& test,
                           double null_threshold);

// Sparse (BM25) and dense retrieval baselines; the window size is the mean
// gold segment length on `train`.
QaScores evaluate_bm25(const std::vector<AnnotatedMinute>& train,
                       const std::vector<AnnotatedMinute>& test);
QaScores evaluate_dense(const std::vector<AnnotatedMinute>& train,
                        const std::vector<AnnotatedMinute>& test);

// Entity scores of a region model on gold regions of `test`.
std::vector<ScoredDocument> score_gold_regions(const NerModelHandle& ner,
                                               const std::vector<AnnotatedMinute>& test);

struct ModelReport {
  std::string name;
  EntityScores scores;
  ErrorCounts errors;
  std::optional<QaScores> qa;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

ModelReport make_model_report(std::string name, const std::vector<ScoredDocument>& docs);

struct EvalReport {
  std::string protocol;
  std::vector<ModelReport> models;
  std::vector<ModelReport> qa_models;  // boundary detection and baselines
  std::optional<ResourceReport> resource;
  bool with_energy = true;
  // Leave-one-out folds or incremental curve points.
  std::vector<nlohmann::ordered_json> folds;
  std::vector<std::pair<std::string, std::string>> failures;  // fold, message
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  const ModelReport* model(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

struct ProtocolConfig {
  Language language = Language::kPt;
  uint64_t split_seed = 42;
  BoundaryHyperparams boundary;
  NerHyperparams ner;
  // Trains a second, deslexicalized entity model alongside the base one.
  std::optional<DeslexPolicy> deslex;
  PipelineConfig pipeline;
  bool baselines = true;
  // Incremental protocol.
  int k_max = 5;
  int incremental_epochs = 5;
};

// Models trained by the global protocol, for saving.
struct GlobalArtifacts {
  std::optional<BoundaryModelHandle> qa;
  std::optional<NerModelHandle> ner;
  std::optional<NerModelHandle> ner_deslex;
};

// Trains boundary and entity models on the 60/20/20 split and scores them on
// the test documents: boundary QA, retrieval baselines, entity recognition
// on gold regions, and the full pipeline (metered when `meter` is given).
EvalReport run_global_eval(const Corpus& corpus, const ProtocolConfig& config,
                           ResourceMeter* meter = nullptr, GlobalArtifacts* artifacts = nullptr);

// Entity recognition on gold regions, one fold per held-out municipality.
// Fold failures are recorded and the remaining folds still run; the
// aggregate pools the predictions of every completed fold.
EvalReport run_leave_one_out(const Corpus& corpus, const ProtocolConfig& config);

// F1 curve for k = 0..k_max target documents on a fixed test set. k = 0 is
// the leave-one-out model; every k > 0 continues from it on the first k
// target documents for a fixed number of epochs.
EvalReport run_incremental(const Corpus& corpus, const std::string& municipality,
                           const ProtocolConfig& config);

// Pipeline vs. a full-document entity model on the global split.
EvalReport run_ablation(const Corpus& corpus, const ProtocolConfig& config);

}  // namespace miner

#endif  // MINER_PROTOCOLS_H_
