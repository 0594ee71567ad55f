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

// End-to-end extraction: boundary detection, region tagging and assembly of
// one structured record per minute.

#ifndef MINER_PIPELINE_H_
#define MINER_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/boundary.h"
#include "miner/corpus.h"
#include "miner/mer.h"
#include "miner/meter.h"
#include "miner/metrics.h"

namespace miner {

struct FieldValue {
  std::string text;
  Span span;  // source document bytes
  double confidence = 0.0;
};

struct ParticipantValue {
  std::string name;
  Presence presence = Presence::kPresent;
  Span span;
  double confidence = 0.0;
};

enum class MeetingTypeClass { kOrdinary, kExtraordinary, kOther };
std::string_view meeting_type_class_name(MeetingTypeClass c);
// Keyword table over the folded surface ("extraordinária" before
// "ordinária"); anything else is kOther.
MeetingTypeClass classify_meeting_type(std::string_view surface);

struct MetadataRecord {
  std::string doc_id;
  std::optional<FieldValue> meeting_number;
  std::optional<FieldValue> meeting_type;
  MeetingTypeClass meeting_type_class = MeetingTypeClass::kOther;
  std::optional<FieldValue> date;
  std::optional<FieldValue> location;
  std::optional<FieldValue> start_time;
  std::optional<FieldValue> end_time;
  std::optional<ParticipantValue> president;
  std::vector<ParticipantValue> councilors;  // document order
  bool no_metadata_region = false;
  // Every decoded entity, in source coordinates; used for scoring.
  std::vector<EntityAnnotation> entities;

  // Offsets in code points of `source_text`.
  nlohmann::ordered_json to_json(std::string_view source_text) const;
};

// Singletons keep the most confident candidate (earliest on ties);
// councilors keep document order without duplicate spans.
MetadataRecord assemble_record(const std::string& doc_id, std::vector<Entity> entities);

struct PipelineConfig {
  double null_threshold = 0.0;
  bool strict_overlap = false;
};

struct PipelineTrace {
  SpanPrediction opening;
  SpanPrediction closing;
  ReducedRegion region;
  size_t region_tokens = 0;
  size_t document_tokens = 0;
};

MetadataRecord extract(const MinuteDocument& doc, const BoundaryModelHandle& qa,
                       const NerModelHandle& ner, const PipelineConfig& config,
                       PipelineTrace* trace = nullptr);

// Tags the whole document with a model trained on full documents.
MetadataRecord extract_full_document(const MinuteDocument& doc, const NerModelHandle& ner);

struct BatchError {
  std::string doc_id;
  std::string message;
};

struct BatchResult {
  std::vector<MetadataRecord> records;  // corpus order, failed documents skipped
  std::vector<BatchError> errors;
  std::vector<std::pair<std::string, ResourceReport>> per_document;
  ResourceReport total;
  std::vector<PipelineTrace> traces;  // parallel to records
};

// Per-document failures are collected and the batch continues. Without a
// meter only wall time is reported.
BatchResult batch_extract(const std::vector<MinuteDocument>& docs, const BoundaryModelHandle& qa,
                          const NerModelHandle& ner, const PipelineConfig& config,
                          ResourceMeter* meter = nullptr);

struct AblationReport {
  EntityScores pipeline;
  EntityScores full_document;
  ErrorCounts pipeline_errors;
  ErrorCounts full_document_errors;
  size_t region_tokens = 0;
  size_t document_tokens = 0;
  double pipeline_train_seconds = 0.0;
  double full_document_train_seconds = 0.0;

  double token_reduction() const {
    return document_tokens ? 1.0 - static_cast<double>(region_tokens) / document_tokens : 0.0;
  }
  nlohmann::ordered_json to_json() const;
};

// Scores the two-stage pipeline against a model tagging full documents on
// the same minutes (gold in source coordinates).
AblationReport run_ablation_no_mbd(const std::vector<AnnotatedMinute>& test,
                                   const BoundaryModelHandle& qa, const NerModelHandle& ner_region,
                                   const NerModelHandle& ner_full, const PipelineConfig& config);

}  // namespace miner

#endif  // MINER_PIPELINE_H_
