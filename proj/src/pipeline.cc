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

#include "miner/pipeline.h"

#include <algorithm>
#include <set>

#include "miner/errors.h"

namespace miner {

using nlohmann::ordered_json;

std::string_view meeting_type_class_name(MeetingTypeClass c) {
  switch (c) {
    case MeetingTypeClass::kOrdinary:
      return "ordinary";
    case MeetingTypeClass::kExtraordinary:
      return "extraordinary";
    default:
      return "other";
  }
}

MeetingTypeClass classify_meeting_type(std::string_view surface) {
  std::string folded = fold_diacritics(surface, nullptr);
  if (folded.find("extraordin") != std::string::npos) return MeetingTypeClass::kExtraordinary;
  if (folded.find("ordinar") != std::string::npos) return MeetingTypeClass::kOrdinary;
  return MeetingTypeClass::kOther;
}

namespace {

bool better(const Entity& a, const Entity& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return a.span.begin < b.span.begin;
}

ordered_json field_json(const std::optional<FieldValue>& f, const Utf8Offsets& offsets) {
  if (!f) return nullptr;
  return {{"value", f->text},
          {"start", offsets.to_codepoint(f->span.begin)},
          {"end", offsets.to_codepoint(f->span.end)},
          {"confidence", f->confidence}};
}

ordered_json participant_json(const ParticipantValue& p, const Utf8Offsets& offsets) {
  return {{"name", p.name},
          {"presence", presence_name(p.presence)},
          {"start", offsets.to_codepoint(p.span.begin)},
          {"end", offsets.to_codepoint(p.span.end)},
          {"confidence", p.confidence}};
}

}  // namespace

ordered_json MetadataRecord::to_json(std::string_view source_text) const {
  Utf8Offsets offsets(source_text);
  ordered_json j;
  j["doc_id"] = doc_id;
  j["meeting_number"] = field_json(meeting_number, offsets);
  if (meeting_type) {
    ordered_json mt = field_json(meeting_type, offsets);
    mt["class"] = meeting_type_class_name(meeting_type_class);
    j["meeting_type"] = mt;
  } else {
    j["meeting_type"] = nullptr;
  }
  j["date"] = field_json(date, offsets);
  j["location"] = field_json(location, offsets);
  j["start_time"] = field_json(start_time, offsets);
  j["end_time"] = field_json(end_time, offsets);
  j["president"] = president ? participant_json(*president, offsets) : ordered_json(nullptr);
  j["councilors"] = ordered_json::array();
  for (const auto& c : councilors) j["councilors"].push_back(participant_json(c, offsets));
  j["flags"] = ordered_json::array();
  if (no_metadata_region) j["flags"].push_back("no_metadata_region");
  return j;
}

MetadataRecord assemble_record(const std::string& doc_id, std::vector<Entity> entities) {
  MetadataRecord r;
  r.doc_id = doc_id;
  std::sort(entities.begin(), entities.end(),
            [](const Entity& a, const Entity& b) { return a.span < b.span; });
  std::map<Kind, const Entity*> best;
  std::set<Span> councilor_spans;
  for (const auto& e : entities) {
    r.entities.push_back({e.category, e.span, e.surface});
    if (e.category.kind == Kind::kCouncilor) {
      if (councilor_spans.insert(e.span).second) {
        r.councilors.push_back({e.surface, e.category.presence, e.span, e.confidence});
      }
      continue;
    }
    auto [it, inserted] = best.emplace(e.category.kind, &e);
    if (!inserted && better(e, *it->second)) it->second = &e;
  }
  for (const auto& [kind, e] : best) {
    FieldValue v{e->surface, e->span, e->confidence};
    switch (kind) {
      case Kind::kMeetingNumber:
        r.meeting_number = v;
        break;
      case Kind::kMeetingType:
        r.meeting_type = v;
        r.meeting_type_class = classify_meeting_type(e->surface);
        break;
      case Kind::kDate:
        r.date = v;
        break;
      case Kind::kLocation:
        r.location = v;
        break;
      case Kind::kStartTime:
        r.start_time = v;
        break;
      case Kind::kEndTime:
        r.end_time = v;
        break;
      case Kind::kPresident:
        r.president = ParticipantValue{e->surface, e->category.presence, e->span, e->confidence};
        break;
      case Kind::kCouncilor:
        break;
    }
  }
  return r;
}

MetadataRecord extract(const MinuteDocument& doc, const BoundaryModelHandle& qa,
                       const NerModelHandle& ner, const PipelineConfig& config,
                       PipelineTrace* trace) {
  SpanPrediction opening =
      predict_segment(qa, doc, qa.prompt(SegmentType::kOpening), config.null_threshold);
  SpanPrediction closing =
      predict_segment(qa, doc, qa.prompt(SegmentType::kClosing), config.null_threshold);
  ReducedRegion region = extract_region(doc, opening, closing, config.strict_overlap);
  MetadataRecord record;
  if (region.empty_flag) {
    record.doc_id = doc.doc_id;
    record.no_metadata_region = true;
  } else {
    TaggedRegion tagged = tag(ner, region, doc.language);
    record = assemble_record(doc.doc_id, region_entities(ner, region, tagged));
  }
  if (trace) {
    trace->opening = opening;
    trace->closing = closing;
    trace->region_tokens = tokenize_words(region.text).size();
    trace->document_tokens = tokenize_words(doc.text).size();
    trace->region = std::move(region);
  }
  return record;
}

MetadataRecord extract_full_document(const MinuteDocument& doc, const NerModelHandle& ner) {
  ReducedRegion region = full_document_region(doc);
  if (region.empty_flag) {
    MetadataRecord r;
    r.doc_id = doc.doc_id;
    r.no_metadata_region = true;
    return r;
  }
  TaggedRegion tagged = tag(ner, region, doc.language);
  return assemble_record(doc.doc_id, region_entities(ner, region, tagged));
}

BatchResult batch_extract(const std::vector<MinuteDocument>& docs, const BoundaryModelHandle& qa,
                          const NerModelHandle& ner, const PipelineConfig& config,
                          ResourceMeter* meter) {
  BatchResult result;
  const double batch_start = steady_seconds();
  for (const auto& doc : docs) {
    MetadataRecord record;
    PipelineTrace trace;
    std::string error;
    auto run = [&] {
      try {
        record = extract(doc, qa, ner, config, &trace);
      } catch (const std::exception& e) {
        error = e.what();
      }
    };
    ResourceReport report;
    if (meter) {
      report = meter->measure(run);
    } else {
      double start = steady_seconds();
      run();
      report.wall_seconds = steady_seconds() - start;
    }
    result.per_document.emplace_back(doc.doc_id, report);
    if (!error.empty()) {
      result.errors.push_back({doc.doc_id, error});
      continue;
    }
    result.records.push_back(std::move(record));
    result.traces.push_back(std::move(trace));
  }
  // The batch total includes bookkeeping between documents.
  const double seconds = steady_seconds() - batch_start;
  if (meter) {
    for (const auto& [id, r] : result.per_document) result.total += r;
    result.total.wall_seconds = seconds;
    if (!result.total.measured_power) result.total = meter->report_for(seconds);
  } else {
    result.total.wall_seconds = seconds;
  }
  return result;
}

ordered_json AblationReport::to_json() const {
  ordered_json j;
  j["pipeline"] = pipeline.to_json();
  j["full_document"] = full_document.to_json();
  j["pipeline_errors"] = pipeline_errors.to_json();
  j["full_document_errors"] = full_document_errors.to_json();
  j["f1_difference"] = pipeline.micro.f1() - full_document.micro.f1();
  j["region_tokens"] = region_tokens;
  j["document_tokens"] = document_tokens;
  j["token_reduction"] = token_reduction();
  j["pipeline_train_seconds"] = pipeline_train_seconds;
  j["full_document_train_seconds"] = full_document_train_seconds;
  if (pipeline_train_seconds > 0) {
    j["train_time_ratio"] = full_document_train_seconds / pipeline_train_seconds;
  }
  return j;
}

AblationReport run_ablation_no_mbd(const std::vector<AnnotatedMinute>& test,
                                   const BoundaryModelHandle& qa, const NerModelHandle& ner_region,
                                   const NerModelHandle& ner_full, const PipelineConfig& config) {
  AblationReport report;
  std::vector<ScoredDocument> pipe_docs, full_docs;
  for (const auto& m : test) {
    PipelineTrace trace;
    MetadataRecord piped = extract(m.doc, qa, ner_region, config, &trace);
    MetadataRecord full = extract_full_document(m.doc, ner_full);
    report.region_tokens += trace.region_tokens;
    report.document_tokens += trace.document_tokens;
    pipe_docs.push_back({m.doc.doc_id, m.doc.text.size(), piped.entities, m.entities});
    full_docs.push_back({m.doc.doc_id, m.doc.text.size(), full.entities, m.entities});
    report.pipeline_errors += error_taxonomy(piped.entities, m.entities);
    report.full_document_errors += error_taxonomy(full.entities, m.entities);
  }
  report.pipeline = entity_prf(pipe_docs);
  report.full_document = entity_prf(full_docs);
  return report;
}

}  // namespace miner
