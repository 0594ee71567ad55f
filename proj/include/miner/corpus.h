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

// Annotated municipal minutes: data model, JSONL ingestion, and conversion to
// the QA (SQuAD v2) and token-tagging (BIO) training formats.

#ifndef MINER_CORPUS_H_
#define MINER_CORPUS_H_

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "miner/text.h"

namespace miner {

enum class Kind {
  kMeetingNumber,
  kDate,
  kLocation,
  kStartTime,
  kEndTime,
  kMeetingType,
  kPresident,
  kCouncilor,
};
inline constexpr int kNumKinds = 8;

enum class Presence { kPresent, kAbsent, kSubstituted, kNotApplicable };

std::string_view kind_name(Kind kind);
std::string_view presence_name(Presence presence);
Kind parse_kind(std::string_view name);
Presence parse_presence(std::string_view name);
bool is_participant(Kind kind);

struct Category {
  Kind kind = Kind::kDate;
  Presence presence = Presence::kNotApplicable;

  // Expanded label name: "DATE", "COUNCILOR_ABSENT", ...
  std::string label() const;

  friend bool operator==(const Category&, const Category&) = default;
  friend auto operator<=>(const Category&, const Category&) = default;
};

// Normalizes presence for the kind: participants default to PRESENT,
// everything else is NOT_APPLICABLE. Throws SchemaError on a presence value
// attached to a non-participant kind.
Category make_category(Kind kind,
                       std::optional<Presence> presence = std::nullopt);

struct EntityAnnotation {
  Category category;
  Span span;
  std::string surface;

  friend bool operator==(const EntityAnnotation&,
                         const EntityAnnotation&) = default;
};

enum class SegmentType { kOpening, kClosing };
std::string_view segment_type_name(SegmentType type);

struct SegmentAnnotation {
  SegmentType type = SegmentType::kOpening;
  std::optional<Span> span;  // nullopt: no such segment in the document

  friend bool operator==(const SegmentAnnotation&,
                         const SegmentAnnotation&) = default;
};

struct MinuteDocument {
  std::string doc_id;
  std::string municipality;
  Language language = Language::kPt;
  std::string text;
  std::vector<Span> sentences;
};

// A document with its gold metadata annotations.
struct AnnotatedMinute {
  MinuteDocument doc;
  std::vector<EntityAnnotation> entities;   // sorted by span
  std::vector<SegmentAnnotation> segments;  // as listed in the source record
  nlohmann::ordered_json deslex;            // provenance, null when absent

  std::optional<Span> segment(SegmentType type) const;
};

// The expanded label inventory (kind x applicable presence). Fixed at corpus
// load time; every model handle stores a copy and checks it on use.
class LabelInventory {
 public:
  LabelInventory();  // the ten default labels
  static LabelInventory from_categories(const std::vector<Category>& extra);

  int size() const { return static_cast<int>(categories_.size()); }
  // Tag ids: 0 = O, 1 + 2l = B-l, 2 + 2l = I-l.
  int num_tags() const { return 1 + 2 * size(); }
  const Category& category(int label) const { return categories_.at(label); }
  // Throws DataError when the category is not in the inventory.
  int label_of(const Category& category) const;
  std::optional<int> find(const Category& category) const;
  std::string tag_name(int tag) const;
  int parse_tag(std::string_view name) const;
  std::vector<std::string> label_names() const;

  friend bool operator==(const LabelInventory&, const LabelInventory&) = default;

 private:
  std::vector<Category> categories_;
};

inline int tag_label(int tag) { return tag == 0 ? -1 : (tag - 1) / 2; }
inline bool tag_is_begin(int tag) { return tag > 0 && (tag - 1) % 2 == 0; }
inline bool tag_is_inside(int tag) { return tag > 0 && (tag - 1) % 2 == 1; }
inline int begin_tag(int label) { return 1 + 2 * label; }
inline int inside_tag(int label) { return 2 + 2 * label; }

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<AnnotatedMinute> minutes);

  const std::vector<AnnotatedMinute>& minutes() const { return minutes_; }
  size_t size() const { return minutes_.size(); }
  bool empty() const { return minutes_.empty(); }
  const AnnotatedMinute& at(const std::string& doc_id) const;
  bool contains(const std::string& doc_id) const;
  const LabelInventory& labels() const { return labels_; }
  // Municipalities in order of first appearance.
  std::vector<std::string> municipalities() const;
  Corpus subset(const std::vector<std::string>& doc_ids) const;

 private:
  std::vector<AnnotatedMinute> minutes_;
  std::map<std::string, size_t> index_;
  LabelInventory labels_;
};

// JSONL ingestion. Offsets in the file are code point offsets (end
// exclusive); they are converted to byte offsets on load.
AnnotatedMinute parse_minute(const nlohmann::json& record);
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in);

// Canonical JSONL form: fixed key order, compact, UTF-8 verbatim.
std::string serialize_minute(const AnnotatedMinute& minute);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Validates type invariants; throws SpanError / SchemaError.
void validate_minute(const AnnotatedMinute& minute);

// Expands `span` to the smallest covering run of sentences.
Span snap_to_sentences(const std::vector<Span>& sentences, const Span& span);

struct QaInstance {
  std::string id;
  std::string doc_id;
  std::string context;
  std::string question;
  SegmentType segment_type = SegmentType::kOpening;
  bool is_impossible = true;
  Span answer;  // byte span into context, meaningful when !is_impossible
  std::string answer_text;
};

struct BoundaryPrompt {
  SegmentType segment_type = SegmentType::kOpening;
  std::string question_text;
};

QaInstance to_squad_v2(const AnnotatedMinute& minute,
                       const SegmentAnnotation& segment,
                       const BoundaryPrompt& prompt);

// SQuAD v2 JSON ("version", "data" -> "paragraphs" -> "qas"). Instances of the
// same document share one paragraph. answer_start is a code point offset.
nlohmann::ordered_json squad_v2_json(const std::vector<QaInstance>& instances);

struct TagSequence {
  std::vector<Span> tokens;
  std::vector<int> tags;
};

// Maps annotations onto tokens. An annotation boundary strictly inside a
// token is snapped outward with a warning, or throws AlignmentError in strict
// mode. Annotations must already be in `region_text` coordinates.
TagSequence to_bio(std::string_view region_text, const std::vector<Span>& tokens,
                   const std::vector<EntityAnnotation>& annotations,
                   const LabelInventory& labels, bool strict = false);

// Two-column CoNLL text (token TAB tag), blank line after each region.
std::string to_conll(std::string_view region_text, const TagSequence& tagged,
                     const LabelInventory& labels);

}  // namespace miner

#endif  // MINER_CORPUS_H_
