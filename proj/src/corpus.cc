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

#include "miner/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "miner/errors.h"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kNumKinds> kKindNames = {
    "MEETING_NUMBER", "DATE",         "LOCATION",  "START_TIME",
    "END_TIME",       "MEETING_TYPE", "PRESIDENT", "COUNCILOR"};

constexpr std::array<std::string_view, 4> kPresenceNames = {
    "PRESENT", "ABSENT", "SUBSTITUTED", "NOT_APPLICABLE"};

}  // namespace

std::string_view kind_name(Kind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::string_view presence_name(Presence presence) {
  return kPresenceNames[static_cast<int>(presence)];
}

Kind parse_kind(std::string_view name) {
  for (int i = 0; i < kNumKinds; ++i) {
    if (kKindNames[i] == name) return static_cast<Kind>(i);
  }
  throw SchemaError("unknown entity kind '" + std::string(name) + "'");
}

Presence parse_presence(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kPresenceNames[i] == name) return static_cast<Presence>(i);
  }
  throw SchemaError("unknown presence '" + std::string(name) + "'");
}

bool is_participant(Kind kind) {
  return kind == Kind::kPresident || kind == Kind::kCouncilor;
}

std::string Category::label() const {
  std::string name(kind_name(kind));
  if (kind == Kind::kCouncilor ||
      (kind == Kind::kPresident && presence != Presence::kPresent)) {
    name += "_";
    name += presence_name(presence);
  }
  return name;
}

Category make_category(Kind kind, std::optional<Presence> presence) {
  if (is_participant(kind)) {
    Presence p = presence.value_or(Presence::kPresent);
    if (p == Presence::kNotApplicable) p = Presence::kPresent;
    return {kind, p};
  }
  if (presence && *presence != Presence::kNotApplicable) {
    throw SchemaError(fmt::format("presence {} is not applicable to {}",
                                  presence_name(*presence), kind_name(kind)));
  }
  return {kind, Presence::kNotApplicable};
}

std::string_view segment_type_name(SegmentType type) {
  return type == SegmentType::kOpening ? "opening" : "closing";
}

std::optional<Span> AnnotatedMinute::segment(SegmentType type) const {
  for (const auto& s : segments) {
    if (s.type == type) return s.span;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LabelInventory

LabelInventory::LabelInventory() {
  for (Kind k : {Kind::kMeetingNumber, Kind::kDate, Kind::kLocation,
                 Kind::kStartTime, Kind::kEndTime, Kind::kMeetingType}) {
    categories_.push_back(make_category(k));
  }
  categories_.push_back({Kind::kPresident, Presence::kPresent});
  categories_.push_back({Kind::kCouncilor, Presence::kPresent});
  categories_.push_back({Kind::kCouncilor, Presence::kAbsent});
  categories_.push_back({Kind::kCouncilor, Presence::kSubstituted});
}

LabelInventory LabelInventory::from_categories(
    const std::vector<Category>& extra) {
  LabelInventory inv;
  std::set<Category> seen(inv.categories_.begin(), inv.categories_.end());
  std::vector<Category> sorted = extra;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& c : sorted) {
    if (seen.insert(c).second) inv.categories_.push_back(c);
  }
  return inv;
}

std::optional<int> LabelInventory::find(const Category& category) const {
  for (int i = 0; i < size(); ++i) {
    if (categories_[i] == category) return i;
  }
  return std::nullopt;
}

int LabelInventory::label_of(const Category& category) const {
  auto l = find(category);
  if (!l) throw DataError("category " + category.label() + " not in inventory");
  return *l;
}

std::string LabelInventory::tag_name(int tag) const {
  if (tag == 0) return "O";
  return (tag_is_begin(tag) ? "B-" : "I-") + categories_.at(tag_label(tag)).label();
}

int LabelInventory::parse_tag(std::string_view name) const {
  if (name == "O") return 0;
  if (name.size() > 2 && (name.substr(0, 2) == "B-" || name.substr(0, 2) == "I-")) {
    for (int l = 0; l < size(); ++l) {
      if (categories_[l].label() == name.substr(2)) {
        return name[0] == 'B' ? begin_tag(l) : inside_tag(l);
      }
    }
  }
  throw DataError("unknown tag '" + std::string(name) + "'");
}

std::vector<std::string> LabelInventory::label_names() const {
  std::vector<std::string> names;
  for (const auto& c : categories_) names.push_back(c.label());
  return names;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<AnnotatedMinute> minutes)
    : minutes_(std::move(minutes)) {
  std::vector<Category> cats;
  for (size_t i = 0; i < minutes_.size(); ++i) {
    if (!index_.emplace(minutes_[i].doc.doc_id, i).second) {
      throw SchemaError("duplicate doc_id '" + minutes_[i].doc.doc_id + "'");
    }
    for (const auto& e : minutes_[i].entities) cats.push_back(e.category);
  }
  labels_ = LabelInventory::from_categories(cats);
}

const AnnotatedMinute& Corpus::at(const std::string& doc_id) const {
  auto it = index_.find(doc_id);
  if (it == index_.end()) throw DataError("unknown doc_id '" + doc_id + "'");
  return minutes_[it->second];
}

bool Corpus::contains(const std::string& doc_id) const {
  return index_.count(doc_id) > 0;
}

std::vector<std::string> Corpus::municipalities() const {
  std::vector<std::string> out;
  for (const auto& m : minutes_) {
    if (std::find(out.begin(), out.end(), m.doc.municipality) == out.end()) {
      out.push_back(m.doc.municipality);
    }
  }
  return out;
}

Corpus Corpus::subset(const std::vector<std::string>& doc_ids) const {
  std::vector<AnnotatedMinute> out;
  out.reserve(doc_ids.size());
  for (const auto& id : doc_ids) out.push_back(at(id));
  Corpus sub(std::move(out));
  sub.labels_ = labels_;
  return sub;
}

// ---------------------------------------------------------------------------
// JSONL

Span snap_to_sentences(const std::vector<Span>& sentences, const Span& span) {
  Span out = span;
  bool first = true;
  for (const auto& s : sentences) {
    bool touches = s.overlaps(span) ||
                   (span.empty() && s.contains(span.begin));
    if (!touches) continue;
    if (first) {
      out = s;
      first = false;
    } else {
      out.begin = std::min(out.begin, s.begin);
      out.end = std::max(out.end, s.end);
    }
  }
  return out;
}

namespace {

template <typename T>
T require(const json& record, const char* field, const std::string& doc_id) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw SchemaError(fmt::format("doc '{}': missing field '{}'", doc_id, field));
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(
        fmt::format("doc '{}': field '{}' has the wrong type", doc_id, field));
  }
}

Span byte_span(const Utf8Offsets& offsets, int64_t start, int64_t end,
               const std::string& doc_id, const char* what) {
  if (start < 0 || end < start ||
      static_cast<size_t>(end) > offsets.codepoints()) {
    throw SpanError(fmt::format("doc '{}': {} span [{}, {}) outside text of {} chars",
                                doc_id, what, start, end, offsets.codepoints()));
  }
  return {offsets.to_byte(start), offsets.to_byte(end)};
}

}  // namespace

void validate_minute(const AnnotatedMinute& m) {
  const auto& d = m.doc;
  if (d.doc_id.empty()) throw SchemaError("empty doc_id");
  if (d.municipality.empty()) {
    throw SchemaError("doc '" + d.doc_id + "': empty municipality");
  }
  for (size_t i = 0; i < m.entities.size(); ++i) {
    const auto& e = m.entities[i];
    if (e.span.end > d.text.size() || e.span.empty()) {
      throw SpanError(fmt::format("doc '{}': entity {} has invalid span", d.doc_id, i));
    }
    if (slice(d.text, e.span) != e.surface) {
      throw SpanError(fmt::format("doc '{}': entity {} surface mismatch", d.doc_id, i));
    }
    if (i > 0 && m.entities[i - 1].span.overlaps(e.span)) {
      throw SpanError(fmt::format("doc '{}': overlapping entities at {} and {}",
                                  d.doc_id, i - 1, i));
    }
  }
  std::optional<Span> opening, closing;
  int seen_open = 0, seen_close = 0;
  for (const auto& s : m.segments) {
    (s.type == SegmentType::kOpening ? seen_open : seen_close)++;
    if (s.span) {
      if (s.span->empty() || s.span->end > d.text.size()) {
        throw SpanError(fmt::format("doc '{}': invalid {} segment", d.doc_id,
                                    segment_type_name(s.type)));
      }
      (s.type == SegmentType::kOpening ? opening : closing) = s.span;
    }
  }
  if (seen_open > 1 || seen_close > 1) {
    throw SchemaError("doc '" + d.doc_id + "': duplicate segment type");
  }
  if (opening && closing && opening->end > closing->begin) {
    throw SpanError("doc '" + d.doc_id + "': opening segment overlaps closing");
  }
}

AnnotatedMinute parse_minute(const json& record) {
  if (!record.is_object()) throw SchemaError("record is not a JSON object");
  AnnotatedMinute m;
  std::string id_for_errors =
      record.contains("doc_id") && record["doc_id"].is_string()
          ? record["doc_id"].get<std::string>()
          : "<unknown>";
  m.doc.doc_id = require<std::string>(record, "doc_id", id_for_errors);
  const std::string& id = m.doc.doc_id;
  m.doc.municipality = require<std::string>(record, "municipality", id);
  try {
    m.doc.language = parse_language(require<std::string>(record, "language", id));
  } catch (const SchemaError& e) {
    throw SchemaError(fmt::format("doc '{}': field 'language': {}", id, e.what()));
  }
  m.doc.text = require<std::string>(record, "text", id);
  m.doc.sentences = sentence_split(m.doc.text, m.doc.language);
  Utf8Offsets offsets(m.doc.text);

  if (record.contains("entities")) {
    const auto& ents = record["entities"];
    if (!ents.is_array()) {
      throw SchemaError(fmt::format("doc '{}': field 'entities' must be an array", id));
    }
    for (const auto& e : ents) {
      Kind kind;
      std::optional<Presence> presence;
      try {
        kind = parse_kind(require<std::string>(e, "kind", id));
        if (e.contains("presence")) {
          presence = parse_presence(require<std::string>(e, "presence", id));
        }
      } catch (const SchemaError& err) {
        throw SchemaError(fmt::format("doc '{}': field 'entities': {}", id, err.what()));
      }
      EntityAnnotation ann;
      ann.category = make_category(kind, presence);
      ann.span = byte_span(offsets, require<int64_t>(e, "start", id),
                           require<int64_t>(e, "end", id), id, "entity");
      ann.surface = std::string(slice(m.doc.text, ann.span));
      m.entities.push_back(std::move(ann));
    }
    std::stable_sort(m.entities.begin(), m.entities.end(),
                     [](const auto& a, const auto& b) { return a.span < b.span; });
  }

  if (record.contains("segments")) {
    const auto& segs = record["segments"];
    if (!segs.is_array()) {
      throw SchemaError(fmt::format("doc '{}': field 'segments' must be an array", id));
    }
    for (const auto& s : segs) {
      SegmentAnnotation seg;
      std::string type = require<std::string>(s, "type", id);
      if (type == "opening") {
        seg.type = SegmentType::kOpening;
      } else if (type == "closing") {
        seg.type = SegmentType::kClosing;
      } else {
        throw SchemaError(fmt::format("doc '{}': field 'segments': bad type '{}'", id, type));
      }
      bool is_null = s.contains("null") && s["null"].is_boolean() && s["null"].get<bool>();
      if (!is_null) {
        Span raw = byte_span(offsets, require<int64_t>(s, "start", id),
                             require<int64_t>(s, "end", id), id, "segment");
        if (raw.empty()) {
          throw SpanError(fmt::format("doc '{}': empty {} segment", id, type));
        }
        Span snapped = snap_to_sentences(m.doc.sentences, raw);
        if (snapped != raw) {
          log_warning(fmt::format("doc '{}': {} segment snapped to sentence boundaries",
                                  id, type));
        }
        seg.span = snapped;
      }
      m.segments.push_back(seg);
    }
  }
  if (record.contains("deslex")) m.deslex = record["deslex"];
  validate_minute(m);
  return m;
}

Corpus parse_corpus(std::istream& in) {
  std::vector<AnnotatedMinute> minutes;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(fmt::format("line {}: invalid JSON: {}", lineno, e.what()));
    }
    minutes.push_back(parse_minute(record));
  }
  return Corpus(std::move(minutes));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  return parse_corpus(in);
}

std::string serialize_minute(const AnnotatedMinute& m) {
  Utf8Offsets offsets(m.doc.text);
  ordered_json j;
  j["doc_id"] = m.doc.doc_id;
  j["municipality"] = m.doc.municipality;
  j["language"] = language_code(m.doc.language);
  j["text"] = m.doc.text;
  j["entities"] = ordered_json::array();
  for (const auto& e : m.entities) {
    ordered_json ej;
    ej["kind"] = kind_name(e.category.kind);
    ej["presence"] = presence_name(e.category.presence);
    ej["start"] = offsets.to_codepoint(e.span.begin);
    ej["end"] = offsets.to_codepoint(e.span.end);
    j["entities"].push_back(std::move(ej));
  }
  j["segments"] = ordered_json::array();
  for (const auto& s : m.segments) {
    ordered_json sj;
    sj["type"] = segment_type_name(s.type);
    if (s.span) {
      sj["start"] = offsets.to_codepoint(s.span->begin);
      sj["end"] = offsets.to_codepoint(s.span->end);
    } else {
      sj["null"] = true;
    }
    j["segments"].push_back(std::move(sj));
  }
  if (!m.deslex.is_null()) j["deslex"] = m.deslex;
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::strict);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& m : corpus.minutes()) out << serialize_minute(m) << '\n';
}

// ---------------------------------------------------------------------------
// SQuAD v2

QaInstance to_squad_v2(const AnnotatedMinute& minute,
                       const SegmentAnnotation& segment,
                       const BoundaryPrompt& prompt) {
  if (prompt.segment_type != segment.type) {
    throw ConfigError("prompt does not match segment type");
  }
  QaInstance qa;
  qa.doc_id = minute.doc.doc_id;
  qa.id = minute.doc.doc_id + "::" + std::string(segment_type_name(segment.type));
  qa.context = minute.doc.text;
  qa.question = prompt.question_text;
  qa.segment_type = segment.type;
  if (segment.span) {
    if (segment.span->end > qa.context.size() || segment.span->empty()) {
      throw SpanError("segment span outside document '" + qa.doc_id + "'");
    }
    qa.is_impossible = false;
    qa.answer = *segment.span;
    qa.answer_text = std::string(slice(qa.context, qa.answer));
  }
  return qa;
}

ordered_json squad_v2_json(const std::vector<QaInstance>& instances) {
  ordered_json root;
  root["version"] = "v2.0";
  root["data"] = ordered_json::array();
  std::map<std::string, size_t> article_of;
  for (const auto& qa : instances) {
    auto [it, inserted] = article_of.emplace(qa.doc_id, root["data"].size());
    if (inserted) {
      ordered_json article;
      article["title"] = qa.doc_id;
      ordered_json para;
      para["context"] = qa.context;
      para["qas"] = ordered_json::array();
      article["paragraphs"] = ordered_json::array({para});
      root["data"].push_back(std::move(article));
    }
    auto& para = root["data"][it->second]["paragraphs"][0];
    ordered_json q;
    q["id"] = qa.id;
    q["question"] = qa.question;
    q["answers"] = ordered_json::array();
    if (!qa.is_impossible) {
      Utf8Offsets offsets(qa.context);
      ordered_json a;
      a["text"] = qa.answer_text;
      a["answer_start"] = offsets.to_codepoint(qa.answer.begin);
      q["answers"].push_back(std::move(a));
    }
    q["is_impossible"] = qa.is_impossible;
    para["qas"].push_back(std::move(q));
  }
  return root;
}

// ---------------------------------------------------------------------------
// BIO

TagSequence to_bio(std::string_view region_text, const std::vector<Span>& tokens,
                   const std::vector<EntityAnnotation>& annotations,
                   const LabelInventory& labels, bool strict) {
  TagSequence out;
  out.tokens = tokens;
  out.tags.assign(tokens.size(), 0);
  for (const auto& ann : annotations) {
    if (ann.span.end > region_text.size()) {
      throw SpanError("annotation outside region text");
    }
    size_t first = tokens.size(), last = 0;
    bool misaligned = false;
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (!tokens[t].overlaps(ann.span)) continue;
      first = std::min(first, t);
      last = t;
      if ((tokens[t].begin < ann.span.begin) || (tokens[t].end > ann.span.end)) {
        misaligned = true;
      }
    }
    if (first == tokens.size()) {
      log_warning("annotation '" + ann.surface + "' covers no token; dropped");
      continue;
    }
    if (misaligned) {
      if (strict) {
        throw AlignmentError("annotation '" + ann.surface +
                             "' boundary falls inside a token");
      }
      log_warning("annotation '" + ann.surface + "' snapped outward to tokens");
    }
    bool clash = false;
    for (size_t t = first; t <= last; ++t) clash |= out.tags[t] != 0;
    if (clash) {
      log_warning("annotation '" + ann.surface + "' collides after snapping; dropped");
      continue;
    }
    int label = labels.label_of(ann.category);
    out.tags[first] = begin_tag(label);
    for (size_t t = first + 1; t <= last; ++t) out.tags[t] = inside_tag(label);
  }
  return out;
}

std::string to_conll(std::string_view region_text, const TagSequence& tagged,
                     const LabelInventory& labels) {
  std::string out;
  for (size_t t = 0; t < tagged.tokens.size(); ++t) {
    out += slice(region_text, tagged.tokens[t]);
    out += '\t';
    out += labels.tag_name(tagged.tags[t]);
    out += '\n';
  }
  out += '\n';
  return out;
}

}  // namespace miner
