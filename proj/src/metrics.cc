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

#include "miner/metrics.h"

#include <algorithm>
#include <tuple>

#include <fmt/core.h>

#include "miner/errors.h"

namespace miner {

std::string normalize_answer(std::string_view text) {
  std::string s = collapse_whitespace(to_lower(text));
  // Strip non-word, non-space code points from both ends.
  size_t begin = 0, end = s.size();
  while (begin < end) {
    size_t len = 1;
    char32_t cp = decode_utf8(s, begin, &len);
    if (is_word_codepoint(cp)) break;
    begin += len;
  }
  while (end > begin) {
    size_t start = end - 1;
    while (start > begin && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    size_t len = 1;
    char32_t cp = decode_utf8(s, start, &len);
    if (is_word_codepoint(cp)) break;
    end = start;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> answer_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string norm = normalize_answer(text);
  size_t pos = 0;
  while (pos < norm.size()) {
    size_t next = norm.find(' ', pos);
    if (next == std::string::npos) next = norm.size();
    if (next > pos) tokens.push_back(norm.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

int squad_em(const std::optional<std::string>& pred, const std::optional<std::string>& gold) {
  if (!pred || !gold) return !pred && !gold ? 1 : 0;
  return normalize_answer(*pred) == normalize_answer(*gold) ? 1 : 0;
}

double squad_f1(const std::optional<std::string>& pred, const std::optional<std::string>& gold) {
  if (!pred || !gold) return !pred && !gold ? 1.0 : 0.0;
  std::vector<std::string> p = answer_tokens(*pred), g = answer_tokens(*gold);
  if (p.empty() || g.empty()) return p.empty() && g.empty() ? 1.0 : 0.0;
  std::map<std::string, long> counts;
  for (const auto& t : g) ++counts[t];
  long common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / p.size();
  double recall = static_cast<double>(common) / g.size();
  return 2 * precision * recall / (precision + recall);
}

double PrfCounts::precision() const { return tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0; }
double PrfCounts::recall() const { return tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0; }
double PrfCounts::f1() const {
  double p = precision(), r = recall();
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

PrfCounts& PrfCounts::operator+=(const PrfCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

nlohmann::ordered_json PrfCounts::to_json() const {
  return {{"precision", precision()}, {"recall", recall()}, {"f1", f1()},
          {"tp", tp},                 {"fp", fp},           {"fn", fn}};
}

nlohmann::ordered_json EntityScores::to_json() const {
  nlohmann::ordered_json j;
  j["micro"] = micro.to_json();
  j["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [label, counts] : per_category) j["per_category"][label] = counts.to_json();
  return j;
}

namespace {

void check_bounds(const std::string& doc_id, size_t length,
                  const std::vector<EntityAnnotation>& entities) {
  for (const auto& e : entities) {
    if (e.span.begin > e.span.end || e.span.end > length) {
      throw CoordError(fmt::format("doc '{}': span [{}, {}) exceeds length {}", doc_id,
                                   e.span.begin, e.span.end, length));
    }
  }
}

bool matches(const EntityAnnotation& p, const EntityAnnotation& g, MatchMode mode) {
  if (p.category != g.category) return false;
  return mode == MatchMode::kStrict ? p.span == g.span : p.span.overlaps(g.span);
}

void score_document(const std::vector<EntityAnnotation>& pred,
                    const std::vector<EntityAnnotation>& gold, MatchMode mode,
                    EntityScores* scores) {
  std::vector<bool> gold_used(gold.size(), false);
  for (const auto& p : pred) {
    PrfCounts& cat = scores->per_category[p.category.label()];
    bool hit = false;
    for (size_t g = 0; g < gold.size(); ++g) {
      if (!gold_used[g] && matches(p, gold[g], mode)) {
        gold_used[g] = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      ++scores->micro.tp;
      ++cat.tp;
    } else {
      ++scores->micro.fp;
      ++cat.fp;
    }
  }
  for (size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    ++scores->micro.fn;
    ++scores->per_category[gold[g].category.label()].fn;
  }
}

}  // namespace

EntityScores entity_prf(const std::vector<ScoredDocument>& docs, MatchMode mode) {
  EntityScores scores;
  for (const auto& doc : docs) {
    check_bounds(doc.doc_id, doc.length, doc.pred);
    check_bounds(doc.doc_id, doc.length, doc.gold);
    score_document(doc.pred, doc.gold, mode, &scores);
  }
  return scores;
}

EntityScores entity_prf(const std::vector<EntityAnnotation>& pred,
                        const std::vector<EntityAnnotation>& gold, size_t length,
                        MatchMode mode) {
  return entity_prf(std::vector<ScoredDocument>{{"", length, pred, gold}}, mode);
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& other) {
  boundary += other.boundary;
  type_confusion += other.type_confusion;
  spurious += other.spurious;
  missed += other.missed;
  return *this;
}

nlohmann::ordered_json ErrorCounts::to_json() const {
  return {{"boundary", boundary},
          {"type_confusion", type_confusion},
          {"spurious", spurious},
          {"missed", missed}};
}

ErrorCounts error_taxonomy(const std::vector<EntityAnnotation>& pred,
                           const std::vector<EntityAnnotation>& gold) {
  std::vector<bool> pred_used(pred.size(), false), gold_used(gold.size(), false);
  for (size_t p = 0; p < pred.size(); ++p) {
    for (size_t g = 0; g < gold.size(); ++g) {
      if (!gold_used[g] && pred[p].category == gold[g].category && pred[p].span == gold[g].span) {
        pred_used[p] = gold_used[g] = true;
        break;
      }
    }
  }
  struct Candidate {
    size_t overlap, gold_begin, pred_begin, g, p;
    bool boundary;
  };
  std::vector<Candidate> candidates;
  for (size_t p = 0; p < pred.size(); ++p) {
    if (pred_used[p]) continue;
    for (size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g] || !pred[p].span.overlaps(gold[g].span)) continue;
      bool same_cat = pred[p].category == gold[g].category;
      bool same_span = pred[p].span == gold[g].span;
      if (same_cat == same_span) continue;  // exact match or unrelated
      size_t overlap = std::min(pred[p].span.end, gold[g].span.end) -
                       std::max(pred[p].span.begin, gold[g].span.begin);
      candidates.push_back({overlap, gold[g].span.begin, pred[p].span.begin, g, p, same_cat});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.overlap, a.gold_begin, a.pred_begin, a.g, a.p) <
           std::tie(a.overlap, b.gold_begin, b.pred_begin, b.g, b.p);
  });
  ErrorCounts counts;
  for (const auto& c : candidates) {
    if (pred_used[c.p] || gold_used[c.g]) continue;
    pred_used[c.p] = gold_used[c.g] = true;
    if (c.boundary) {
      ++counts.boundary;
    } else {
      ++counts.type_confusion;
    }
  }
  for (bool used : pred_used) counts.spurious += !used;
  for (bool used : gold_used) counts.missed += !used;
  return counts;
}

}  // namespace miner
