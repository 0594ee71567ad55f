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

#include "miner/retrieval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "miner/errors.h"
#include "miner/hash.h"

namespace miner {

std::vector<std::string> retrieval_terms(std::string_view text) {
  std::string folded = fold_diacritics(text, nullptr);
  std::vector<std::string> terms;
  for (const Span& t : tokenize_words(folded)) {
    size_t len = 1;
    if (!is_word_codepoint(decode_utf8(folded, t.begin, &len))) continue;
    terms.emplace_back(slice(folded, t));
  }
  return terms;
}

std::vector<double> bm25_sentence_scores(const MinuteDocument& doc, std::string_view query,
                                         const Bm25Params& params) {
  const size_t n = doc.sentences.size();
  std::vector<std::map<std::string, int>> tf(n);
  std::vector<size_t> length(n, 0);
  std::map<std::string, int> df;
  double total_length = 0;
  for (size_t s = 0; s < n; ++s) {
    for (auto& term : retrieval_terms(slice(doc.text, doc.sentences[s]))) {
      if (tf[s][term]++ == 0) ++df[term];
      ++length[s];
    }
    total_length += length[s];
  }
  const double avgdl = n ? std::max(total_length / n, 1e-9) : 1.0;
  std::vector<double> scores(n, 0.0);
  for (const auto& term : retrieval_terms(query)) {
    auto it = df.find(term);
    if (it == df.end()) continue;
    const double nq = it->second;
    const double idf = std::log((n - nq + 0.5) / (nq + 0.5) + 1.0);
    for (size_t s = 0; s < n; ++s) {
      auto f = tf[s].find(term);
      if (f == tf[s].end()) continue;
      const double freq = f->second;
      scores[s] += idf * freq * (params.k1 + 1) /
                   (freq + params.k1 * (1 - params.b + params.b * length[s] / avgdl));
    }
  }
  return scores;
}

namespace {

SpanPrediction best_window(const MinuteDocument& doc, int window,
                           const std::function<double(size_t, size_t)>& score) {
  if (doc.sentences.empty()) throw DataError("doc '" + doc.doc_id + "' has no sentences");
  const size_t n = doc.sentences.size();
  const size_t w = std::clamp<size_t>(window < 1 ? 1 : window, 1, n);
  SpanPrediction best;
  best.span_score = -std::numeric_limits<double>::infinity();
  for (size_t first = 0; first + w <= n; ++first) {
    double s = score(first, first + w);
    if (s > best.span_score) {
      best.span_score = s;
      best.span = Span{doc.sentences[first].begin, doc.sentences[first + w - 1].end};
    }
  }
  best.null_score = 0.0;
  return best;
}

}  // namespace

SpanPrediction bm25_segment(const MinuteDocument& doc, std::string_view query, int window,
                            const Bm25Params& params) {
  std::vector<double> scores = bm25_sentence_scores(doc, query, params);
  return best_window(doc, window, [&](size_t b, size_t e) {
    double sum = 0;
    for (size_t s = b; s < e; ++s) sum += scores[s];
    return sum;
  });
}

std::vector<float> HashedNgramEmbedder::embed(std::string_view text) const {
  std::vector<float> v(dim_, 0.0f);
  for (const auto& term : retrieval_terms(text)) {
    v[fnv1a("w", term) % dim_] += 1.0f;
    std::string padded = "<" + term + ">";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      v[fnv1a("c", std::string_view(padded).substr(i, 3)) % dim_] += 0.5f;
    }
  }
  double norm = 0;
  for (float x : v) norm += double(x) * x;
  if (norm > 0) {
    float inv = static_cast<float>(1.0 / std::sqrt(norm));
    for (auto& x : v) x *= inv;
  }
  return v;
}

WordVectorEmbedder::WordVectorEmbedder(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read word vectors '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<float> vec;
    float x;
    while (fields >> x) vec.push_back(x);
    if (vec.size() <= 1 && vectors_.empty() && dim_ == 0) continue;  // "count dim" header
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_) throw DataError("inconsistent vector dimension in " + path.string());
    vectors_[fold_diacritics(word, nullptr)] = std::move(vec);
  }
  if (dim_ == 0) throw DataError("no word vectors in " + path.string());
}

std::vector<float> WordVectorEmbedder::embed(std::string_view text) const {
  std::vector<float> v(dim_, 0.0f);
  for (const auto& term : retrieval_terms(text)) {
    auto it = vectors_.find(term);
    if (it == vectors_.end()) continue;
    for (size_t i = 0; i < dim_; ++i) v[i] += it->second[i];
  }
  return v;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw DimensionError("embedding sizes differ");
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SpanPrediction dense_segment(const MinuteDocument& doc, std::string_view query, int window,
                             const Embedder& embedder) {
  std::vector<float> q = embedder.embed(query);
  return best_window(doc, window, [&](size_t b, size_t e) {
    Span span{doc.sentences[b].begin, doc.sentences[e - 1].end};
    return cosine(embedder.embed(slice(doc.text, span)), q);
  });
}

int mean_segment_sentences(const std::vector<const AnnotatedMinute*>& minutes,
                           SegmentType type) {
  double total = 0;
  int count = 0;
  for (const auto* m : minutes) {
    auto seg = m->segment(type);
    if (!seg) continue;
    int n = 0;
    for (const auto& s : m->doc.sentences) n += seg->contains(s) ? 1 : 0;
    total += std::max(n, 1);
    ++count;
  }
  if (count == 0) return 1;
  return std::max(1, static_cast<int>(std::lround(total / count)));
}

}  // namespace miner
