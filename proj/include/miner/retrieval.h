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

// Unsupervised segment baselines: pick the contiguous sentence window that
// best matches a query, lexically (Okapi BM25) or by embedding similarity.

#ifndef MINER_RETRIEVAL_H_
#define MINER_RETRIEVAL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "miner/boundary.h"
#include "miner/corpus.h"

namespace miner {

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Lowercased, diacritic-folded word tokens (punctuation dropped).
std::vector<std::string> retrieval_terms(std::string_view text);

// BM25 score of every sentence of `doc` against `query`, with the
// document's sentences as the collection.
std::vector<double> bm25_sentence_scores(const MinuteDocument& doc, std::string_view query,
                                         const Bm25Params& params = {});

// Contiguous window of `window` sentences maximizing the summed score; the
// first such window wins ties. Never null. Requires at least one sentence.
SpanPrediction bm25_segment(const MinuteDocument& doc, std::string_view query, int window,
                            const Bm25Params& params = {});

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<float> embed(std::string_view text) const = 0;
};

// Hashed character trigrams and words, L2-normalized.
class HashedNgramEmbedder : public Embedder {
 public:
  explicit HashedNgramEmbedder(size_t dim = 1024) : dim_(dim) {}
  std::vector<float> embed(std::string_view text) const override;

 private:
  size_t dim_;
};

// Mean of pretrained word vectors read from a text file ("word v1 v2 ...").
class WordVectorEmbedder : public Embedder {
 public:
  explicit WordVectorEmbedder(const std::filesystem::path& path);
  std::vector<float> embed(std::string_view text) const override;
  size_t dim() const { return dim_; }

 private:
  size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<float>> vectors_;
};

double cosine(const std::vector<float>& a, const std::vector<float>& b);

// As bm25_segment, scoring each window by cosine similarity between the
// embedding of its text and the query embedding.
SpanPrediction dense_segment(const MinuteDocument& doc, std::string_view query, int window,
                             const Embedder& embedder);

// Mean gold segment length in sentences (rounded, at least 1) over the
// minutes that have that segment.
int mean_segment_sentences(const std::vector<const AnnotatedMinute*>& minutes, SegmentType type);

}  // namespace miner

#endif  // MINER_RETRIEVAL_H_
