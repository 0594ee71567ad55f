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

#include "miner/subword.h"

#include <algorithm>
#include <map>

#include <fmt/core.h>

#include "miner/errors.h"
#include "miner/text.h"

namespace miner {

namespace {

// Byte offsets of code point starts, plus text.size().
std::vector<size_t> codepoint_starts(std::string_view s) {
  std::vector<size_t> starts;
  for (size_t pos = 0; pos < s.size();) {
    starts.push_back(pos);
    size_t len = 1;
    decode_utf8(s, pos, &len);
    pos += len;
  }
  starts.push_back(s.size());
  return starts;
}

std::string continuation(std::string_view s) {
  std::string out(kContinuationPrefix);
  out += s;
  return out;
}

}  // namespace

SubwordVocab SubwordVocab::learn(const std::vector<std::string>& words, size_t max_pieces,
                                 int min_count) {
  constexpr size_t kMaxPieceChars = 12;
  std::map<std::string, long> counts;
  SubwordVocab vocab;
  for (const auto& word : words) {
    auto starts = codepoint_starts(word);
    const size_t n = starts.size() - 1;
    for (size_t i = 0; i < n; ++i) {
      std::string_view ch = std::string_view(word).substr(starts[i], starts[i + 1] - starts[i]);
      vocab.pieces_.insert(std::string(ch));
      vocab.pieces_.insert(continuation(ch));
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 2; j <= n && j - i <= kMaxPieceChars; ++j) {
        std::string_view sub = std::string_view(word).substr(starts[i], starts[j] - starts[i]);
        ++counts[i == 0 ? std::string(sub) : continuation(sub)];
      }
    }
  }
  std::vector<std::pair<long, std::string>> ranked;
  for (auto& [piece, count] : counts) {
    if (count >= min_count) ranked.emplace_back(count, piece);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (ranked.size() > max_pieces) ranked.resize(max_pieces);
  for (auto& [count, piece] : ranked) vocab.pieces_.insert(std::move(piece));
  for (const auto& p : vocab.pieces_) vocab.max_piece_bytes_ = std::max(vocab.max_piece_bytes_, p.size());
  return vocab;
}

std::vector<std::string> SubwordVocab::split(std::string_view word) const {
  std::vector<std::string> pieces;
  auto starts = codepoint_starts(word);
  const size_t n = starts.size() - 1;
  size_t i = 0;
  while (i < n) {
    size_t best = i + 1;
    for (size_t j = n; j > i + 1; --j) {
      size_t bytes = starts[j] - starts[i];
      if (bytes + (i == 0 ? 0 : kContinuationPrefix.size()) > max_piece_bytes_) continue;
      std::string_view sub = word.substr(starts[i], bytes);
      bool known = i == 0 ? pieces_.count(sub) > 0 : pieces_.count(continuation(sub)) > 0;
      if (known) {
        best = j;
        break;
      }
    }
    std::string_view sub = word.substr(starts[i], starts[best] - starts[i]);
    pieces.push_back(i == 0 ? std::string(sub) : continuation(sub));
    i = best;
  }
  return pieces;
}

nlohmann::json SubwordVocab::to_json() const {
  return nlohmann::json{{"pieces", std::vector<std::string>(pieces_.begin(), pieces_.end())}};
}

SubwordVocab SubwordVocab::from_json(const nlohmann::json& j) {
  SubwordVocab vocab;
  for (const auto& p : j.at("pieces")) {
    vocab.pieces_.insert(p.get<std::string>());
  }
  for (const auto& p : vocab.pieces_) vocab.max_piece_bytes_ = std::max(vocab.max_piece_bytes_, p.size());
  return vocab;
}

SubwordAlignment align_subwords(const std::vector<std::string>& words,
                                const std::vector<std::string>& pieces,
                                const std::vector<int>& word_labels) {
  if (word_labels.size() != words.size()) {
    throw AlignmentError(fmt::format("{} labels for {} words", word_labels.size(), words.size()));
  }
  SubwordAlignment out;
  size_t p = 0;
  for (size_t w = 0; w < words.size(); ++w) {
    if (p >= pieces.size()) throw AlignmentError("pieces end before word '" + words[w] + "'");
    if (pieces[p].starts_with(kContinuationPrefix) && pieces[p] != kContinuationPrefix) {
      throw AlignmentError("word '" + words[w] + "' starts with a continuation piece");
    }
    out.first_piece.push_back(p);
    std::string rebuilt = pieces[p];
    out.piece_labels.push_back(word_labels[w]);
    out.scored.push_back(true);
    out.word_of_piece.push_back(w);
    ++p;
    while (rebuilt.size() < words[w].size() && p < pieces.size() &&
           pieces[p].starts_with(kContinuationPrefix)) {
      rebuilt += pieces[p].substr(kContinuationPrefix.size());
      out.piece_labels.push_back(kMaskedLabel);
      out.scored.push_back(false);
      out.word_of_piece.push_back(w);
      ++p;
    }
    if (rebuilt != words[w]) {
      throw AlignmentError("pieces do not spell word '" + words[w] + "' (got '" + rebuilt + "')");
    }
  }
  if (p != pieces.size()) throw AlignmentError("pieces left over after the last word");
  return out;
}

}  // namespace miner
