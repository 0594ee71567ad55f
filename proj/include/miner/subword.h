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

// WordPiece-style subword segmentation and word/piece label alignment.

#ifndef MINER_SUBWORD_H_
#define MINER_SUBWORD_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace miner {

inline constexpr std::string_view kContinuationPrefix = "##";
// Label carried by pieces excluded from loss and evaluation.
inline constexpr int kMaskedLabel = -100;

class SubwordVocab {
 public:
  // Keeps every single code point seen, plus the most frequent word-initial
  // prefixes and continuation substrings occurring at least `min_count`
  // times, up to `max_pieces` multi-character pieces.
  static SubwordVocab learn(const std::vector<std::string>& words, size_t max_pieces = 8000,
                            int min_count = 2);

  // Greedy longest-match segmentation. Continuation pieces carry the "##"
  // prefix. Characters outside the vocabulary become single-character pieces.
  std::vector<std::string> split(std::string_view word) const;

  size_t size() const { return pieces_.size(); }
  nlohmann::json to_json() const;
  static SubwordVocab from_json(const nlohmann::json& j);

 private:
  std::set<std::string, std::less<>> pieces_;
  size_t max_piece_bytes_ = 1;
};

struct SubwordAlignment {
  std::vector<int> piece_labels;     // word label on first pieces, kMaskedLabel otherwise
  std::vector<bool> scored;          // true on first pieces
  std::vector<size_t> first_piece;   // per word
  std::vector<size_t> word_of_piece;
};

// Pieces must partition the words in order. Throws AlignmentError when they
// do not, or when the label count differs from the word count.
SubwordAlignment align_subwords(const std::vector<std::string>& words,
                                const std::vector<std::string>& pieces,
                                const std::vector<int>& word_labels);

}  // namespace miner

#endif  // MINER_SUBWORD_H_
