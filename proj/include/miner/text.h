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

#ifndef MINER_TEXT_H_
#define MINER_TEXT_H_

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace miner {

// Half-open byte interval [begin, end) into some UTF-8 text. All offsets
// inside the library are byte offsets; external formats use code points and
// are converted with Utf8Offsets at the boundary.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(size_t pos) const { return pos >= begin && pos < end; }
  bool contains(const Span& other) const {
    return other.begin >= begin && other.end <= end;
  }
  bool overlaps(const Span& other) const {
    return begin < other.end && other.begin < end;
  }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

enum class Language { kPt, kEn };

std::string_view language_code(Language lang);
// Throws SchemaError on anything but "pt" / "en".
Language parse_language(std::string_view code);

// Byte <-> code point offset conversion for one text.
class Utf8Offsets {
 public:
  explicit Utf8Offsets(std::string_view text);

  size_t codepoints() const { return cp_to_byte_.size() - 1; }
  // Code point offset -> byte offset. Returns npos when out of range.
  size_t to_byte(size_t cp) const;
  // Byte offset -> code point offset. Byte must sit on a code point boundary.
  size_t to_codepoint(size_t byte) const;
  bool is_boundary(size_t byte) const;

  static constexpr size_t npos = static_cast<size_t>(-1);

 private:
  std::vector<size_t> cp_to_byte_;
  std::vector<size_t> byte_to_cp_;
};

// Decodes the code point starting at `pos`; sets `len` to its byte length.
// Invalid sequences decode as a single byte.
char32_t decode_utf8(std::string_view text, size_t pos, size_t* len);
void append_utf8(std::string* out, char32_t cp);

bool is_word_codepoint(char32_t cp);
bool is_space_codepoint(char32_t cp);

// Lowercases ASCII and the Latin-1 / Latin Extended-A letters used by
// Portuguese and English text.
std::string to_lower(std::string_view text);
char32_t lower_codepoint(char32_t cp);

// Lowercased, diacritic-free ASCII rendering of `text`. `source_offsets`
// receives, for every output byte, the byte offset in `text` it came from,
// plus one trailing entry for text.size().
std::string fold_diacritics(std::string_view text,
                            std::vector<size_t>* source_offsets = nullptr);

// Word tokens: maximal runs of word code points, or single punctuation code
// points. Whitespace is never part of a token.
std::vector<Span> tokenize_words(std::string_view text);

// Rule-based splitter on terminal punctuation (. ! ?) and blank lines, with a
// per-language abbreviation allowlist. Intervals start at the first
// non-whitespace code point of each sentence.
std::vector<Span> sentence_split(std::string_view text, Language lang);

// Coarse orthographic shape, e.g. "Silva" -> "Xx", "10h00" -> "dxd".
std::string word_shape(std::string_view word);

std::string collapse_whitespace(std::string_view text);
std::string trim(std::string_view text);

inline std::string_view slice(std::string_view text, const Span& span) {
  return text.substr(span.begin, span.size());
}

}  // namespace miner

#endif  // MINER_TEXT_H_
