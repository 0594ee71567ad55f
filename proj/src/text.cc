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

#include "miner/text.h"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "miner/errors.h"

namespace miner {

std::string_view language_code(Language lang) {
  return lang == Language::kPt ? "pt" : "en";
}

Language parse_language(std::string_view code) {
  if (code == "pt") return Language::kPt;
  if (code == "en") return Language::kEn;
  throw SchemaError("unknown language '" + std::string(code) + "'");
}

char32_t decode_utf8(std::string_view text, size_t pos, size_t* len) {
  auto byte = [&](size_t i) { return static_cast<unsigned char>(text[i]); };
  unsigned char c = byte(pos);
  auto cont = [&](size_t i) {
    return i < text.size() && (byte(i) & 0xC0) == 0x80;
  };
  if (c < 0x80) {
    *len = 1;
    return c;
  }
  if ((c & 0xE0) == 0xC0 && cont(pos + 1)) {
    *len = 2;
    return (char32_t(c & 0x1F) << 6) | (byte(pos + 1) & 0x3F);
  }
  if ((c & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    *len = 3;
    return (char32_t(c & 0x0F) << 12) | (char32_t(byte(pos + 1) & 0x3F) << 6) |
           (byte(pos + 2) & 0x3F);
  }
  if ((c & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    *len = 4;
    return (char32_t(c & 0x07) << 18) |
           (char32_t(byte(pos + 1) & 0x3F) << 12) |
           (char32_t(byte(pos + 2) & 0x3F) << 6) | (byte(pos + 3) & 0x3F);
  }
  *len = 1;
  return c;
}

void append_utf8(std::string* out, char32_t cp) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Utf8Offsets::Utf8Offsets(std::string_view text)
    : byte_to_cp_(text.size() + 1, npos) {
  size_t pos = 0;
  while (pos < text.size()) {
    byte_to_cp_[pos] = cp_to_byte_.size();
    cp_to_byte_.push_back(pos);
    size_t len = 1;
    decode_utf8(text, pos, &len);
    pos += len;
  }
  byte_to_cp_[text.size()] = cp_to_byte_.size();
  cp_to_byte_.push_back(text.size());
}

size_t Utf8Offsets::to_byte(size_t cp) const {
  return cp < cp_to_byte_.size() ? cp_to_byte_[cp] : npos;
}

size_t Utf8Offsets::to_codepoint(size_t byte) const {
  return byte < byte_to_cp_.size() ? byte_to_cp_[byte] : npos;
}

bool Utf8Offsets::is_boundary(size_t byte) const {
  return byte < byte_to_cp_.size() && byte_to_cp_[byte] != npos;
}

bool is_space_codepoint(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool is_word_codepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 'A' && cp <= 'Z');
  }
  if (cp == 0xAA || cp == 0xBA || cp == 0xB5) return true;
  if (cp < 0xC0) return false;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp <= 0x24F) return true;
  if (is_space_codepoint(cp)) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  return true;
}

char32_t lower_codepoint(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x131 &&
      cp != 0x138 && cp != 0x149 && cp != 0x17F) {
    bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179);
    if (odd_upper) return (cp % 2 == 1) ? cp + 1 : cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  return cp;
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    if (cp == static_cast<unsigned char>(text[pos]) && len == 1 && cp >= 0x80) {
      out.push_back(text[pos]);  // invalid byte, keep verbatim
    } else {
      append_utf8(&out, lower_codepoint(cp));
    }
    pos += len;
  }
  return out;
}

namespace {

// Base letter for Latin-1 Supplement U+00C0..U+00FF (lowercase), 0 = none.
constexpr std::array<const char*, 64> kLatin1Fold = {
    "a", "a", "a", "a", "a", "a", "ae", "c",  // C0-C7
    "e", "e", "e", "e", "i", "i", "i", "i",   // C8-CF
    "d", "n", "o", "o", "o", "o", "o", "",    // D0-D7
    "o", "u", "u", "u", "u", "y", "th", "ss",  // D8-DF
    "a", "a", "a", "a", "a", "a", "ae", "c",  // E0-E7
    "e", "e", "e", "e", "i", "i", "i", "i",   // E8-EF
    "d", "n", "o", "o", "o", "o", "o", "",    // F0-F7
    "o", "u", "u", "u", "u", "y", "th", "y",  // F8-FF
};

}  // namespace

std::string fold_diacritics(std::string_view text,
                            std::vector<size_t>* source_offsets) {
  std::string out;
  out.reserve(text.size());
  if (source_offsets) source_offsets->clear();
  auto emit = [&](std::string_view s, size_t src) {
    for (char c : s) {
      out.push_back(c);
      if (source_offsets) source_offsets->push_back(src);
    }
  };
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    if (cp < 0x80) {
      char c = static_cast<char>(lower_codepoint(cp));
      emit(std::string_view(&c, 1), pos);
    } else if (cp >= 0xC0 && cp <= 0xFF && kLatin1Fold[cp - 0xC0][0] != '\0') {
      emit(kLatin1Fold[cp - 0xC0], pos);
    } else if (cp == 0xAA) {
      emit("a", pos);
    } else if (cp == 0xBA) {
      emit("o", pos);
    } else {
      std::string tmp;
      append_utf8(&tmp, lower_codepoint(cp));
      emit(tmp, pos);
    }
    pos += len;
  }
  if (source_offsets) source_offsets->push_back(text.size());
  return out;
}

std::vector<Span> tokenize_words(std::string_view text) {
  std::vector<Span> tokens;
  size_t pos = 0;
  size_t word_start = std::string_view::npos;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    if (is_word_codepoint(cp)) {
      if (word_start == std::string_view::npos) word_start = pos;
    } else {
      if (word_start != std::string_view::npos) {
        tokens.push_back({word_start, pos});
        word_start = std::string_view::npos;
      }
      if (!is_space_codepoint(cp)) tokens.push_back({pos, pos + len});
    }
    pos += len;
  }
  if (word_start != std::string_view::npos) {
    tokens.push_back({word_start, text.size()});
  }
  return tokens;
}

namespace {

const std::unordered_set<std::string>& abbreviations(Language lang) {
  static const std::unordered_set<std::string> pt = {
      "sr",   "sra",  "srs",  "sras",  "dr",   "dra",  "drs",  "dras",
      "exmo", "exma", "exmos", "exmas", "prof", "profa", "eng", "enga",
      "arq",  "av",   "art",  "arts",  "n",    "nº",   "n.º",  "pág",
      "págs", "proc", "doc",  "lic",   "dto",  "ex",   "al",   "cf",
      "sto",  "sta",  "s",    "fls",   "p",    "pp",   "tel",  "v"};
  static const std::unordered_set<std::string> en = {
      "mr", "mrs", "ms", "dr", "prof", "st", "no", "nos", "vs", "jr",
      "sr", "mt",  "art", "fig", "approx", "cllr", "e.g", "i.e", "etc.",
      "rev", "hon", "pp", "p", "tel", "dept", "govt"};
  return lang == Language::kPt ? pt : en;
}

bool is_closer(char32_t cp) {
  return cp == ')' || cp == ']' || cp == '"' || cp == '\'' || cp == 0x201D ||
         cp == 0x2019 || cp == 0xBB;
}

}  // namespace

std::vector<Span> sentence_split(std::string_view text, Language lang) {
  std::vector<Span> sentences;
  const auto& abbrev = abbreviations(lang);
  size_t start = std::string_view::npos;
  size_t last_non_space_end = 0;

  auto close = [&](size_t end) {
    if (start != std::string_view::npos && start < end) {
      sentences.push_back({start, end});
    }
    start = std::string_view::npos;
  };

  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    if (is_space_codepoint(cp)) {
      if (cp == '\n' && start != std::string_view::npos) {
        // Blank line ends the sentence.
        size_t probe = pos + 1;
        while (probe < text.size() &&
               (text[probe] == ' ' || text[probe] == '\t' ||
                text[probe] == '\r')) {
          ++probe;
        }
        if (probe < text.size() && text[probe] == '\n') {
          close(last_non_space_end);
        }
      }
      pos += len;
      continue;
    }
    if (start == std::string_view::npos) start = pos;
    last_non_space_end = pos + len;

    if (cp == '.' || cp == '!' || cp == '?') {
      size_t end = pos + len;
      // Absorb runs of terminal punctuation and closing brackets/quotes.
      while (end < text.size()) {
        size_t l2 = 1;
        char32_t next = decode_utf8(text, end, &l2);
        if (next == '.' || next == '!' || next == '?' || is_closer(next)) {
          end += l2;
        } else {
          break;
        }
      }
      bool at_break = end >= text.size();
      if (!at_break) {
        size_t l2 = 1;
        at_break = is_space_codepoint(decode_utf8(text, end, &l2));
      }
      bool abbreviation = false;
      if (at_break && cp == '.' && end == pos + 1) {
        // Word (letters and inner dots) right before the period.
        size_t b = pos;
        while (b > 0) {
          size_t prev = b - 1;
          while (prev > 0 &&
                 (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) {
            --prev;
          }
          size_t l2 = 1;
          char32_t pc = decode_utf8(text, prev, &l2);
          if (!is_word_codepoint(pc) && pc != '.') break;
          b = prev;
        }
        std::string word = to_lower(text.substr(b, pos - b));
        abbreviation = !word.empty() && abbrev.count(word) > 0;
      }
      if (at_break && !abbreviation) {
        last_non_space_end = end;
        close(end);
        pos = end;
        continue;
      }
    }
    pos += len;
  }
  close(last_non_space_end);
  return sentences;
}

std::string word_shape(std::string_view word) {
  std::string shape;
  size_t pos = 0;
  while (pos < word.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(word, pos, &len);
    char c;
    if (cp >= '0' && cp <= '9') {
      c = 'd';
    } else if (is_word_codepoint(cp)) {
      c = lower_codepoint(cp) != cp ? 'X' : 'x';
    } else if (cp < 0x80) {
      c = static_cast<char>(cp);
    } else {
      c = '*';
    }
    if (shape.empty() || shape.back() != c) shape.push_back(c);
    pos += len;
  }
  return shape;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    char32_t cp = decode_utf8(text, pos, &len);
    if (is_space_codepoint(cp)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(text.substr(pos, len));
    }
    pos += len;
  }
  return out;
}

std::string trim(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t' || text[b] == '\n' ||
                   text[b] == '\r')) {
    ++b;
  }
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' ||
                   text[e - 1] == '\n' || text[e - 1] == '\r')) {
    --e;
  }
  return std::string(text.substr(b, e - b));
}

}  // namespace miner
