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

#include <gtest/gtest.h>

#include "miner/errors.h"
#include "miner/hash.h"
#include "miner/text.h"

namespace miner {
namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  for (const Span& s : tokenize_words(text)) out.emplace_back(slice(text, s));
  return out;
}

TEST(Tokenize, SplitsWordsAndPunctuation) {
  EXPECT_EQ(words("Ata n.º 12/2023, às 10h00."),
            (std::vector<std::string>{"Ata", "n", ".", "º", "12", "/", "2023", ",", "às",
                                      "10h00", "."}));
  EXPECT_TRUE(tokenize_words("   ").empty());
}

TEST(Tokenize, TokensNeverContainWhitespace) {
  const std::string text = "Câmara  Municipal\n\nde Évora\t(Portugal)";
  for (const Span& s : tokenize_words(text)) {
    for (char c : slice(text, s)) EXPECT_FALSE(c == ' ' || c == '\n' || c == '\t');
  }
}

TEST(Utf8Offsets, RoundTripsEveryBoundary) {
  const std::string text = "Reunião de Évora às 10h";
  Utf8Offsets off(text);
  EXPECT_EQ(off.codepoints(), 23u);
  for (size_t cp = 0; cp <= off.codepoints(); ++cp) {
    size_t b = off.to_byte(cp);
    ASSERT_NE(b, Utf8Offsets::npos);
    EXPECT_TRUE(off.is_boundary(b));
    EXPECT_EQ(off.to_codepoint(b), cp);
  }
  EXPECT_EQ(off.to_byte(off.codepoints() + 1), Utf8Offsets::npos);
  EXPECT_FALSE(off.is_boundary(6));  // inside "ã"
}

TEST(SentenceSplit, RespectsAbbreviationsAndBlankLines) {
  const std::string text = "O Sr. Presidente abriu a sessão. Foi lida a ata n.º 3.\n\nPONTO UM\n\nFim";
  auto sents = sentence_split(text, Language::kPt);
  std::vector<std::string> got;
  for (const Span& s : sents) got.emplace_back(slice(text, s));
  EXPECT_EQ(got, (std::vector<std::string>{"O Sr. Presidente abriu a sessão.",
                                           "Foi lida a ata n.º 3.", "PONTO UM", "Fim"}));
}

TEST(SentenceSplit, EnglishAbbreviations) {
  const std::string text = "Mr. Smith opened the meeting. It ended at 5 p.m. sharp.";
  auto sents = sentence_split(text, Language::kEn);
  ASSERT_GE(sents.size(), 1u);
  EXPECT_EQ(slice(text, sents[0]), "Mr. Smith opened the meeting.");
}

TEST(FoldDiacritics, MapsBackToSource) {
  const std::string text = "Câmara de ÉVORA";
  std::vector<size_t> offsets;
  std::string folded = fold_diacritics(text, &offsets);
  EXPECT_EQ(folded, "camara de evora");
  ASSERT_EQ(offsets.size(), folded.size() + 1);
  EXPECT_EQ(offsets.back(), text.size());
  EXPECT_EQ(text.substr(offsets[10]), "ÉVORA");
}

TEST(Text, LowerShapeTrim) {
  EXPECT_EQ(to_lower("ÁGUA Viva"), "água viva");
  EXPECT_EQ(word_shape("Silva"), "Xx");
  EXPECT_EQ(word_shape("10h00"), "dxd");
  EXPECT_EQ(collapse_whitespace("a \n\t b"), "a b");
  EXPECT_EQ(trim("  x y  "), "x y");
}

TEST(Language, ParsesCodes) {
  EXPECT_EQ(parse_language("pt"), Language::kPt);
  EXPECT_EQ(parse_language("en"), Language::kEn);
  EXPECT_THROW(parse_language("es"), SchemaError);
}

TEST(Hash, KnownVectors) {
  EXPECT_EQ(fnv1a(""), kFnvOffset);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace miner
